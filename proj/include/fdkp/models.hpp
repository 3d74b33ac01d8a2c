#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "fdkp/kernels.hpp"
#include "fdkp/spectral.hpp"

namespace fdkp {

enum class ModelTag {
  ParentNonlocal,
  CubicKP,
  WhithamFDKP,
  BBMFDKP,
  SimplifiedWhithamKP,
  WhithamKPLocal,
  BBMKP,
  MKdV,
  CubicBBM,
  ModifiedWhitham,
  ModFornbergWhitham,
  FornbergWhitham2D,
};

ModelTag parse_model_tag(const std::string& text);
std::string_view to_string(ModelTag tag);

/// Tags whose linear part contains l^2 / k and therefore need zero-mass data.
bool is_kp_family(ModelTag tag);
/// Tags whose time derivative sits under a mass operator (bounded symbols).
bool is_bbm_family(ModelTag tag);
bool is_first_order(ModelTag tag);

/// A real symbol of (k, l), used to override the operator L.
using RealSymbol = std::function<double(double, double)>;

struct ModelSpec {
  ModelTag tag = ModelTag::MKdV;
  KernelSpec kernel = KernelSpec::whitham_shallow();
  double mu = 6.0;
  double nu = 1.0;
  /// WhithamFDKP only: replaces p(k, l) in Lambda = k p(k, l).
  RealSymbol l_operator;

  /// Throws InvalidArgument unless mu > 0 and nu > 0.
  void validate() const;
};

/// Symbol of L = 1 + Dy^2 / (2 Dx^2) + nu Dx^2, i.e. 1 + l^2/(2k^2) - nu k^2
/// (0 on the k = 0 ray). With it, WhithamFDKP has the cubic KP linear part.
RealSymbol kp_special_operator(double nu);

/// Lambda(k, l) such that the linear part reads v_hat_t = -i Lambda v_hat.
/// Throws WrongModelOrder for ParentNonlocal.
double linear_phase_symbol(const ModelSpec& model, double k, double l);

/// Extra factor multiplying -(mu/3) i k (v^3)_hat: the inverse mass symbol
/// for BBM-type tags, 1 otherwise.
double nonlinear_factor(const ModelSpec& model, double k, double l);

struct ParentSymbols {
  double mass;       // 1 + m(k, l)
  double stiffness;  // k^2 + l^2
};

/// Throws WrongModelOrder unless the tag is ParentNonlocal.
ParentSymbols parent_symbols(const ModelSpec& model, double k, double l);

/// Semi-discrete operator of one model on one grid. Symbols are tabulated
/// once; scratch buffers make an instance single-threaded.
class ModelOperator {
 public:
  ModelOperator(ModelSpec model, const Grid& grid);

  const ModelSpec& model() const { return model_; }
  const Grid& grid() const { return grid_; }

  /// Tabulated Lambda, empty for ParentNonlocal.
  std::span<const double> lambda() const { return lambda_; }
  /// Tabulated -(mu/3) i k g(k, l) for first-order tags.
  std::span<const Complex> nonlinear_multiplier() const { return nl_; }

  /// Nonlinear part of v_t (first-order tags) or of w_tt (ParentNonlocal,
  /// where `coeffs` is w). Overwrites `out`.
  void nonlinear(std::span<const Complex> coeffs, std::span<Complex> out);

  /// Full right-hand side v_t = -i Lambda v + N(v) for first-order tags.
  void rhs(std::span<const Complex> v, std::span<Complex> out);

  /// ParentNonlocal: w_tt given w.
  void parent_acceleration(std::span<const Complex> w, std::span<Complex> out);

  /// Parent tables.
  std::span<const double> beta() const { return beta_; }
  std::span<const double> stiffness() const { return stiffness_; }

 private:
  void parent_bracket(std::span<const Complex> w, std::span<Complex> out);

  ModelSpec model_;
  Grid grid_;
  Dealiaser dealiaser_;
  std::vector<double> lambda_;
  std::vector<Complex> nl_;
  std::vector<double> beta_;
  std::vector<double> stiffness_;
  std::vector<Complex> scratch_;
  std::vector<std::vector<double>> padded_;
};

/// Nonlinear flux of `v` (w for ParentNonlocal) as a new field.
SpectralField nonlinear_flux(const ModelSpec& model, SpectralField v);

/// Time derivative of `v` for first-order tags, w_tt for ParentNonlocal.
SpectralField rhs(const ModelSpec& model, SpectralField v);

}  // namespace fdkp
