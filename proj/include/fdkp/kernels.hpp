#pragma once

#include <functional>
#include <span>
#include <string>

namespace fdkp {

enum class KernelFamily { WhithamShallow, GreenExponential, CustomRadial };

/// Radial profile of a kernel symbol, as a function of r = sqrt(k^2 + l^2).
using RadialSymbol = std::function<double(double)>;

/// Fourier symbol of a radial nonlocal kernel, normalized so that the
/// symbol equals 1 at the origin.
///
/// Built-in families:
///  - WhithamShallow:   tanh(r) / r
///  - GreenExponential: 1 / (1 + r^2)^2
/// Custom kernels are registered programmatically with `custom()`.
class KernelSpec {
 public:
  static KernelSpec whitham_shallow();
  static KernelSpec green_exponential();
  /// Throws InvalidArgument unless `profile(0) == 1`.
  static KernelSpec custom(std::string name, RadialSymbol profile);

  KernelFamily family() const { return family_; }
  const std::string& name() const { return name_; }

  /// Symbol value at radius r >= 0.
  double radial(double r) const;

 private:
  KernelSpec(KernelFamily family, std::string name, RadialSymbol profile);

  KernelFamily family_;
  std::string name_;
  RadialSymbol profile_;
};

KernelFamily parse_kernel_family(const std::string& text);

double beta_hat(const KernelSpec& kernel, double k, double l);

/// Symbol of the operator M: 1 / beta_hat - 1. Throws NonPositiveSymbol
/// where beta_hat <= 0.
double m_symbol(const KernelSpec& kernel, double k, double l);

/// Symbol of L = (1 + Dy^2/Dx^2)^{1/2} (1 + M)^{-1/2}. The ray k = 0 is
/// singular; the value 0 is returned there.
double p_symbol(const KernelSpec& kernel, double k, double l);

/// Long-wave dispersion coefficient -1/4 d^2 beta_hat / dk^2 at the origin,
/// by Richardson-extrapolated central differences (h = 1e-3, h/2).
double nu_coefficient(const KernelSpec& kernel);

enum class DispersionMode { Full, KpLongWave };

struct DispersionQuery {
  DispersionMode mode = DispersionMode::Full;
  double k = 0.0;
  double l = 0.0;
};

/// Frequency of right-going linear waves. Full mode: sqrt((k^2+l^2) beta_hat).
/// Long-wave mode: k (1 - nu k^2 + l^2 / (2 k^2)), which throws
/// SingularLongWave at k = 0.
double omega(const DispersionQuery& query, const KernelSpec& kernel, double nu);

/// Throws NonPositiveSymbol if beta_hat <= 0 (or non-finite) at any
/// combination of the given wavenumbers.
void check_kernel_positive(const KernelSpec& kernel, std::span<const double> kx,
                           std::span<const double> ky);

}  // namespace fdkp
