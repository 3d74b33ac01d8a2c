#include "fdkp/models.hpp"

#include <array>
#include <cmath>

#include "fdkp/error.hpp"

namespace fdkp {

namespace {

struct TagName {
  ModelTag tag;
  std::string_view name;
};

constexpr std::array<TagName, 12> kTagNames{{
    {ModelTag::ParentNonlocal, "parent_nonlocal"},
    {ModelTag::CubicKP, "cubic_kp"},
    {ModelTag::WhithamFDKP, "whitham_fdkp"},
    {ModelTag::BBMFDKP, "bbm_fdkp"},
    {ModelTag::SimplifiedWhithamKP, "simplified_whitham_kp"},
    {ModelTag::WhithamKPLocal, "whitham_kp_local"},
    {ModelTag::BBMKP, "bbm_kp"},
    {ModelTag::MKdV, "mkdv"},
    {ModelTag::CubicBBM, "cubic_bbm"},
    {ModelTag::ModifiedWhitham, "modified_whitham"},
    {ModelTag::ModFornbergWhitham, "mod_fornberg_whitham"},
    {ModelTag::FornbergWhitham2D, "fornberg_whitham_2d"},
}};

// l^2 / (2k), set to 0 on the k = 0 ray (zero-mass convention).
double transverse_term(double k, double l) { return k == 0.0 ? 0.0 : l * l / (2.0 * k); }

}  // namespace

ModelTag parse_model_tag(const std::string& text) {
  for (const auto& entry : kTagNames) {
    if (entry.name == text) return entry.tag;
  }
  throw Error(ErrorCode::InvalidConfig, "unknown model tag '" + text + "'");
}

std::string_view to_string(ModelTag tag) {
  for (const auto& entry : kTagNames) {
    if (entry.tag == tag) return entry.name;
  }
  return "unknown";
}

bool is_kp_family(ModelTag tag) {
  switch (tag) {
    case ModelTag::CubicKP:
    case ModelTag::SimplifiedWhithamKP:
    case ModelTag::WhithamKPLocal:
    case ModelTag::BBMKP:
    case ModelTag::FornbergWhitham2D:
      return true;
    default:
      return false;
  }
}

bool is_bbm_family(ModelTag tag) {
  return tag == ModelTag::BBMFDKP || tag == ModelTag::BBMKP || tag == ModelTag::CubicBBM;
}

bool is_first_order(ModelTag tag) { return tag != ModelTag::ParentNonlocal; }

void ModelSpec::validate() const {
  if (!(mu > 0.0)) throw Error(ErrorCode::InvalidArgument, "mu must be positive");
  if (!(nu > 0.0)) throw Error(ErrorCode::InvalidArgument, "nu must be positive");
}

RealSymbol kp_special_operator(double nu) {
  return [nu](double k, double l) {
    if (k == 0.0) return 0.0;
    return 1.0 + l * l / (2.0 * k * k) - nu * k * k;
  };
}

double linear_phase_symbol(const ModelSpec& model, double k, double l) {
  const double nu = model.nu;
  const double k2 = k * k;
  switch (model.tag) {
    case ModelTag::ParentNonlocal:
      throw Error(ErrorCode::WrongModelOrder, "ParentNonlocal is second order in time");
    case ModelTag::WhithamFDKP:
      if (model.l_operator) return k * model.l_operator(k, l);
      return k * p_symbol(model.kernel, k, l);
    case ModelTag::BBMFDKP:
      // (1 + l^2/k^2)^{1/2} k / (1 + m)^{1/2}, which is k p(k, l).
      return k * p_symbol(model.kernel, k, l);
    case ModelTag::CubicKP:
      return k - nu * k2 * k + transverse_term(k, l);
    case ModelTag::WhithamKPLocal:
      return (1.0 - nu * k2) * (k + transverse_term(k, l));
    case ModelTag::BBMKP:
      return (k + transverse_term(k, l)) / (1.0 + nu * k2);
    case ModelTag::MKdV:
      return k - nu * k2 * k;
    case ModelTag::CubicBBM:
      return k / (1.0 + nu * k2);
    case ModelTag::ModifiedWhitham:
      return k * std::sqrt(beta_hat(model.kernel, k, 0.0));
    case ModelTag::ModFornbergWhitham:
      return k / (1.0 + k2);
    case ModelTag::FornbergWhitham2D:
      return (k + transverse_term(k, l)) / (1.0 + k2);
    case ModelTag::SimplifiedWhithamKP:
      return (1.0 - 0.5 * m_symbol(model.kernel, k, l)) * (k + transverse_term(k, l));
  }
  return 0.0;
}

double nonlinear_factor(const ModelSpec& model, double k, double l) {
  switch (model.tag) {
    case ModelTag::BBMFDKP: {
      const double beta = beta_hat(model.kernel, k, l);
      if (!(beta > 0.0)) {
        throw Error(ErrorCode::NonPositiveSymbol, "kernel symbol is not positive");
      }
      return std::sqrt(beta);
    }
    case ModelTag::BBMKP:
    case ModelTag::CubicBBM:
      return 1.0 / (1.0 + model.nu * k * k);
    default:
      // Includes both Fornberg-Whitham tags: the mass operator 1 - Dx^2
      // multiplies the nonlinear term as well and cancels.
      return 1.0;
  }
}

ParentSymbols parent_symbols(const ModelSpec& model, double k, double l) {
  if (model.tag != ModelTag::ParentNonlocal) {
    throw Error(ErrorCode::WrongModelOrder, "parent symbols requested for a first-order model");
  }
  return {1.0 + m_symbol(model.kernel, k, l), k * k + l * l};
}

ModelOperator::ModelOperator(ModelSpec model, const Grid& grid)
    : model_(std::move(model)), grid_(grid), dealiaser_(grid), scratch_(grid.spectral_size()) {
  model_.validate();
  check_kernel_positive(model_.kernel, grid_.kx_values(), grid_.ky_values());
  if (is_first_order(model_.tag)) {
    const Multiplier lin = Multiplier::real(
        grid_, [&](double k, double l) { return linear_phase_symbol(model_, k, l); });
    lambda_.reserve(grid_.spectral_size());
    for (const Complex& v : lin.values()) lambda_.push_back(v.real());
    const double c = -model_.mu / 3.0;
    const Multiplier nl(grid_, [&](double k, double l) {
      return Complex(0.0, c * k * nonlinear_factor(model_, k, l));
    });
    nl_.assign(nl.values().begin(), nl.values().end());
  } else {
    const Multiplier beta = Multiplier::real(
        grid_, [&](double k, double l) { return beta_hat(model_.kernel, k, l); });
    const Multiplier stiff = Multiplier::real(grid_, [](double k, double l) { return k * k + l * l; });
    for (std::size_t n = 0; n < grid_.spectral_size(); ++n) {
      beta_.push_back(beta[n].real());
      stiffness_.push_back(stiff[n].real());
    }
    padded_.assign(grid_.is_1d() ? 3 : 6, std::vector<double>(dealiaser_.padded_size()));
  }
}

void ModelOperator::nonlinear(std::span<const Complex> coeffs, std::span<Complex> out) {
  if (!is_first_order(model_.tag)) {
    parent_bracket(coeffs, out);
    const double c = 2.0 * model_.mu / 3.0;
    for (std::size_t n = 0; n < out.size(); ++n) out[n] *= c * beta_[n];
    return;
  }
  dealiaser_.cube(coeffs, out);
  for (std::size_t n = 0; n < out.size(); ++n) out[n] *= nl_[n];
}

void ModelOperator::rhs(std::span<const Complex> v, std::span<Complex> out) {
  if (!is_first_order(model_.tag)) {
    throw Error(ErrorCode::WrongModelOrder, "rhs of ParentNonlocal needs (w, w_t)");
  }
  nonlinear(v, out);
  for (std::size_t n = 0; n < out.size(); ++n) out[n] += Complex(0.0, -lambda_[n]) * v[n];
}

void ModelOperator::parent_acceleration(std::span<const Complex> w, std::span<Complex> out) {
  if (model_.tag != ModelTag::ParentNonlocal) {
    throw Error(ErrorCode::WrongModelOrder, "parent_acceleration needs ParentNonlocal");
  }
  nonlinear(w, out);
  for (std::size_t n = 0; n < out.size(); ++n) out[n] -= beta_[n] * stiffness_[n] * w[n];
}

// (3wx^2 + wy^2) wxx + 4 wx wy wxy + (wx^2 + 3wy^2) wyy on the padded grid.
void ModelOperator::parent_bracket(std::span<const Complex> w, std::span<Complex> out) {
  const bool one_d = grid_.is_1d();
  // Derivative symbols; odd ones vanish on Nyquist columns, which the
  // padding step drops anyway.
  auto derivative = [&](int ax, int ay, std::vector<double>& samples) {
    for (int j = 0; j < grid_.ny(); ++j) {
      const double l = grid_.ky(j);
      for (int i = 0; i < grid_.nkx(); ++i) {
        const double k = grid_.kx(i);
        Complex s(1.0, 0.0);
        for (int a = 0; a < ax; ++a) s *= Complex(0.0, k);
        for (int a = 0; a < ay; ++a) s *= Complex(0.0, l);
        const std::size_t n = grid_.spectral_index(i, j);
        scratch_[n] = s * w[n];
      }
    }
    dealiaser_.to_padded(scratch_, samples);
  };
  auto& wx = padded_[0];
  auto& wxx = padded_[1];
  auto& result = padded_[2];
  derivative(1, 0, wx);
  derivative(2, 0, wxx);
  if (one_d) {
    for (std::size_t p = 0; p < result.size(); ++p) result[p] = 3.0 * wx[p] * wx[p] * wxx[p];
  } else {
    auto& wy = padded_[3];
    auto& wxy = padded_[4];
    auto& wyy = padded_[5];
    derivative(0, 1, wy);
    derivative(1, 1, wxy);
    derivative(0, 2, wyy);
    for (std::size_t p = 0; p < result.size(); ++p) {
      const double ux = wx[p];
      const double uy = wy[p];
      result[p] = (3.0 * ux * ux + uy * uy) * wxx[p] + 4.0 * ux * uy * wxy[p] +
                  (ux * ux + 3.0 * uy * uy) * wyy[p];
    }
  }
  dealiaser_.from_padded(result, out);
}

SpectralField nonlinear_flux(const ModelSpec& model, SpectralField v) {
  v.ensure_coeffs();
  ModelOperator op(model, v.grid());
  std::vector<Complex> out(v.grid().spectral_size());
  op.nonlinear(v.coeffs(), out);
  return SpectralField::from_coeffs(v.grid(), std::move(out));
}

SpectralField rhs(const ModelSpec& model, SpectralField v) {
  v.ensure_coeffs();
  ModelOperator op(model, v.grid());
  std::vector<Complex> out(v.grid().spectral_size());
  if (is_first_order(model.tag)) {
    op.rhs(v.coeffs(), out);
  } else {
    op.parent_acceleration(v.coeffs(), out);
  }
  return SpectralField::from_coeffs(v.grid(), std::move(out));
}

}  // namespace fdkp
