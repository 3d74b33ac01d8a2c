#include "fdkp/waves.hpp"

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "fdkp/error.hpp"

namespace fdkp {

namespace {

double sech(double t) { return 1.0 / std::cosh(t); }

// Unnormalized shapes in terms of t = kappa xi.
double z0_raw(double t) { return -sech(t) * std::tanh(t); }

double z1_raw(const SolitonParams& p, double xi) {
  const double t = p.kappa * xi;
  if (p.family == SolitonFamily::MKdV) {
    // (kappa xi - coth(kappa xi)) R' = kappa xi R' + kappa R, up to -kappa.
    return -sech(t) * (1.0 - t * std::tanh(t));
  }
  const double r = sech(t);
  const double r_prime = -p.kappa * r * std::tanh(t);
  return (p.kappa * p.kappa * p.nu - 1.0) * xi * r_prime - r;
}

double raw_shape(const SolitonParams& p, PerturbationProfile profile, double xi) {
  return profile == PerturbationProfile::Z0 ? z0_raw(p.kappa * xi) : z1_raw(p, xi);
}

// max |shape| over the line: dense scan, then Brent refinement.
double shape_max(const SolitonParams& p, PerturbationProfile profile) {
  const double half = 40.0 / p.kappa;
  const int samples = 8000;
  const double h = 2.0 * half / samples;
  double best_xi = 0.0;
  double best = 0.0;
  for (int n = 0; n <= samples; ++n) {
    const double xi = -half + n * h;
    const double v = std::abs(raw_shape(p, profile, xi));
    if (v > best) {
      best = v;
      best_xi = xi;
    }
  }
  const auto result = boost::math::tools::brent_find_minima(
      [&](double xi) { return -std::abs(raw_shape(p, profile, xi)); }, best_xi - h, best_xi + h,
      std::numeric_limits<double>::digits / 2);
  return std::max(best, -result.second);
}

void check_tail(const SolitonParams& params, const Grid& grid, double tolerance) {
  const double tail = params.alpha * sech(params.kappa * grid.lx() / 2.0);
  if (!(tail < tolerance)) {
    std::ostringstream msg;
    msg << "domain too narrow: tail alpha sech(kappa Lx/2) = " << tail << " >= " << tolerance
        << " (use Lx >= " << 2.0 / params.kappa * std::acosh(std::max(params.alpha / tolerance, 1.0)) << ")";
    throw Error(ErrorCode::DomainTooNarrow, msg.str());
  }
}

}  // namespace

SolitonFamily parse_soliton_family(const std::string& text) {
  if (text == "mkdv" || text == "whitham") return SolitonFamily::MKdV;
  if (text == "bbm") return SolitonFamily::BBM;
  throw Error(ErrorCode::InvalidConfig, "unknown soliton family '" + text + "'");
}

std::string_view to_string(SolitonFamily family) {
  return family == SolitonFamily::MKdV ? "mkdv" : "bbm";
}

SolitonParams soliton_params(SolitonFamily family, double c, double mu, double nu) {
  if (!(c > 1.0)) {
    throw Error(ErrorCode::SubcriticalSpeed, "solitary waves need c > 1, got c = " + std::to_string(c));
  }
  if (!(mu > 0.0) || !(nu > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "mu and nu must be positive");
  }
  SolitonParams p{family, c, mu, nu, 0.0, 0.0};
  p.alpha = std::sqrt(6.0 * (c - 1.0) / mu);
  p.kappa = family == SolitonFamily::MKdV ? std::sqrt((c - 1.0) / nu) : std::sqrt((c - 1.0) / (nu * c));
  return p;
}

double soliton_profile(const SolitonParams& params, double xi) {
  return params.alpha * sech(params.kappa * xi);
}

LineSoliton line_soliton_field(const SolitonParams& params, const Grid& grid,
                               const LineSolitonOptions& options) {
  check_tail(params, grid, options.tail_tolerance);
  const double x0 = options.x0.value_or(grid.lx() / 2.0);
  LineSoliton out{SpectralField::sample(grid, [&](double x, double) { return soliton_profile(params, x - x0); }),
                  x0, 0.0};
  if (options.zero_mass) {
    out.field.ensure_coeffs();
    out.removed_mean = out.field.coeffs()[0].real();
    out.field = zero_mass_project(std::move(out.field));
  }
  return out;
}

PerturbationProfile parse_profile(const std::string& text) {
  if (text == "z0") return PerturbationProfile::Z0;
  if (text == "z1") return PerturbationProfile::Z1;
  throw Error(ErrorCode::InvalidConfig, "unknown perturbation profile '" + text + "'");
}

double perturbation_shape(const SolitonParams& params, PerturbationProfile profile, double xi) {
  return raw_shape(params, profile, xi) / shape_max(params, profile);
}

int transverse_mode_index(const Grid& grid, double lambda) {
  const double n = lambda * grid.ly() / (2.0 * std::numbers::pi);
  const double rounded = std::round(n);
  if (grid.is_1d() || rounded < 1.0 || std::abs(n - rounded) > 1e-9 * std::max(1.0, n) ||
      rounded >= grid.ny() / 2) {
    std::ostringstream msg;
    msg << "lambda = " << lambda << " is not 2 pi n / Ly for a resolved n >= 1 (Ly = " << grid.ly() << ")";
    throw Error(ErrorCode::IncommensurateWavenumber, msg.str());
  }
  return static_cast<int>(rounded);
}

LineSoliton perturbed_soliton(const SolitonParams& params, const Grid& grid, double lambda,
                              double delta, PerturbationProfile profile,
                              const LineSolitonOptions& options) {
  const int n = transverse_mode_index(grid, lambda);
  const double exact_lambda = 2.0 * std::numbers::pi * n / grid.ly();
  LineSoliton base = line_soliton_field(params, grid, {options.x0, false, options.tail_tolerance});
  if (delta != 0.0) {
    const double scale = delta / shape_max(params, profile);
    auto& values = base.field.mutable_values();
    for (int j = 0; j < grid.ny(); ++j) {
      const double cy = std::cos(exact_lambda * grid.y(j));
      for (int i = 0; i < grid.nx(); ++i) {
        values[static_cast<std::size_t>(j) * grid.nx() + i] +=
            scale * raw_shape(params, profile, grid.x(i) - base.x0) * cy;
      }
    }
  }
  if (options.zero_mass) {
    base.field.ensure_coeffs();
    base.removed_mean = base.field.coeffs()[0].real();
    base.field = zero_mass_project(std::move(base.field));
  }
  return base;
}

}  // namespace fdkp
