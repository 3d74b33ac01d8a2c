#pragma once

#include <optional>
#include <string>

#include "fdkp/spectral.hpp"

namespace fdkp {

enum class SolitonFamily { MKdV, BBM };

SolitonFamily parse_soliton_family(const std::string& text);
std::string_view to_string(SolitonFamily family);

/// v = alpha sech(kappa (x - c t)) with alpha^2 = 6(c-1)/mu and
/// kappa^2 = (c-1)/nu (mkdv) or (c-1)/(nu c) (bbm).
struct SolitonParams {
  SolitonFamily family = SolitonFamily::MKdV;
  double c = 2.0;
  double mu = 6.0;
  double nu = 1.0;
  double alpha = 0.0;
  double kappa = 0.0;
};

/// Throws SubcriticalSpeed if c <= 1, InvalidArgument unless mu, nu > 0.
SolitonParams soliton_params(SolitonFamily family, double c, double mu, double nu);

/// alpha sech(kappa xi).
double soliton_profile(const SolitonParams& params, double xi);

struct LineSolitonOptions {
  std::optional<double> x0;  // default: domain center
  bool zero_mass = false;
  double tail_tolerance = 1e-12;
};

struct LineSoliton {
  SpectralField field;
  double x0 = 0.0;
  /// Mean value subtracted by the zero-mass projection (0 if not applied).
  double removed_mean = 0.0;
};

/// y-uniform soliton on the grid. Throws DomainTooNarrow unless
/// alpha sech(kappa Lx / 2) < tail_tolerance.
LineSoliton line_soliton_field(const SolitonParams& params, const Grid& grid,
                               const LineSolitonOptions& options = {});

enum class PerturbationProfile { Z0, Z1 };

PerturbationProfile parse_profile(const std::string& text);

/// Shape of the perturbation, scaled to unit maximum. z0 is R'; z1 is the
/// first-order correction of the family with a1 = 0 and the prefactor
/// sign taken from Omega_1 = +|Omega_1|.
double perturbation_shape(const SolitonParams& params, PerturbationProfile profile, double xi);

/// Line soliton plus delta z(x - x0) cos(lambda y). lambda must equal
/// 2 pi n / Ly for an integer n >= 1, else IncommensurateWavenumber.
LineSoliton perturbed_soliton(const SolitonParams& params, const Grid& grid, double lambda,
                              double delta, PerturbationProfile profile,
                              const LineSolitonOptions& options = {});

/// Index n with lambda = 2 pi n / Ly, or IncommensurateWavenumber.
int transverse_mode_index(const Grid& grid, double lambda);

}  // namespace fdkp
