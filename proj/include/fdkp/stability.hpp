#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "fdkp/solver.hpp"
#include "fdkp/spectral.hpp"

namespace fdkp {

/// whitham: line solitons of the local Whitham-type KP model (kappa^2 =
/// (c-1)/nu). bbm: line solitons of the BBM-KP model (kappa^2 = (c-1)/(nu c)).
enum class StabilityFamily { Whitham, BBM };

StabilityFamily parse_stability_family(const std::string& text);
std::string_view to_string(StabilityFamily family);

double stability_kappa(StabilityFamily family, double c, double nu);

/// Closed-form first-order eigenvalue squared. Throws SubcriticalSpeed for c <= 1.
///   whitham: (2/3)(c-1)(c-4)
///   bbm:     -6c^2(c-1) / (4(2c+1)(c-1) + 3)
double omega1_squared(StabilityFamily family, double c);

struct InnerProductRow {
  std::string name;
  double computed = 0.0;
  double closed_form = 0.0;
};

/// The nine inner products <f, g> = int f g over |kappa xi| <= 40, with
/// R = sech(kappa xi) and r' = R. Rows 6-8 are per unit a0; row 9 uses the
/// explicit first-order correction z1 (whitham, a1 = 0) with the given
/// omega1 and nu, and a0 = 1.
std::vector<InnerProductRow> inner_product_table(double kappa, double omega1 = 1.0, double nu = 1.0);

/// Right side of the second-order solvability condition with a0 = 1,
/// as a function of Omega_1^2 (which is negative for the bbm family).
double solvability_residual(StabilityFamily family, double c, double nu, double omega1_sq);

/// Generalized problem A z = Omega B z from the linearized ODE about the
/// line soliton, collocated on N points of a periodic interval of length L
/// centered on the soliton and restricted to zero-mean functions.
struct EigenPencil {
  StabilityFamily family = StabilityFamily::Whitham;
  double c = 0.0;
  double nu = 1.0;
  double kappa = 0.0;
  double lambda = 0.0;
  int n = 0;
  double length = 0.0;
  Eigen::MatrixXd A;  // (N-1) x (N-1)
  Eigen::MatrixXd B;
  /// Columns: orthonormal real Fourier basis of zero-mean grid functions.
  Eigen::MatrixXd basis;
};

/// Collocation points x_j = -L/2 + j L / N.
std::vector<double> collocation_points(int n, double length);

/// Real circulant matrix of a Fourier multiplier with a real-valued even or
/// purely imaginary odd symbol; Nyquist entries follow the averaging rule.
Eigen::MatrixXd multiplier_matrix(int n, double length, int derivative_order);

/// d^2/dxi^2 + kappa^2 (6 sech^2(kappa xi) - 1) on the collocation grid.
Eigen::MatrixXd operator_L_matrix(double kappa, int n, double length);

/// Default domain length max(56 / kappa, 80).
double default_pencil_length(double kappa);

/// Throws DomainTooNarrow if length < 56 / kappa.
EigenPencil build_pencil(StabilityFamily family, double c, double nu, double lambda, int n,
                         double length);

struct GrowthSpectrum {
  /// Finite eigenvalues sorted by descending real part.
  std::vector<Complex> omega;
  /// Eigenvector of omega[0] on the collocation grid (length N).
  Eigen::VectorXcd leading_vector;
};

/// Dense QZ solve. Throws EigensolveFailure if the solver does not converge
/// or no finite eigenvalue remains.
GrowthSpectrum growth_rates(const EigenPencil& pencil);

struct Omega1Fit {
  double a = 0.0;  // Omega_1 estimate
  double b = 0.0;  // empirical lambda^2 coefficient
  std::vector<double> lambda;
  std::vector<double> leading_re;
};

/// Least-squares fit of the leading Re Omega to a lambda + b lambda^2.
/// Throws InvalidArgument unless there are >= 3 values, all in (0, 0.2].
Omega1Fit fit_omega1(StabilityFamily family, double c, double nu, const std::vector<double>& lambdas,
                     int n = 512, double length = 0.0);

struct GrowthWindow {
  double delta = 1e-4;          // seeded perturbation amplitude
  double alpha = 1.0;           // soliton amplitude
  double noise_factor = 10.0;   // window starts once A >= noise_factor A(0)
  double linear_fraction = 0.05;  // and ends once delta A / A(0) > linear_fraction alpha
  int min_intervals = 5;
};

struct GrowthFit {
  double rate = 0.0;
  double r_squared = 0.0;
  double window_start = 0.0;
  double window_end = 0.0;
  int samples = 0;
};

/// Fits log A(t) of the tracked band for `lambda` over the linear growth
/// window. Throws NoGrowthWindow if the window spans fewer than
/// `min_intervals` monitor intervals, InvalidArgument if lambda was not tracked.
GrowthFit measure_growth(const Trajectory& trajectory, double lambda, const GrowthWindow& window);

}  // namespace fdkp
