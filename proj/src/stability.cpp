#include "fdkp/stability.hpp"

#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "fdkp/error.hpp"
#include "fdkp/log.hpp"

namespace fdkp {

namespace {

constexpr double kSeriesSwitch = 1e-3;
constexpr double kQuadratureHalfWidth = 40.0;  // in units of 1 / kappa

double sech(double t) { return 1.0 / std::cosh(t); }

// Profile R = sech(kappa xi) and its derivatives with respect to xi.
struct Profile {
  double kappa;

  double R(double xi) const { return sech(kappa * xi); }
  double R1(double xi) const {
    const double t = kappa * xi;
    return -kappa * sech(t) * std::tanh(t);
  }
  double R2(double xi) const {
    const double s = sech(kappa * xi);
    return kappa * kappa * (s - 2.0 * s * s * s);
  }
  double R3(double xi) const {
    const double t = kappa * xi;
    const double s = sech(t);
    return kappa * kappa * kappa * s * std::tanh(t) * (6.0 * s * s - 1.0);
  }
  // r' = R, r odd.
  double r(double xi) const { return 2.0 / kappa * std::atan(std::tanh(0.5 * kappa * xi)); }

  // coth(kappa xi) R'(xi); the 1/xi pole of coth is cancelled by R'(0) = 0.
  // Near 0 the product is replaced by its Taylor series in t = kappa xi.
  double coth_R1(double xi) const {
    const double t = kappa * xi;
    if (std::abs(t) < kSeriesSwitch) {
      const double t2 = t * t;
      return -kappa * (1.0 + t2 * (-1.0 / 2.0 + t2 * (5.0 / 24.0 + t2 * (-61.0 / 720.0 + t2 * 1385.0 / 40320.0))));
    }
    return R1(xi) * std::cosh(t) / std::sinh(t);
  }

  // d/dxi [coth(kappa xi) R'(xi)], series near 0.
  double d_coth_R1(double xi) const {
    const double t = kappa * xi;
    if (std::abs(t) < kSeriesSwitch) {
      const double t2 = t * t;
      return -kappa * kappa * t * (-1.0 + t2 * (5.0 / 6.0 + t2 * (-61.0 / 120.0 + t2 * 1385.0 / 5040.0)));
    }
    const double sh = std::sinh(t);
    const double csch2 = 1.0 / (sh * sh);
    return -kappa * csch2 * R1(xi) + std::cosh(t) / sh * R2(xi);
  }

  // z1 / F and z1' / F for z1 = -F (kappa xi - coth(kappa xi)) R'.
  double z1_unit(double xi) const { return -(kappa * xi * R1(xi) - coth_R1(xi)); }
  double z1_unit_prime(double xi) const {
    return -(kappa * R1(xi) + kappa * xi * R2(xi) - d_coth_R1(xi));
  }
};

template <class F>
double integrate_line(F f, double kappa) {
  using boost::math::quadrature::gauss_kronrod;
  // Breakpoints in t = kappa xi; the integrands live on |t| <~ 20.
  static constexpr std::array<double, 9> cuts{-40.0, -12.0, -4.0, -1.0, 0.0, 1.0, 4.0, 12.0, 40.0};
  double total = 0.0;
  for (std::size_t n = 0; n + 1 < cuts.size(); ++n) {
    const double a = cuts[n] / kappa;
    const double b = cuts[n + 1] / kappa;
    total += gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-15);
  }
  static_assert(kQuadratureHalfWidth == 40.0);
  return total;
}

void check_positive_kappa(double kappa) {
  if (!(kappa > 0.0)) throw Error(ErrorCode::InvalidArgument, "kappa must be positive");
}

}  // namespace

StabilityFamily parse_stability_family(const std::string& text) {
  if (text == "whitham") return StabilityFamily::Whitham;
  if (text == "bbm") return StabilityFamily::BBM;
  throw Error(ErrorCode::InvalidConfig, "unknown stability family '" + text + "'");
}

std::string_view to_string(StabilityFamily family) {
  return family == StabilityFamily::Whitham ? "whitham" : "bbm";
}

double stability_kappa(StabilityFamily family, double c, double nu) {
  if (!(c > 1.0)) throw Error(ErrorCode::SubcriticalSpeed, "c must exceed 1");
  if (!(nu > 0.0)) throw Error(ErrorCode::InvalidArgument, "nu must be positive");
  return family == StabilityFamily::Whitham ? std::sqrt((c - 1.0) / nu) : std::sqrt((c - 1.0) / (nu * c));
}

double omega1_squared(StabilityFamily family, double c) {
  if (!(c > 1.0)) throw Error(ErrorCode::SubcriticalSpeed, "c must exceed 1");
  if (family == StabilityFamily::Whitham) return 2.0 / 3.0 * (c - 1.0) * (c - 4.0);
  return -6.0 * c * c * (c - 1.0) / (4.0 * (2.0 * c + 1.0) * (c - 1.0) + 3.0);
}

std::vector<InnerProductRow> inner_product_table(double kappa, double omega1, double nu) {
  check_positive_kappa(kappa);
  const Profile p{kappa};
  const double f = omega1 / (2.0 * kappa * kappa * kappa * nu);
  std::vector<InnerProductRow> rows;
  auto add = [&](std::string name, auto integrand, double exact) {
    rows.push_back({std::move(name), integrate_line(integrand, kappa), exact});
  };
  add("<R,R>", [&](double x) { return p.R(x) * p.R(x); }, 2.0 / kappa);
  add("<R',R>", [&](double x) { return p.R1(x) * p.R(x); }, 0.0);
  add("<R'',R>", [&](double x) { return p.R2(x) * p.R(x); }, -2.0 * kappa / 3.0);
  add("<kappa xi R',R>", [&](double x) { return kappa * x * p.R1(x) * p.R(x); }, -1.0);
  add("<R' coth(kappa xi),R>", [&](double x) { return p.coth_R1(x) * p.R(x); }, -2.0);
  add("<z0,r>/a0", [&](double x) { return p.R1(x) * p.r(x); }, -2.0 / kappa);
  add("<z0',r>/a0", [&](double x) { return p.R2(x) * p.r(x); }, 0.0);
  add("<z0'',r>/a0", [&](double x) { return p.R3(x) * p.r(x); }, 2.0 * kappa / 3.0);
  add("<z1',r>", [&](double x) { return f * p.z1_unit_prime(x) * p.r(x); }, f);
  return rows;
}

double solvability_residual(StabilityFamily family, double c, double nu, double omega1_sq) {
  const double kappa = stability_kappa(family, c, nu);
  const double k2nu = kappa * kappa * nu;
  const double k3 = kappa * kappa * kappa;
  if (family == StabilityFamily::Whitham) {
    return kappa / 3.0 - omega1_sq / (2.0 * k3 * nu * nu) - 1.0 / (kappa * nu);
  }
  const double c2 = c * c;
  return omega1_sq * (k2nu - 3.0) / (6.0 * kappa * nu * c2) -
         omega1_sq * (k2nu + 1.0) / (2.0 * k3 * nu * nu * c2) - 1.0 / (kappa * nu * c);
}

std::vector<double> collocation_points(int n, double length) {
  std::vector<double> x(n);
  for (int j = 0; j < n; ++j) x[j] = -0.5 * length + length * j / n;
  return x;
}

Eigen::MatrixXd multiplier_matrix(int n, double length, int derivative_order) {
  // Circulant first column d[s] = (1/N) sum_k (ik)^p e^{i k s dx}; the
  // Nyquist term keeps only its even part (zero for odd p).
  const double dk = 2.0 * std::numbers::pi / length;
  const double dx = length / n;
  std::vector<double> d(n, 0.0);
  const int p = derivative_order;
  for (int s = 0; s < n; ++s) {
    double sum = 0.0;
    for (int m = 1; m < n / 2; ++m) {
      const double k = dk * m;
      const double phase = k * s * dx;
      const double kp = std::pow(k, p);
      // (ik)^p e^{i k x} + (-ik)^p e^{-i k x} = 2 k^p Re(i^p e^{i k x})
      switch (p % 4) {
        case 0: sum += 2.0 * kp * std::cos(phase); break;
        case 1: sum -= 2.0 * kp * std::sin(phase); break;
        case 2: sum -= 2.0 * kp * std::cos(phase); break;
        case 3: sum += 2.0 * kp * std::sin(phase); break;
      }
    }
    if (p % 2 == 0) {
      const double kn = dk * (n / 2);
      const double sign = (p % 4 == 0) ? 1.0 : -1.0;
      sum += sign * std::pow(kn, p) * ((s % 2 == 0) ? 1.0 : -1.0);
    }
    if (p == 0) sum += 1.0;
    d[s] = sum / n;
  }
  Eigen::MatrixXd M(n, n);
  for (int j = 0; j < n; ++j) {
    for (int m = 0; m < n; ++m) M(j, m) = d[((j - m) % n + n) % n];
  }
  return M;
}

Eigen::MatrixXd operator_L_matrix(double kappa, int n, double length) {
  Eigen::MatrixXd L = multiplier_matrix(n, length, 2);
  const auto x = collocation_points(n, length);
  for (int j = 0; j < n; ++j) {
    const double s = sech(kappa * x[j]);
    L(j, j) += kappa * kappa * (6.0 * s * s - 1.0);
  }
  return L;
}

double default_pencil_length(double kappa) { return std::max(56.0 / kappa, 80.0); }

namespace {

// Orthonormal real Fourier basis of the zero-mean grid functions: for
// m = 1..N/2-1 the pair sqrt(2/N) cos, sqrt(2/N) sin, then the Nyquist
// alternating vector / sqrt(N).
Eigen::MatrixXd zero_mean_basis(int n, double length) {
  const auto x = collocation_points(n, length);
  const double dk = 2.0 * std::numbers::pi / length;
  Eigen::MatrixXd Q(n, n - 1);
  const double norm = std::sqrt(2.0 / n);
  int col = 0;
  for (int m = 1; m < n / 2; ++m) {
    for (int j = 0; j < n; ++j) {
      Q(j, col) = norm * std::cos(dk * m * x[j]);
      Q(j, col + 1) = norm * std::sin(dk * m * x[j]);
    }
    col += 2;
  }
  for (int j = 0; j < n; ++j) Q(j, col) = std::cos(dk * (n / 2) * x[j]) / std::sqrt(static_cast<double>(n));
  return Q;
}

}  // namespace

EigenPencil build_pencil(StabilityFamily family, double c, double nu, double lambda, int n,
                         double length) {
  if (n < 8 || (n & (n - 1)) != 0) {
    throw Error(ErrorCode::InvalidArgument, "pencil size must be a power of two >= 8");
  }
  if (!(lambda >= 0.0)) throw Error(ErrorCode::InvalidArgument, "lambda must be non-negative");
  const double kappa = stability_kappa(family, c, nu);
  if (length < 56.0 / kappa) {
    std::ostringstream msg;
    msg << "pencil domain L = " << length << " is below 56 / kappa = " << 56.0 / kappa;
    throw Error(ErrorCode::DomainTooNarrow, msg.str());
  }
  const Eigen::MatrixXd D1 = multiplier_matrix(n, length, 1);
  const Eigen::MatrixXd D2 = multiplier_matrix(n, length, 2);
  const Eigen::MatrixXd L = operator_L_matrix(kappa, n, length);
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
  const double l2 = lambda * lambda;
  Eigen::MatrixXd A, B;
  if (family == StabilityFamily::Whitham) {
    A = nu * D2 * L - 0.5 * nu * l2 * D2 - 0.5 * l2 * I;
    B = -D1;
  } else {
    const Eigen::MatrixXd D3 = multiplier_matrix(n, length, 3);
    A = D2 * L - l2 / (2.0 * nu * c) * I;
    B = D3 / c - D1 / (nu * c);
  }
  EigenPencil pencil;
  pencil.family = family;
  pencil.c = c;
  pencil.nu = nu;
  pencil.kappa = kappa;
  pencil.lambda = lambda;
  pencil.n = n;
  pencil.length = length;
  pencil.basis = zero_mean_basis(n, length);
  pencil.A = pencil.basis.transpose() * A * pencil.basis;
  pencil.B = pencil.basis.transpose() * B * pencil.basis;
  return pencil;
}

GrowthSpectrum growth_rates(const EigenPencil& pencil) {
  Eigen::GeneralizedEigenSolver<Eigen::MatrixXd> solver;
  solver.compute(pencil.A, pencil.B, true);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::EigensolveFailure, "QZ iteration did not converge");
  }
  const Eigen::VectorXcd alphas = solver.alphas();
  const Eigen::VectorXd betas = solver.betas();
  const double beta_scale = betas.cwiseAbs().maxCoeff();
  std::vector<std::pair<Complex, int>> finite;
  for (int j = 0; j < alphas.size(); ++j) {
    // Zero beta: the B-null Nyquist direction, an infinite eigenvalue.
    if (std::abs(betas[j]) <= 1e-12 * beta_scale) continue;
    const Complex omega = alphas[j] / betas[j];
    if (std::isfinite(omega.real()) && std::isfinite(omega.imag())) finite.emplace_back(omega, j);
  }
  if (finite.empty()) throw Error(ErrorCode::EigensolveFailure, "no finite eigenvalues");
  std::stable_sort(finite.begin(), finite.end(),
                   [](const auto& a, const auto& b) { return a.first.real() > b.first.real(); });
  GrowthSpectrum out;
  out.omega.reserve(finite.size());
  for (const auto& f : finite) out.omega.push_back(f.first);
  const Eigen::MatrixXcd vectors = solver.eigenvectors();
  out.leading_vector = pencil.basis.cast<Complex>() * vectors.col(finite.front().second);
  return out;
}

Omega1Fit fit_omega1(StabilityFamily family, double c, double nu, const std::vector<double>& lambdas,
                     int n, double length) {
  if (lambdas.size() < 3) throw Error(ErrorCode::InvalidArgument, "fit needs at least 3 lambda values");
  for (double l : lambdas) {
    if (!(l > 0.0) || l > 0.2) throw Error(ErrorCode::InvalidArgument, "fit lambdas must lie in (0, 0.2]");
  }
  const double kappa = stability_kappa(family, c, nu);
  if (length <= 0.0) length = default_pencil_length(kappa);
  Omega1Fit fit;
  fit.lambda = lambdas;
  Eigen::MatrixXd X(lambdas.size(), 2);
  Eigen::VectorXd y(lambdas.size());
  for (std::size_t j = 0; j < lambdas.size(); ++j) {
    const double l = lambdas[j];
    const GrowthSpectrum spec = growth_rates(build_pencil(family, c, nu, l, n, length));
    const double re = spec.omega.front().real();
    fit.leading_re.push_back(re);
    X(j, 0) = l;
    X(j, 1) = l * l;
    y(j) = re;
    log::debug("fit_omega1 c=" + std::to_string(c) + " lambda=" + std::to_string(l) +
               " re=" + std::to_string(re));
  }
  const Eigen::Vector2d coef = X.colPivHouseholderQr().solve(y);
  fit.a = coef(0);
  fit.b = coef(1);
  return fit;
}

GrowthFit measure_growth(const Trajectory& trajectory, double lambda, const GrowthWindow& window) {
  std::size_t band = trajectory.tracked_lambda.size();
  for (std::size_t j = 0; j < trajectory.tracked_lambda.size(); ++j) {
    if (std::abs(trajectory.tracked_lambda[j] - lambda) <= 1e-12 * std::max(1.0, lambda)) band = j;
  }
  if (band == trajectory.tracked_lambda.size()) {
    throw Error(ErrorCode::InvalidArgument, "lambda was not tracked during the run");
  }
  const auto& rec = trajectory.records;
  if (rec.empty()) throw Error(ErrorCode::NoGrowthWindow, "empty trajectory");
  const double a0 = rec.front().band_amplitude[band];
  if (!(a0 > 0.0)) throw Error(ErrorCode::NoGrowthWindow, "tracked band is initially empty");

  const double floor = window.noise_factor * a0;
  const double ceiling = window.linear_fraction * window.alpha * a0 / window.delta;
  std::size_t start = rec.size();
  for (std::size_t n = 0; n < rec.size(); ++n) {
    if (rec[n].band_amplitude[band] >= floor) {
      start = n;
      break;
    }
  }
  std::size_t end = start;
  while (end + 1 < rec.size() && rec[end + 1].band_amplitude[band] <= ceiling &&
         rec[end + 1].band_amplitude[band] >= floor) {
    ++end;
  }
  if (start == rec.size() || rec[start].band_amplitude[band] > ceiling ||
      static_cast<int>(end - start) < window.min_intervals) {
    std::ostringstream msg;
    msg << "no linear growth window of " << window.min_intervals << " monitor intervals for lambda = " << lambda;
    throw Error(ErrorCode::NoGrowthWindow, msg.str());
  }

  // Ordinary least squares of log A against t.
  const std::size_t m = end - start + 1;
  double st = 0.0, sy = 0.0;
  for (std::size_t n = start; n <= end; ++n) {
    st += rec[n].report.time;
    sy += std::log(rec[n].band_amplitude[band]);
  }
  const double tm = st / m;
  const double ym = sy / m;
  double stt = 0.0, sty = 0.0, syy = 0.0;
  for (std::size_t n = start; n <= end; ++n) {
    const double dt = rec[n].report.time - tm;
    const double dy = std::log(rec[n].band_amplitude[band]) - ym;
    stt += dt * dt;
    sty += dt * dy;
    syy += dy * dy;
  }
  GrowthFit fit;
  fit.rate = sty / stt;
  fit.r_squared = syy > 0.0 ? (sty * sty) / (stt * syy) : 1.0;
  fit.window_start = rec[start].report.time;
  fit.window_end = rec[end].report.time;
  fit.samples = static_cast<int>(m);
  return fit;
}

}  // namespace fdkp
