#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "fdkp/error.hpp"
#include "fdkp/stability.hpp"

using namespace fdkp;

namespace {

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no fdkp::Error thrown");
  return ErrorCode::Io;
}

double sech(double x) { return 1.0 / std::cosh(x); }

}  // namespace

TEST_CASE("first-order eigenvalue closed forms") {
  CHECK(omega1_squared(StabilityFamily::Whitham, 4.0) == 0.0);
  CHECK(omega1_squared(StabilityFamily::Whitham, 7.0) == doctest::Approx(12.0).epsilon(1e-15));
  CHECK(omega1_squared(StabilityFamily::Whitham, 2.0) < 0.0);
  CHECK(omega1_squared(StabilityFamily::BBM, 2.0) == doctest::Approx(-24.0 / 23.0).epsilon(1e-15));
  for (double c : {1.1, 2.0, 10.0, 100.0}) CHECK(omega1_squared(StabilityFamily::BBM, c) < 0.0);
  CHECK(code_of([] { omega1_squared(StabilityFamily::BBM, 1.0); }) == ErrorCode::SubcriticalSpeed);
  CHECK(stability_kappa(StabilityFamily::Whitham, 7.0, 1.0) == doctest::Approx(std::sqrt(6.0)));
  CHECK(stability_kappa(StabilityFamily::BBM, 2.0, 1.0) == doctest::Approx(std::sqrt(0.5)));
  CHECK(parse_stability_family("bbm") == StabilityFamily::BBM);
  CHECK_THROWS_AS(parse_stability_family("kdv"), Error);
}

TEST_CASE("solvability condition") {
  // c = 7, Omega_1 = 0: kappa/3 - 1/kappa with kappa = sqrt 6.
  CHECK(solvability_residual(StabilityFamily::Whitham, 7.0, 1.0, 0.0) ==
        doctest::Approx(std::sqrt(6.0) / 3.0 - 1.0 / std::sqrt(6.0)).epsilon(1e-15));
  for (double c : {2.0, 4.0, 7.0, 10.0}) {
    CAPTURE(c);
    CHECK(std::abs(solvability_residual(StabilityFamily::Whitham, c, 1.0, omega1_squared(StabilityFamily::Whitham, c))) <=
          1e-14);
  }
  for (double c : {1.5, 2.0, 6.0}) {
    CAPTURE(c);
    CHECK(std::abs(solvability_residual(StabilityFamily::BBM, c, 1.0, omega1_squared(StabilityFamily::BBM, c))) <= 1e-14);
  }
  // The root does not depend on nu.
  CHECK(std::abs(solvability_residual(StabilityFamily::Whitham, 7.0, 0.3, 12.0)) <= 1e-13);
}

TEST_CASE("inner product table") {
  for (double kappa : {1.0, 2.0}) {
    CAPTURE(kappa);
    const auto rows = inner_product_table(kappa);
    REQUIRE(rows.size() == 9);
    CHECK(rows[0].closed_form == doctest::Approx(2.0 / kappa));
    CHECK(rows[2].closed_form == doctest::Approx(-2.0 * kappa / 3.0));
    for (const auto& r : rows) {
      CAPTURE(r.name);
      CHECK(std::abs(r.computed - r.closed_form) <= 1e-10);
    }
  }
  CHECK_THROWS_AS(inner_product_table(0.0), Error);
}

TEST_CASE("collocated operator") {
  const double kappa = 1.3, L = 60.0;
  const int n = 512;
  const Eigen::MatrixXd L2 = operator_L_matrix(kappa, n, L);
  CHECK((L2 - L2.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * L2.cwiseAbs().maxCoeff());
  // R' = -kappa sech tanh spans the kernel of the operator.
  const auto x = collocation_points(n, L);
  CHECK(x.front() == doctest::Approx(-30.0));
  Eigen::VectorXd r1(n);
  for (int j = 0; j < n; ++j) r1[j] = -kappa * sech(kappa * x[j]) * std::tanh(kappa * x[j]);
  CHECK((L2 * r1).norm() <= 1e-8 * r1.norm());
  // First derivative matrix is skew and exact on a resolved mode.
  const Eigen::MatrixXd D = multiplier_matrix(n, L, 1);
  CHECK((D + D.transpose()).cwiseAbs().maxCoeff() <= 1e-13 * D.cwiseAbs().maxCoeff());
  Eigen::VectorXd s(n), cs(n);
  const double k = 2.0 * 3.141592653589793 * 4.0 / L;
  for (int j = 0; j < n; ++j) {
    s[j] = std::sin(k * x[j]);
    cs[j] = k * std::cos(k * x[j]);
  }
  CHECK((D * s - cs).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(default_pencil_length(0.5) == doctest::Approx(112.0));
  CHECK(default_pencil_length(2.0) == doctest::Approx(80.0));
}

TEST_CASE("pencil structure") {
  const EigenPencil p = build_pencil(StabilityFamily::Whitham, 7.0, 1.0, 0.1, 64, 40.0);
  CHECK(p.A.rows() == 63);
  CHECK(p.A.cols() == 63);
  CHECK(p.B.rows() == 63);
  CHECK(p.basis.rows() == 64);
  CHECK(p.basis.cols() == 63);
  CHECK((p.basis.transpose() * p.basis - Eigen::MatrixXd::Identity(63, 63)).cwiseAbs().maxCoeff() <= 1e-13);
  CHECK(code_of([] { build_pencil(StabilityFamily::Whitham, 2.0, 1.0, 0.1, 64, 40.0); }) == ErrorCode::DomainTooNarrow);
}

TEST_CASE("spectrum is symmetric under conjugation") {
  const EigenPencil p = build_pencil(StabilityFamily::Whitham, 7.0, 1.0, 0.1, 256, 40.0);
  const GrowthSpectrum s = growth_rates(p);
  REQUIRE_FALSE(s.omega.empty());
  CHECK(s.leading_vector.size() == 256);
  for (std::size_t i = 0; i + 1 < s.omega.size(); ++i) CHECK(s.omega[i].real() >= s.omega[i + 1].real());
  // Real operator: each eigenvalue's conjugate is in the spectrum too.
  for (const Complex& w : s.omega) {
    if (std::abs(w) > 50.0) continue;
    double best = 1e300;
    for (const Complex& u : s.omega) best = std::min(best, std::abs(u - std::conj(w)));
    CHECK(best <= 1e-6 * std::max(1.0, std::abs(w)));
  }
  // Unstable at c = 7: a real positive leading rate near Omega_1 lambda.
  CHECK(s.omega[0].real() > 0.2);
  CHECK(s.omega[0].real() < 0.5);
}

TEST_CASE("zero transverse wavenumber has a zero eigenvalue" * doctest::may_fail()) {
  // The translation mode sits in a Jordan block at lambda = 0. Rounding
  // splits the double eigenvalue to about 1e-4 once the grid resolves the
  // soliton, so this bound is not reached in double precision.
  const EigenPencil p = build_pencil(StabilityFamily::Whitham, 7.0, 1.0, 0.0, 512, 40.0);
  const GrowthSpectrum s = growth_rates(p);
  double best = 1e300;
  for (const Complex& w : s.omega) best = std::min(best, std::abs(w));
  CHECK(best <= 1e-8);
}

TEST_CASE("zero transverse wavenumber eigenvalue at Jordan-block accuracy") {
  // Splitting of a 2x2 block scales as the square root of the backward
  // error; 7e-5 is observed at N = 512 and N = 1024.
  const EigenPencil p = build_pencil(StabilityFamily::Whitham, 7.0, 1.0, 0.0, 512, 40.0);
  const GrowthSpectrum s = growth_rates(p);
  double best = 1e300;
  for (const Complex& w : s.omega) best = std::min(best, std::abs(w));
  CHECK(best <= 5e-4);
}

TEST_CASE("fit argument checks") {
  CHECK(code_of([] { fit_omega1(StabilityFamily::Whitham, 7.0, 1.0, {0.05, 0.1}); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { fit_omega1(StabilityFamily::Whitham, 7.0, 1.0, {0.05, 0.1, 0.3}); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { fit_omega1(StabilityFamily::Whitham, 7.0, 1.0, {0.0, 0.1, 0.2}); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("bbm solitons are transversally stable on a short grid") {
  const Omega1Fit fit = fit_omega1(StabilityFamily::BBM, 6.0, 1.0, {0.05, 0.1, 0.15}, 256, 0.0);
  CHECK(std::abs(fit.a) <= 0.05);
  CHECK(fit.leading_re.size() == 3);
}

namespace {

Trajectory synthetic(double rate, double a0, double dt, int count, double saturation) {
  Trajectory tr;
  tr.tracked_lambda = {0.1, 0.2};
  for (int n = 0; n < count; ++n) {
    MonitorRecord r;
    r.report.time = n * dt;
    const double a = std::min(a0 * std::exp(rate * n * dt), saturation);
    r.band_amplitude = {a, a0};
    tr.records.push_back(r);
  }
  return tr;
}

}  // namespace

TEST_CASE("growth measurement on a synthetic trajectory") {
  GrowthWindow win;
  win.delta = 1e-4;
  win.alpha = 1.0;
  const Trajectory tr = synthetic(0.5, 1e-4, 0.5, 80, 1.0);
  const GrowthFit fit = measure_growth(tr, 0.1, win);
  CHECK(fit.rate == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-12));
  // Window: from 10 A(0) to 0.05 A(0) / delta.
  CHECK(fit.window_start >= std::log(10.0) / 0.5);
  CHECK(fit.window_end <= std::log(500.0) / 0.5 + 1e-12);
  CHECK(fit.samples >= 6);

  CHECK(code_of([&] { measure_growth(tr, 0.2, win); }) == ErrorCode::NoGrowthWindow);
  CHECK(code_of([&] { measure_growth(tr, 0.3, win); }) == ErrorCode::InvalidArgument);
  // Too coarse sampling leaves fewer than five intervals in the window.
  const Trajectory coarse = synthetic(0.5, 1e-4, 2.0, 20, 1.0);
  CHECK(code_of([&] { measure_growth(coarse, 0.1, win); }) == ErrorCode::NoGrowthWindow);
}
