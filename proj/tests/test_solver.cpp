#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "fdkp/error.hpp"
#include "fdkp/kernels.hpp"
#include "fdkp/solver.hpp"
#include "fdkp/waves.hpp"

using namespace fdkp;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

ModelSpec spec(ModelTag tag, double nu = 1.0) {
  ModelSpec m;
  m.tag = tag;
  m.nu = nu;
  return m;
}

double max_diff(SpectralField a, SpectralField b) {
  a.ensure_values();
  b.ensure_values();
  double m = 0.0;
  for (std::size_t n = 0; n < a.values().size(); ++n) m = std::max(m, std::abs(a.values()[n] - b.values()[n]));
  return m;
}

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no fdkp::Error thrown");
  return ErrorCode::Io;
}

}  // namespace

TEST_CASE("phi functions are continuous across the series switch") {
  auto direct = [](Complex z) {
    const Complex e = std::exp(z);
    return PhiValues{(e - 1.0) / z, (e - 1.0 - z) / (z * z), (e - 1.0 - z - 0.5 * z * z) / (z * z * z)};
  };
  for (Complex z : {Complex(0.1001, 0.0), Complex(-0.0999, 0.0), Complex(0.0, 0.09999), Complex(0.07, -0.07)}) {
    const PhiValues a = phi_functions(z);
    const PhiValues b = direct(z);
    // The direct phi_3 loses about 1e-13 to cancellation at |z| = 0.1.
    CHECK(std::abs(a.phi1 - b.phi1) <= 1e-14);
    CHECK(std::abs(a.phi2 - b.phi2) <= 1e-13);
    CHECK(std::abs(a.phi3 - b.phi3) <= 1e-11);
  }
  const PhiValues zero = phi_functions(Complex(0.0, 0.0));
  CHECK(zero.phi1 == Complex(1.0, 0.0));
  CHECK(std::abs(zero.phi2 - 0.5) <= 1e-16);
  CHECK(std::abs(zero.phi3 - 1.0 / 6.0) <= 1e-16);
  // Far from the origin both branches are the direct formulas.
  const Complex z(0.0, -30.0);
  CHECK(std::abs(phi_functions(z).phi3 - direct(z).phi3) <= 1e-15);
}

TEST_CASE("ETDRK4 propagates an infinitesimal mode exactly") {
  const Grid g(64, 1, 20.0, 1.0);
  const ModelSpec m = spec(ModelTag::MKdV);
  const double eps = 1e-10;
  const int p = 5;
  const double k = kTwoPi * p / 20.0;
  const double lam = linear_phase_symbol(m, k, 0.0);
  const SpectralField v = SpectralField::sample(g, [&](double x, double) { return eps * std::cos(k * x); });
  const double dt = 0.05;
  const SpectralField out = step(m, v, dt, Scheme::Etdrk4);
  const SpectralField expect =
      SpectralField::sample(g, [&](double x, double) { return eps * std::cos(k * x - lam * dt); });
  CHECK(max_diff(out, expect) <= 1e-13 * eps);
}

TEST_CASE("RK4 is fourth order") {
  const Grid g(128, 1, 100.0, 1.0);
  const ModelSpec m = spec(ModelTag::CubicBBM);
  const auto p = soliton_params(SolitonFamily::BBM, 1.5, m.mu, m.nu);
  const SpectralField v0 = line_soliton_field(p, g).field;
  const double T = 1.0;
  auto integrate = [&](int steps) {
    StepperConfig cfg;
    cfg.scheme = Scheme::Rk4;
    cfg.t_final = T;
    cfg.dt = T / steps;
    cfg.monitor_every = steps;
    return *run(m, State{v0, std::nullopt, 0.0}, cfg).final_state;
  };
  const auto a = integrate(10), b = integrate(20), c = integrate(40);
  const double e1 = max_diff(a.u, b.u), e2 = max_diff(b.u, c.u);
  CHECK(e1 / e2 == doctest::Approx(16.0).epsilon(0.15));
}

TEST_CASE("one ETDRK4 step translates the soliton") {
  const Grid g(512, 1, 80.0, 1.0);
  const ModelSpec m = spec(ModelTag::MKdV);
  const auto p = soliton_params(SolitonFamily::MKdV, 2.0, m.mu, m.nu);
  LineSolitonOptions opts;
  const SpectralField v = line_soliton_field(p, g, opts).field;
  const double dt = 1e-3;
  const SpectralField out = step(m, v, dt, Scheme::Etdrk4);
  opts.x0 = 40.0 + p.c * dt;
  CHECK(max_diff(out, line_soliton_field(p, g, opts).field) <= 1e-9);
}

TEST_CASE("invariant values") {
  const Grid g(256, 8, 80.0, 10.0);
  const InvariantValues zero = invariants(spec(ModelTag::CubicKP), SpectralField(g));
  CHECK(zero.Q == 0.0);
  CHECK(zero.E == 0.0);
  CHECK(zero.P == 0.0);
  // alpha = kappa = 1: int sech^2 = 2 per unit of transverse length.
  const auto p = soliton_params(SolitonFamily::MKdV, 2.0, 6.0, 1.0);
  const SpectralField v = line_soliton_field(p, g).field;
  const InvariantValues inv = invariants(spec(ModelTag::CubicKP), v);
  CHECK(inv.Q == doctest::Approx(2.0 * 10.0).epsilon(1e-10));
  CHECK(inv.P == doctest::Approx(std::numbers::pi * 10.0).epsilon(1e-10));
  CHECK(relative_drift(1.5, 1.0) == doctest::Approx(0.5));
  CHECK(relative_drift(1e-31, 0.0) == doctest::Approx(0.1));
}

TEST_CASE("KP runs keep zero mass and conserve the invariants") {
  const double ly = kTwoPi / 0.2;
  const Grid g(128, 8, 80.0, ly);
  const ModelSpec m = spec(ModelTag::CubicKP);
  const auto p = soliton_params(SolitonFamily::MKdV, 1.5, m.mu, m.nu);
  LineSolitonOptions opts;
  opts.zero_mass = true;
  const LineSoliton s = perturbed_soliton(p, g, 0.2, 1e-2, PerturbationProfile::Z0, opts);
  StepperConfig cfg;
  cfg.dt = default_dt(m, g, Scheme::Etdrk4);
  cfg.t_final = 2.0;
  cfg.monitor_every = 20;
  const Trajectory tr = run(m, State{s.field, std::nullopt, 0.0}, cfg);
  double dq = 0.0, de = 0.0, pmax = 0.0;
  for (const auto& r : tr.records) {
    dq = std::max(dq, r.report.dQ_rel);
    de = std::max(de, r.report.dE_rel);
    pmax = std::max(pmax, std::abs(r.report.P));
  }
  CHECK(pmax <= 1e-10);
  CHECK(dq <= 1e-8);
  CHECK(de <= 1e-6);
  CHECK(x_mean_norm(tr.final_state->u) <= 1e-14);
}

TEST_CASE("parent model conserves momentum and energy") {
  const Grid g(32, 8, 20.0, 10.0);
  ModelSpec m = spec(ModelTag::ParentNonlocal);
  m.kernel = KernelSpec::green_exponential();
  const SpectralField w = SpectralField::sample(g, [](double x, double y) {
    return 0.2 * std::sin(kTwoPi * x / 20.0) + 0.05 * std::cos(kTwoPi * (2 * x / 20.0 + y / 10.0));
  });
  const SpectralField wt = apply_multiplier(w, [](double k, double) { return Complex(0.0, -k); });
  StepperConfig cfg;
  cfg.scheme = Scheme::Rk4;
  cfg.dt = 1e-2;
  cfg.t_final = 2.0;
  cfg.monitor_every = 50;
  const Trajectory tr = run(m, State{w, wt, 0.0}, cfg);
  const auto& last = tr.records.back().report;
  CHECK(last.dQ_rel <= 1e-6);
  CHECK(last.dE_rel <= 1e-6);
  CHECK(tr.final_state->ut.has_value());
}

TEST_CASE("stepper configuration") {
  StepperConfig cfg;
  cfg.dt = 0.0;
  CHECK(code_of([&] { cfg.validate(ModelTag::MKdV); }) == ErrorCode::InvalidArgument);
  cfg.dt = 1e-3;
  cfg.t_final = -1.0;
  CHECK(code_of([&] { cfg.validate(ModelTag::MKdV); }) == ErrorCode::InvalidArgument);
  cfg.t_final = 1.0;
  cfg.scheme = Scheme::Etdrk4;
  CHECK(code_of([&] { cfg.validate(ModelTag::ParentNonlocal); }) == ErrorCode::InvalidConfig);
  CHECK(parse_scheme("rk4") == Scheme::Rk4);
  CHECK_THROWS_AS(parse_scheme("euler"), Error);
  CHECK(default_scheme(ModelTag::MKdV) == Scheme::Etdrk4);
  CHECK(default_scheme(ModelTag::BBMKP) == Scheme::Rk4);
  CHECK(default_scheme(ModelTag::ParentNonlocal) == Scheme::Rk4);
  const Grid g(256, 1, 80.0, 1.0);
  CHECK(default_dt(spec(ModelTag::MKdV), g, Scheme::Etdrk4) == doctest::Approx(1e-2 * 80.0 / 256.0));
  CHECK(code_of([] { step(spec(ModelTag::ParentNonlocal), SpectralField(Grid(8, 1, 1.0, 1.0)), 0.1, Scheme::Rk4); }) ==
        ErrorCode::WrongModelOrder);
}

TEST_CASE("run bookkeeping") {
  const Grid g(256, 1, 60.0, 1.0);
  const ModelSpec m = spec(ModelTag::MKdV);
  const auto p = soliton_params(SolitonFamily::MKdV, 2.0, m.mu, m.nu);
  const SpectralField v = line_soliton_field(p, g).field;
  StepperConfig cfg;
  cfg.t_final = 0.0;
  const Trajectory still = run(m, State{v, std::nullopt, 0.0}, cfg);
  CHECK(still.steps == 0);
  CHECK(still.records.size() == 1);
  // Unchanged apart from the stripped Nyquist mode.
  CHECK(max_diff(still.final_state->u, v) <= 1e-8);

  // dt is shrunk so T is hit exactly.
  cfg.t_final = 1.0;
  cfg.dt = 0.3;
  cfg.monitor_every = 1;
  int snaps = 0;
  RunHooks hooks;
  hooks.on_snapshot = [&](const State&, int) { ++snaps; };
  cfg.snapshot_every = 2;
  const Trajectory tr = run(m, State{v, std::nullopt, 0.0}, cfg, hooks);
  CHECK(tr.steps == 4);
  CHECK(tr.dt == doctest::Approx(0.25));
  CHECK(tr.records.size() == 5);
  CHECK(tr.records.back().report.time == doctest::Approx(1.0));
  CHECK(snaps == 3);
}

TEST_CASE("unstable runs are reported") {
  // Explicit RK4 far beyond its stability limit on a stiff symbol.
  const Grid g(256, 1, 10.0, 1.0);
  const ModelSpec m = spec(ModelTag::MKdV);
  const SpectralField v = SpectralField::sample(g, [](double x, double) { return 0.1 * std::exp(-(x - 5) * (x - 5)); });
  StepperConfig cfg;
  cfg.scheme = Scheme::Rk4;
  cfg.dt = 0.05;
  cfg.t_final = 50.0;
  cfg.monitor_every = 1000;
  CHECK(code_of([&] { run(m, State{v, std::nullopt, 0.0}, cfg); }) == ErrorCode::UnstableRun);
}

TEST_CASE("band amplitude") {
  const double ly = kTwoPi / 0.5;
  const Grid g(32, 8, 10.0, ly);
  const double a = 0.3, k = kTwoPi / 10.0;
  SpectralField v = SpectralField::sample(g, [&](double x, double y) { return a * std::cos(k * x) * std::cos(0.5 * y); });
  v.ensure_coeffs();
  // L2 over x of a cos(kx) is a sqrt(Lx/2); the band carries half of it in each of +-l.
  CHECK(band_amplitude(v, 1) == doctest::Approx(0.5 * a * std::sqrt(5.0)).epsilon(1e-13));
  CHECK(band_amplitude(v, 2) <= 1e-15);
}
