#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "fdkp/error.hpp"
#include "fdkp/spectral.hpp"

using namespace fdkp;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double max_diff(const SpectralField& a, const SpectralField& b) {
  double m = 0.0;
  for (std::size_t n = 0; n < a.values().size(); ++n) m = std::max(m, std::abs(a.values()[n] - b.values()[n]));
  return m;
}

// Smooth random trigonometric polynomial using modes |p| <= pmax, |q| <= qmax.
SpectralField random_trig(const Grid& grid, int pmax, int qmax, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  struct Term {
    double k, l, a, b;
  };
  std::vector<Term> terms;
  for (int p = 0; p <= pmax; ++p) {
    for (int q = -qmax; q <= qmax; ++q) {
      terms.push_back({kTwoPi * p / grid.lx(), kTwoPi * q / grid.ly(), u(rng), u(rng)});
    }
  }
  SpectralField f = SpectralField::sample(grid, [&](double x, double y) {
    double s = 0.0;
    for (const auto& t : terms) s += t.a * std::cos(t.k * x + t.l * y) + t.b * std::sin(t.k * x + t.l * y);
    return s;
  });
  f.ensure_coeffs();
  return f;
}

}  // namespace

TEST_CASE("grid validation") {
  CHECK_NOTHROW(Grid(8, 1, 1.0, 1.0));
  CHECK_NOTHROW(Grid(16, 4, 1.0, 2.0));
  for (auto [nx, ny] : std::vector<std::pair<int, int>>{{6, 1}, {2, 1}, {16, 2}, {16, 12}, {0, 1}}) {
    CAPTURE(nx);
    CAPTURE(ny);
    CHECK_THROWS_AS(Grid(nx, ny, 1.0, 1.0), Error);
  }
  CHECK_THROWS_AS(Grid(8, 1, 0.0, 1.0), Error);
  CHECK_THROWS_AS(Grid(8, 8, 1.0, -1.0), Error);

  const Grid g(8, 4, kTwoPi, 2.0 * kTwoPi);
  CHECK(g.kx(1) == doctest::Approx(1.0));
  CHECK(g.kx(4) == doctest::Approx(4.0));  // Nyquist stored as +N/2
  CHECK(g.ky(1) == doctest::Approx(0.5));
  CHECK(g.ky(3) == doctest::Approx(-0.5));
  CHECK(g.spectral_index(2, 3) == 3u * 5u + 2u);
}

TEST_CASE("transform conventions") {
  const Grid g(16, 8, 3.0, 5.0);
  SpectralField c = SpectralField::sample(g, [](double, double) { return 2.5; });
  CHECK(c.ensure_coeffs().coeff(0, 0).real() == doctest::Approx(2.5).epsilon(1e-15));
  CHECK(integral(c) == doctest::Approx(2.5 * 15.0).epsilon(1e-14));

  // cos(k1 x + l1 y) -> coefficient 1/2 at (1, 1) only.
  const double k1 = kTwoPi / 3.0, l1 = kTwoPi / 5.0;
  SpectralField w = SpectralField::sample(g, [&](double x, double y) { return std::cos(k1 * x + l1 * y); });
  w.ensure_coeffs();
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nkx(); ++i) {
      const double expect = (i == 1 && j == 1) ? 0.5 : 0.0;
      CHECK(std::abs(w.coeff(i, j) - Complex(expect, 0.0)) <= 1e-15);
    }
  }
}

TEST_CASE("round trip is the identity") {
  const Grid g(32, 16, 7.0, 4.0);
  std::mt19937 rng(3);
  std::normal_distribution<double> n01;
  std::vector<double> v(g.size());
  for (double& x : v) x = n01(rng);
  SpectralField f = SpectralField::from_values(g, v);
  f.ensure_coeffs();
  f.mutable_coeffs();  // drop the sample representation
  f.ensure_values();
  double err = 0.0;
  for (std::size_t n = 0; n < v.size(); ++n) err = std::max(err, std::abs(f.values()[n] - v[n]));
  CHECK(err <= 1e-13);
}

TEST_CASE("representation access is checked") {
  const Grid g(8, 1, 1.0, 1.0);
  SpectralField f(g);
  f.mutable_values();
  CHECK_THROWS_AS((void)f.coeffs(), std::logic_error);
  f.ensure_coeffs();
  CHECK_NOTHROW((void)f.coeffs());
}

TEST_CASE("spectral derivative of a resolved mode is exact") {
  const Grid g(64, 1, 10.0, 1.0);
  const double k = kTwoPi * 3.0 / 10.0;
  SpectralField s = SpectralField::sample(g, [&](double x, double) { return std::sin(k * x); });
  SpectralField ds = apply_multiplier(s, [](double kk, double) { return Complex(0.0, kk); });
  SpectralField expect = SpectralField::sample(g, [&](double x, double) { return k * std::cos(k * x); });
  CHECK(max_diff(ds.ensure_values(), expect) <= 1e-13);
}

TEST_CASE("Nyquist averaging keeps odd symbols real") {
  const Grid g(8, 1, kTwoPi, 1.0);
  // Alternating sequence lives entirely on the Nyquist mode.
  SpectralField alt = SpectralField::sample(g, [](double x, double) { return std::cos(4.0 * x); });
  SpectralField d = apply_multiplier(alt, [](double k, double) { return Complex(0.0, k); });
  CHECK(max_abs(d.ensure_values()) <= 1e-14);
  // Even symbol k^2 keeps its value there.
  SpectralField d2 = apply_multiplier(alt, [](double k, double) { return Complex(k * k, 0.0); });
  CHECK(max_diff(d2.ensure_values(), SpectralField::sample(g, [](double x, double) { return 16.0 * std::cos(4.0 * x); })) <=
        1e-12);
}

TEST_CASE("non-finite symbols are rejected") {
  const Grid g(8, 1, 1.0, 1.0);
  try {
    Multiplier(g, [](double k, double) { return Complex(1.0 / k, 0.0); });
    FAIL("expected NonFiniteSymbol");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonFiniteSymbol);
  }
}

TEST_CASE("dealiased cube is exact for band-limited data") {
  // Modes up to a third of the grid: v^3 is fully resolved on the base
  // grid, so the padded product must equal the pointwise cube.
  const Grid g(32, 16, 6.0, 9.0);
  const SpectralField v = random_trig(g, 4, 2, 11);
  SpectralField cube = cubic_dealias(v);
  std::vector<double> direct(g.size());
  for (std::size_t n = 0; n < g.size(); ++n) direct[n] = std::pow(v.values()[n], 3);
  CHECK(max_diff(cube.ensure_values(), SpectralField::from_values(g, direct)) <= 1e-12);
}

TEST_CASE("dealiased cube removes aliasing of high modes") {
  // cos(k x) with k = 3/8 of the grid: cos^3 has a 3k component that would
  // alias onto a resolved mode; the padded product keeps only the cos(kx) part.
  const Grid g(16, 1, kTwoPi, 1.0);
  SpectralField v = SpectralField::sample(g, [](double x, double) { return std::cos(6.0 * x); });
  SpectralField cube = cubic_dealias(v);
  SpectralField expect = SpectralField::sample(g, [](double x, double) { return 0.75 * std::cos(6.0 * x); });
  CHECK(max_diff(cube.ensure_values(), expect) <= 1e-14);
}

TEST_CASE("quadrature identities") {
  const Grid g(32, 8, 5.0, 3.0);
  const SpectralField a = random_trig(g, 6, 3, 5);
  const SpectralField b = random_trig(g, 6, 3, 6);
  double direct = 0.0;
  for (std::size_t n = 0; n < g.size(); ++n) direct += a.values()[n] * b.values()[n];
  direct *= g.area() / g.size();
  CHECK(inner_product(a, b) == doctest::Approx(direct).epsilon(1e-13));

  std::vector<double> ones(g.spectral_size(), 1.0);
  CHECK(weighted_energy(a, ones) == doctest::Approx(inner_product(a, a)).epsilon(1e-14));
}

TEST_CASE("zero-mass projection") {
  const Grid g(16, 8, 4.0, 6.0);
  SpectralField v = random_trig(g, 3, 2, 9);
  CHECK(x_mean_norm(v) > 0.1);
  SpectralField p = zero_mass_project(v);
  CHECK(x_mean_norm(p) == 0.0);
  // Idempotent, and every x-average vanishes.
  CHECK(max_diff(zero_mass_project(p).ensure_values(), p.ensure_values()) == 0.0);
  for (int j = 0; j < g.ny(); ++j) {
    double s = 0.0;
    for (int i = 0; i < g.nx(); ++i) s += p.value(i, j);
    CHECK(std::abs(s) <= 1e-13);
  }
  // D_x^{-1} D_x is the identity on zero-mass data.
  SpectralField dx = apply_multiplier(p, [](double k, double) { return Complex(0.0, k); });
  SpectralField back = apply_multiplier(dx, inverse_dx_symbol);
  CHECK(max_diff(back.ensure_values(), p.ensure_values()) <= 1e-13);
}

TEST_CASE("spectral tail of a band-limited field") {
  const Grid g(64, 1, 10.0, 1.0);
  const SpectralField v = random_trig(g, 5, 0, 2);
  CHECK(spectral_tail(v, 0.5) <= 1e-15);
  CHECK(spectral_tail(v, 0.1) > 0.01);
}
