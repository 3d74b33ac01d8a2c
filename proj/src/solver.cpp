#include "fdkp/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fdkp/error.hpp"
#include "fdkp/log.hpp"
#include "fdkp/waves.hpp"

namespace fdkp {

namespace {

constexpr double kPhiSwitch = 0.1;
constexpr int kPhiTerms = 12;

bool all_finite(const std::vector<Complex>& c) {
  for (const Complex& z : c) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

// e^z - 1 without cancellation for small |z|.
Complex expm1c(Complex z) {
  const double a = std::expm1(z.real());
  const double s = std::sin(0.5 * z.imag());
  const double cos_m1 = -2.0 * s * s;
  // e^x (cos y + i sin y) - 1 = (e^x - 1) cos y + (cos y - 1) + i e^x sin y
  return {a * std::cos(z.imag()) + cos_m1, std::exp(z.real()) * std::sin(z.imag())};
}

void zero_kx0(const Grid& grid, std::vector<Complex>& c) {
  for (int j = 0; j < grid.ny(); ++j) c[grid.spectral_index(0, j)] = Complex{};
}

// Parseval weight of half-complex column i.
double column_weight(const Grid& grid, int i) {
  return (i == 0 || grid.is_nyquist_x(i)) ? 1.0 : 2.0;
}

// Sum over all modes of w |c|^2 times area.
double quadratic(const Grid& grid, const std::vector<Complex>& c, const std::vector<double>& w) {
  double sum = 0.0;
  for (int j = 0; j < grid.ny(); ++j) {
    for (int i = 0; i < grid.nkx(); ++i) {
      const std::size_t n = grid.spectral_index(i, j);
      sum += column_weight(grid, i) * w[n] * std::norm(c[n]);
    }
  }
  return grid.area() * sum;
}

// Exact integral of f^4 for a band-limited f given by its coefficients.
double quartic_integral(Dealiaser& dealiaser, const std::vector<Complex>& c) {
  std::vector<double> samples(dealiaser.padded_size());
  dealiaser.to_padded(c, samples);
  double sum = 0.0;
  for (double v : samples) sum += v * v * v * v;
  return dealiaser.grid().area() * sum / static_cast<double>(samples.size());
}

}  // namespace

Scheme parse_scheme(const std::string& text) {
  if (text == "etdrk4") return Scheme::Etdrk4;
  if (text == "rk4") return Scheme::Rk4;
  throw Error(ErrorCode::InvalidConfig, "unknown scheme '" + text + "'");
}

std::string_view to_string(Scheme scheme) { return scheme == Scheme::Etdrk4 ? "etdrk4" : "rk4"; }

Scheme default_scheme(ModelTag tag) {
  if (tag == ModelTag::ParentNonlocal || is_bbm_family(tag)) return Scheme::Rk4;
  return Scheme::Etdrk4;
}

void StepperConfig::validate(ModelTag tag) const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw Error(ErrorCode::InvalidArgument, "dt must be positive");
  if (!(t_final >= 0.0) || !std::isfinite(t_final)) {
    throw Error(ErrorCode::InvalidArgument, "t_final must be non-negative");
  }
  if (scheme == Scheme::Etdrk4 && !is_first_order(tag)) {
    throw Error(ErrorCode::InvalidConfig, "etdrk4 requires a first-order model");
  }
  if (snapshot_every < 0 || monitor_every < 1) {
    throw Error(ErrorCode::InvalidArgument, "monitor_every must be >= 1 and snapshot_every >= 0");
  }
}

double default_dt(const ModelSpec& model, const Grid& grid, Scheme scheme) {
  if (scheme == Scheme::Etdrk4) return 1e-2 * grid.lx() / grid.nx();
  double max_freq = 0.0;
  for (int j = 0; j < grid.ny(); ++j) {
    for (int i = 0; i < grid.nkx(); ++i) {
      const double k = grid.kx(i);
      const double l = grid.ky(j);
      double f;
      if (model.tag == ModelTag::ParentNonlocal) {
        f = std::sqrt((k * k + l * l) * beta_hat(model.kernel, k, l));
      } else {
        f = std::abs(linear_phase_symbol(model, k, l));
      }
      max_freq = std::max(max_freq, f);
    }
  }
  return max_freq > 0.0 ? 2.8 / max_freq : 1e-2 * grid.lx() / grid.nx();
}

PhiValues phi_functions(Complex z) {
  if (std::abs(z) < kPhiSwitch) {
    // phi_j(z) = sum_n z^n / (n + j)!
    PhiValues out{};
    Complex power(1.0, 0.0);
    double f1 = 1.0, f2 = 2.0, f3 = 6.0;  // (n+1)!, (n+2)!, (n+3)! at n = 0
    for (int n = 0; n < kPhiTerms; ++n) {
      out.phi1 += power / f1;
      out.phi2 += power / f2;
      out.phi3 += power / f3;
      power *= z;
      f1 *= n + 2;
      f2 *= n + 3;
      f3 *= n + 4;
    }
    return out;
  }
  const Complex em1 = expm1c(z);
  const Complex phi1 = em1 / z;
  const Complex phi2 = (em1 - z) / (z * z);
  const Complex phi3 = (em1 - z - 0.5 * z * z) / (z * z * z);
  return {phi1, phi2, phi3};
}

Stepper::Stepper(const ModelSpec& model, const Grid& grid, Scheme scheme, double dt)
    : op_(model, grid), scheme_(scheme), dt_(dt), project_(is_kp_family(model.tag)) {
  if (!(dt > 0.0)) throw Error(ErrorCode::InvalidArgument, "dt must be positive");
  if (scheme == Scheme::Etdrk4 && !is_first_order(model.tag)) {
    throw Error(ErrorCode::InvalidConfig, "etdrk4 requires a first-order model");
  }
  const std::size_t n = grid.spectral_size();
  buf_.assign(model.tag == ModelTag::ParentNonlocal ? 10 : 6, std::vector<Complex>(n));
  if (scheme == Scheme::Etdrk4) {
    e_.resize(n);
    e2_.resize(n);
    q_.resize(n);
    f1_.resize(n);
    f2_.resize(n);
    f3_.resize(n);
    const auto lambda = op_.lambda();
    for (std::size_t m = 0; m < n; ++m) {
      const Complex c(0.0, -lambda[m] * dt);
      const PhiValues full = phi_functions(c);
      const PhiValues half = phi_functions(0.5 * c);
      e_[m] = std::exp(c);
      e2_[m] = std::exp(0.5 * c);
      q_[m] = 0.5 * dt * half.phi1;
      f1_[m] = dt * (full.phi1 - 3.0 * full.phi2 + 4.0 * full.phi3);
      f2_[m] = dt * (full.phi2 - 2.0 * full.phi3);
      f3_[m] = dt * (-full.phi2 + 4.0 * full.phi3);
    }
  }
}

void Stepper::advance(std::vector<Complex>& u, std::vector<Complex>* ut) {
  if (op_.model().tag == ModelTag::ParentNonlocal) {
    if (ut == nullptr) throw Error(ErrorCode::InvalidArgument, "ParentNonlocal needs w_t");
    rk4_parent(u, *ut);
    return;
  }
  if (scheme_ == Scheme::Etdrk4) {
    etdrk4(u);
  } else {
    rk4_first_order(u);
  }
  if (project_) zero_kx0(op_.grid(), u);
}

void Stepper::advance(State& state) {
  std::vector<Complex> u = state.u.ensure_coeffs().coeffs();
  std::vector<Complex> ut;
  if (state.ut) ut = state.ut->ensure_coeffs().coeffs();
  advance(u, state.ut ? &ut : nullptr);
  state.u = SpectralField::from_coeffs(state.u.grid(), std::move(u));
  if (state.ut) state.ut = SpectralField::from_coeffs(state.u.grid(), std::move(ut));
  state.time += dt_;
}

void Stepper::etdrk4(std::vector<Complex>& v) {
  auto& nv = buf_[0];
  auto& a = buf_[1];
  auto& na = buf_[2];
  auto& b = buf_[3];
  auto& nb = buf_[4];
  auto& nc = buf_[5];
  const std::size_t n = v.size();
  op_.nonlinear(v, nv);
  for (std::size_t m = 0; m < n; ++m) a[m] = e2_[m] * v[m] + q_[m] * nv[m];
  op_.nonlinear(a, na);
  for (std::size_t m = 0; m < n; ++m) b[m] = e2_[m] * v[m] + q_[m] * na[m];
  op_.nonlinear(b, nb);
  // c reuses `a` once Na is known.
  for (std::size_t m = 0; m < n; ++m) a[m] = e2_[m] * a[m] + q_[m] * (2.0 * nb[m] - nv[m]);
  op_.nonlinear(a, nc);
  for (std::size_t m = 0; m < n; ++m) {
    v[m] = e_[m] * v[m] + f1_[m] * nv[m] + 2.0 * f2_[m] * (na[m] + nb[m]) + f3_[m] * nc[m];
  }
}

void Stepper::rk4_first_order(std::vector<Complex>& v) {
  auto& k1 = buf_[0];
  auto& k2 = buf_[1];
  auto& k3 = buf_[2];
  auto& k4 = buf_[3];
  auto& tmp = buf_[4];
  const std::size_t n = v.size();
  const double h = dt_;
  op_.rhs(v, k1);
  for (std::size_t m = 0; m < n; ++m) tmp[m] = v[m] + 0.5 * h * k1[m];
  op_.rhs(tmp, k2);
  for (std::size_t m = 0; m < n; ++m) tmp[m] = v[m] + 0.5 * h * k2[m];
  op_.rhs(tmp, k3);
  for (std::size_t m = 0; m < n; ++m) tmp[m] = v[m] + h * k3[m];
  op_.rhs(tmp, k4);
  for (std::size_t m = 0; m < n; ++m) v[m] += h / 6.0 * (k1[m] + 2.0 * k2[m] + 2.0 * k3[m] + k4[m]);
}

void Stepper::rk4_parent(std::vector<Complex>& w, std::vector<Complex>& wt) {
  const std::size_t n = w.size();
  const double h = dt_;
  // Slopes of w are the stage values of w_t, slopes of w_t the accelerations.
  std::vector<Complex>* kw = &buf_[0];
  std::vector<Complex>* ka = &buf_[4];
  auto& tw = buf_[8];
  const double c[4] = {0.0, 0.5, 0.5, 1.0};
  for (int s = 0; s < 4; ++s) {
    if (s == 0) {
      tw = w;
      kw[0] = wt;
    } else {
      for (std::size_t m = 0; m < n; ++m) {
        tw[m] = w[m] + c[s] * h * kw[s - 1][m];
        kw[s][m] = wt[m] + c[s] * h * ka[s - 1][m];
      }
    }
    op_.parent_acceleration(tw, ka[s]);
  }
  for (std::size_t m = 0; m < n; ++m) {
    w[m] += h / 6.0 * (kw[0][m] + 2.0 * kw[1][m] + 2.0 * kw[2][m] + kw[3][m]);
    wt[m] += h / 6.0 * (ka[0][m] + 2.0 * ka[1][m] + 2.0 * ka[2][m] + ka[3][m]);
  }
}

SpectralField step(const ModelSpec& model, SpectralField field, double dt, Scheme scheme) {
  if (!is_first_order(model.tag)) {
    throw Error(ErrorCode::WrongModelOrder, "use Stepper::advance(State&) for ParentNonlocal");
  }
  Stepper stepper(model, field.grid(), scheme, dt);
  std::vector<Complex> u = field.ensure_coeffs().coeffs();
  stepper.advance(u, nullptr);
  return SpectralField::from_coeffs(field.grid(), std::move(u));
}

double relative_drift(double x, double x0) {
  return std::abs(x - x0) / std::max(std::abs(x0), 1e-30);
}

InvariantValues invariants(const ModelSpec& model, const SpectralField& v) {
  if (model.tag == ModelTag::ParentNonlocal) {
    throw Error(ErrorCode::WrongModelOrder, "ParentNonlocal invariants need (w, w_t)");
  }
  return invariants(model, State{v, std::nullopt, 0.0});
}

InvariantValues invariants(const ModelSpec& model, const State& state) {
  const Grid& grid = state.u.grid();
  SpectralField u = state.u;
  const std::vector<Complex>& c = u.ensure_coeffs().coeffs();
  Dealiaser dealiaser(grid);
  const std::size_t size = grid.spectral_size();
  const bool full_dispersion = model.tag == ModelTag::WhithamFDKP || model.tag == ModelTag::BBMFDKP;
  InvariantValues out;

  if (model.tag == ModelTag::ParentNonlocal) {
    if (!state.ut) throw Error(ErrorCode::InvalidArgument, "ParentNonlocal invariants need w_t");
    SpectralField ut = *state.ut;
    const auto& ct = ut.ensure_coeffs().coeffs();
    std::vector<double> mass(size), stiff(size);
    std::vector<Complex> wx(size), wy(size), mwt(size);
    for (int j = 0; j < grid.ny(); ++j) {
      for (int i = 0; i < grid.nkx(); ++i) {
        const std::size_t n = grid.spectral_index(i, j);
        const double k = grid.is_nyquist_x(i) ? 0.0 : grid.kx(i);
        const double l = grid.is_nyquist_y(j) ? 0.0 : grid.ky(j);
        const double kk = grid.kx(i);
        const double ll = grid.ky(j);
        mass[n] = 1.0 + m_symbol(model.kernel, kk, ll);
        stiff[n] = kk * kk + ll * ll;
        wx[n] = Complex(0.0, k) * c[n];
        wy[n] = Complex(0.0, l) * c[n];
        mwt[n] = mass[n] * ct[n];
      }
    }
    // S^4 = (wx^2 + wy^2)^2 on the padded grid, exact for this degree.
    std::vector<double> px(dealiaser.padded_size()), py(dealiaser.padded_size());
    dealiaser.to_padded(wx, px);
    dealiaser.to_padded(wy, py);
    double s4 = 0.0;
    for (std::size_t p = 0; p < px.size(); ++p) {
      const double s2 = px[p] * px[p] + py[p] * py[p];
      s4 += s2 * s2;
    }
    s4 *= grid.area() / static_cast<double>(px.size());
    out.E = 0.5 * quadratic(grid, ct, mass) + 0.5 * quadratic(grid, c, stiff) + model.mu / 6.0 * s4;
    out.P = grid.area() * mwt[0].real();
    out.Q = inner_product(SpectralField::from_coeffs(grid, mwt), SpectralField::from_coeffs(grid, wx));
    return out;
  }

  std::vector<double> q_weight(size, 1.0), e_weight(size);
  for (int j = 0; j < grid.ny(); ++j) {
    for (int i = 0; i < grid.nkx(); ++i) {
      const std::size_t n = grid.spectral_index(i, j);
      // Symbols are even in k and l, so no Nyquist averaging is needed.
      const double k = grid.kx(i);
      const double l = grid.ky(j);
      double mass = 1.0;
      double stiffness;
      switch (model.tag) {
        case ModelTag::BBMFDKP:
          mass = std::sqrt(1.0 + m_symbol(model.kernel, k, l));
          stiffness = k == 0.0 ? 0.0 : std::sqrt(1.0 + l * l / (k * k));
          break;
        case ModelTag::BBMKP:
          mass = 1.0 + model.nu * k * k;
          stiffness = k == 0.0 ? (l == 0.0 ? 1.0 : 0.0) : 1.0 + l * l / (2.0 * k * k);
          break;
        case ModelTag::CubicBBM:
          mass = 1.0 + model.nu * k * k;
          stiffness = 1.0;
          break;
        default:
          if (k != 0.0) {
            stiffness = linear_phase_symbol(model, k, l) / k;
          } else {
            // The full-dispersion symbols take the value 0 on the k = 0 ray,
            // like p. Local symbols use their limit 1 at the origin and 0
            // where l^2/k^2 blows up (zero-mass data has no content there).
            if (full_dispersion) {
              stiffness = 0.0;
            } else {
              stiffness = (is_kp_family(model.tag) && l != 0.0) ? 0.0 : 1.0;
            }
          }
      }
      q_weight[n] = mass;
      e_weight[n] = stiffness;
    }
  }
  out.Q = quadratic(grid, c, q_weight);
  out.E = 0.5 * quadratic(grid, c, e_weight) + model.mu / 12.0 * quartic_integral(dealiaser, c);
  out.P = grid.area() * c[0].real();
  return out;
}

InvariantReport make_report(double time, const InvariantValues& now, const InvariantValues& initial) {
  InvariantReport r;
  r.time = time;
  r.Q = now.Q;
  r.E = now.E;
  r.P = now.P;
  r.dQ_rel = relative_drift(now.Q, initial.Q);
  r.dE_rel = relative_drift(now.E, initial.E);
  r.dP_rel = relative_drift(now.P, initial.P);
  return r;
}

double band_amplitude(const SpectralField& v, int mode_index) {
  const Grid& grid = v.grid();
  const auto& c = v.coeffs();
  const int j = mode_index;
  const int jm = (grid.ny() - j) % grid.ny();
  double sum = 0.0;
  for (int i = 0; i < grid.nkx(); ++i) sum += std::norm(c[grid.spectral_index(i, j)]);
  // Negative kx of row j are the conjugates of row -j.
  for (int i = 1; i < grid.nx() / 2; ++i) sum += std::norm(c[grid.spectral_index(i, jm)]);
  return std::sqrt(grid.lx() * sum);
}

Trajectory run(const ModelSpec& model, State initial, const StepperConfig& config,
               const RunHooks& hooks) {
  config.validate(model.tag);
  const Grid grid = initial.u.grid();
  if (model.tag == ModelTag::ParentNonlocal && !initial.ut) {
    initial.ut = SpectralField(grid);
  }
  // Nyquist modes carry no symmetric information; keep them empty.
  auto strip_nyquist = [&grid](SpectralField& f) {
    auto& c = f.mutable_coeffs();
    for (int j = 0; j < grid.ny(); ++j) {
      for (int i = 0; i < grid.nkx(); ++i) {
        if (grid.is_nyquist_x(i) || grid.is_nyquist_y(j)) c[grid.spectral_index(i, j)] = Complex{};
      }
    }
  };
  strip_nyquist(initial.u);
  if (initial.ut) strip_nyquist(*initial.ut);
  if (is_kp_family(model.tag)) {
    initial.u = zero_mass_project(std::move(initial.u));
  }

  long steps = 0;
  double dt = config.dt;
  if (config.t_final > 0.0) {
    steps = static_cast<long>(std::ceil(config.t_final / config.dt - 1e-9));
    dt = config.t_final / static_cast<double>(steps);
  }

  std::vector<int> modes;
  for (double lambda : hooks.track_lambda) modes.push_back(transverse_mode_index(grid, lambda));

  Trajectory traj;
  traj.tracked_lambda = hooks.track_lambda;
  traj.dt = dt;
  traj.steps = steps;

  std::vector<Complex> u = initial.u.ensure_coeffs().coeffs();
  std::vector<Complex> ut;
  if (initial.ut) ut = initial.ut->ensure_coeffs().coeffs();
  const double t0 = initial.time;

  auto current_state = [&](double time) {
    State s{SpectralField::from_coeffs(grid, u), std::nullopt, time};
    if (initial.ut) s.ut = SpectralField::from_coeffs(grid, ut);
    return s;
  };

  const InvariantValues inv0 = invariants(model, current_state(t0));
  auto monitor = [&](double time) {
    State s = current_state(time);
    MonitorRecord rec;
    rec.report = make_report(time, invariants(model, s), inv0);
    rec.max_abs = max_abs(s.u.ensure_values());
    for (int m : modes) rec.band_amplitude.push_back(band_amplitude(s.u.ensure_coeffs(), m));
    traj.records.push_back(rec);
    if (hooks.on_monitor) hooks.on_monitor(rec);
  };

  monitor(t0);
  if (hooks.on_snapshot && config.snapshot_every > 0) hooks.on_snapshot(current_state(t0), 0);

  if (steps > 0) {
    Stepper stepper(model, grid, config.scheme, dt);
    double last_valid = t0;
    for (long n = 1; n <= steps; ++n) {
      stepper.advance(u, initial.ut ? &ut : nullptr);
      const double time = t0 + static_cast<double>(n) * dt;
      if (!all_finite(u) || (initial.ut && !all_finite(ut))) {
        std::ostringstream msg;
        msg << "non-finite state at step " << n << " (t = " << time << "); last valid time " << last_valid;
        throw Error(ErrorCode::UnstableRun, msg.str());
      }
      last_valid = time;
      if (n % config.monitor_every == 0 || n == steps) monitor(time);
      if (hooks.on_snapshot && config.snapshot_every > 0 && n % config.snapshot_every == 0) {
        hooks.on_snapshot(current_state(time), static_cast<int>(n / config.snapshot_every));
      }
    }
  }
  traj.final_state.emplace(current_state(t0 + static_cast<double>(steps) * dt));
  log::debug("run finished after " + std::to_string(steps) + " steps");
  return traj;
}

}  // namespace fdkp
