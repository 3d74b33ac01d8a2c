#include "fdkp/cli.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>
#include <thread>

#include "fdkp/error.hpp"
#include "fdkp/kernels.hpp"
#include "fdkp/log.hpp"
#include "fdkp/models.hpp"
#include "fdkp/snapshot.hpp"
#include "fdkp/solver.hpp"
#include "fdkp/stability.hpp"
#include "fdkp/waves.hpp"

namespace fdkp {

namespace fs = std::filesystem;

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

namespace {

// Row-oriented CSV with fixed float formatting.
class CsvWriter {
 public:
  CsvWriter(const fs::path& path, const std::vector<std::string>& header) : path_(path), out_(path) {
    if (!out_) throw Error(ErrorCode::Io, "cannot open " + path.string());
    row(header);
  }

  const fs::path& path() const { return path_; }

  template <class... Cells>
  void write(const Cells&... cells) {
    std::vector<std::string> r{cell(cells)...};
    row(r);
  }

  void flush() { out_.flush(); }

 private:
  static std::string cell(double v) { return format_double(v); }
  static std::string cell(int v) { return std::to_string(v); }
  static std::string cell(long v) { return std::to_string(v); }
  static std::string cell(const std::string& v) { return v; }
  static std::string cell(std::string_view v) { return std::string(v); }
  static std::string cell(const char* v) { return v; }

  void row(const std::vector<std::string>& cells) {
    for (std::size_t n = 0; n < cells.size(); ++n) {
      if (n > 0) out_ << ',';
      out_ << cells[n];
    }
    out_ << '\n';
    if (!out_) throw Error(ErrorCode::Io, "write failed for " + path_.string());
  }

  fs::path path_;
  std::ofstream out_;
};

std::ostream* sink(const CommandContext& ctx) { return ctx.report; }

template <class... Args>
void say(const CommandContext& ctx, const Args&... args) {
  if (std::ostream* os = sink(ctx)) {
    ((*os) << ... << args);
    (*os) << '\n';
  }
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create " + dir.string() + ": " + ec.message());
}

// Runs body(i) for i in [0, count) on up to `jobs` threads. The first
// exception (by index) is rethrown after all workers finish.
void parallel_for(int count, int jobs, const std::function<void(int)>& body) {
  jobs = std::max(1, std::min(jobs, count));
  std::vector<std::exception_ptr> errors(count);
  std::atomic<int> next{0};
  auto worker = [&]() {
    for (int i = next++; i < count; i = next++) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

KernelSpec kernel_from(const Config& cfg) {
  const std::string family = cfg.get_string("kernel.family", "whitham_shallow");
  switch (parse_kernel_family(family)) {
    case KernelFamily::WhithamShallow: return KernelSpec::whitham_shallow();
    case KernelFamily::GreenExponential: return KernelSpec::green_exponential();
    case KernelFamily::CustomRadial:
      throw Error(ErrorCode::InvalidConfig, "custom kernels can only be registered programmatically");
  }
  throw Error(ErrorCode::InvalidConfig, "unknown kernel family");
}

bool uses_kernel(ModelTag tag) {
  switch (tag) {
    case ModelTag::ParentNonlocal:
    case ModelTag::WhithamFDKP:
    case ModelTag::BBMFDKP:
    case ModelTag::SimplifiedWhithamKP:
    case ModelTag::ModifiedWhitham:
      return true;
    default:
      return false;
  }
}

ModelSpec model_from(const Config& cfg, const std::string& default_tag) {
  ModelSpec model;
  model.tag = parse_model_tag(cfg.get_string("model.tag", default_tag));
  model.kernel = kernel_from(cfg);
  model.mu = cfg.get_double("model.mu", 6.0);
  model.nu = cfg.has("model.nu") ? cfg.get_double("model.nu")
                                 : (uses_kernel(model.tag) ? nu_coefficient(model.kernel) : 1.0);
  const std::string lop = cfg.get_string("model.l_operator", "default");
  if (lop == "kp_special") {
    if (model.tag != ModelTag::WhithamFDKP) {
      throw Error(ErrorCode::InvalidConfig, "model.l_operator applies to whitham_fdkp only");
    }
    model.l_operator = kp_special_operator(model.nu);
  } else if (lop != "default") {
    throw Error(ErrorCode::InvalidConfig, "model.l_operator must be 'default' or 'kp_special'");
  }
  model.validate();
  return model;
}

Grid grid_from(const Config& cfg, int nx, int ny, double lx, double ly) {
  return Grid(cfg.get_int("grid.nx", nx), cfg.get_int("grid.ny", ny), cfg.get_double("grid.lx", lx),
              cfg.get_double("grid.ly", ly));
}

SolitonFamily family_for(ModelTag tag) {
  return (tag == ModelTag::BBMKP || tag == ModelTag::CubicBBM || tag == ModelTag::BBMFDKP)
             ? SolitonFamily::BBM
             : SolitonFamily::MKdV;
}

struct InitialData {
  State state;
  SolitonParams params;
  double lambda = 0.0;  // 0: no transverse perturbation
  double delta = 0.0;
  double removed_mean = 0.0;
};

InitialData initial_from(const Config& cfg, const ModelSpec& model, const Grid& grid) {
  InitialData init{State{SpectralField(grid), std::nullopt, 0.0}, {}, 0.0, 0.0, 0.0};
  const std::string family = cfg.get_string("wave.family", std::string(to_string(family_for(model.tag))));
  init.params = soliton_params(parse_soliton_family(family), cfg.get_double("wave.c", 2.0), model.mu, model.nu);
  init.delta = cfg.get_double("wave.delta", 0.0);
  LineSolitonOptions opts;
  if (cfg.has("wave.x0")) opts.x0 = cfg.get_double("wave.x0");
  opts.zero_mass = is_kp_family(model.tag);
  LineSoliton wave = [&] {
    if (init.delta != 0.0) {
      const int mode = cfg.get_int("wave.lambda_mode", 1);
      init.lambda = 2.0 * std::numbers::pi * mode / grid.ly();
      return perturbed_soliton(init.params, grid, init.lambda, init.delta,
                               parse_profile(cfg.get_string("wave.profile", "z0")), opts);
    }
    return line_soliton_field(init.params, grid, opts);
  }();
  init.removed_mean = wave.removed_mean;
  if (model.tag == ModelTag::ParentNonlocal) {
    // Displacement w = Dx^{-1} v (mean of v dropped) moving at speed c:
    // w_t = -c w_x.
    SpectralField v = std::move(wave.field);
    v.ensure_coeffs();
    SpectralField w = apply_multiplier(zero_mass_project(v), inverse_dx_symbol);
    SpectralField wt = apply_multiplier(w, [c = init.params.c](double k, double) {
      return Complex(0.0, -c * k);
    });
    init.state = State{std::move(w), std::move(wt), 0.0};
  } else {
    init.state.u = std::move(wave.field);
  }
  return init;
}

StepperConfig stepper_from(const Config& cfg, const ModelSpec& model, const Grid& grid, double t_final) {
  StepperConfig sc;
  sc.scheme = parse_scheme(cfg.get_string("stepper.scheme", std::string(to_string(default_scheme(model.tag)))));
  sc.dt = cfg.get_double("stepper.dt", default_dt(model, grid, sc.scheme));
  sc.t_final = cfg.get_double("stepper.t_final", t_final);
  sc.snapshot_every = cfg.get_int("stepper.snapshot_every", 0);
  sc.monitor_every = cfg.get_int("stepper.monitor_every", 10);
  sc.validate(model.tag);
  return sc;
}

struct RunOutputs {
  Trajectory trajectory;
  FileList files;
};

// Shared by simulate and stability-perturb.
RunOutputs run_with_outputs(const CommandContext& ctx, const ModelSpec& model, InitialData& init,
                            const StepperConfig& sc, const fs::path& dir) {
  ensure_dir(dir);
  RunOutputs out;
  CsvWriter monitors(dir / "monitors.csv",
                     {"time", "Q", "E", "P", "dQ_rel", "dE_rel", "dP_rel", "max_abs_v"});
  out.files.push_back(monitors.path());
  std::optional<CsvWriter> bands;
  RunHooks hooks;
  if (init.lambda > 0.0) {
    hooks.track_lambda.push_back(init.lambda);
    bands.emplace(dir / "bands.csv", std::vector<std::string>{"time", "lambda", "amplitude"});
    out.files.push_back(bands->path());
  }
  hooks.on_monitor = [&](const MonitorRecord& r) {
    const auto& p = r.report;
    monitors.write(p.time, p.Q, p.E, p.P, p.dQ_rel, p.dE_rel, p.dP_rel, r.max_abs);
    if (bands) bands->write(p.time, init.lambda, r.band_amplitude.front());
  };
  const std::string tag(to_string(model.tag));
  if (sc.snapshot_every > 0) {
    ensure_dir(dir / "snapshots");
    hooks.on_snapshot = [&](const State& s, int index) {
      std::ostringstream name;
      name << "snap_" << std::setw(5) << std::setfill('0') << index;
      auto [bin, hdr] = write_snapshot(dir / "snapshots" / name.str(), s.u, s.time, tag);
      out.files.push_back(bin);
      out.files.push_back(hdr);
    };
  }
  say(ctx, "running ", tag, " scheme=", to_string(sc.scheme), " dt=", format_double(sc.dt),
      " T=", format_double(sc.t_final));
  out.trajectory = run(model, init.state, sc, hooks);
  monitors.flush();
  auto [bin, hdr] = write_snapshot(dir / "final", out.trajectory.final_state->u,
                                   out.trajectory.final_state->time, tag);
  out.files.push_back(bin);
  out.files.push_back(hdr);
  return out;
}

std::vector<double> required_list(const Config& cfg, const std::string& key) {
  if (!cfg.has(key)) throw Error(ErrorCode::InvalidConfig, "missing key '" + key + "'");
  const auto list = cfg.get_double_list(key, {});
  if (list.empty()) throw Error(ErrorCode::InvalidConfig, "'" + key + "' must not be empty");
  return list;
}

struct EigenRow {
  double c = 0.0;
  double lambda = 0.0;
  double re = 0.0;
  double im = 0.0;
};

struct EigenSweep {
  std::vector<EigenRow> rows;
  int n = 0;
  std::vector<double> lengths;  // per c
};

EigenSweep eigen_sweep(const Config& cfg, int jobs) {
  const StabilityFamily family = parse_stability_family(cfg.get_string("stability.family", "whitham"));
  const auto c_list = required_list(cfg, "stability.c_list");
  const auto lambda_list = required_list(cfg, "stability.lambda_list");
  const double nu = cfg.get_double("stability.nu", 1.0);
  const int n = cfg.get_int("stability.n_modes", 512);
  const double length_cfg = cfg.get_double("stability.length", 0.0);
  for (double l : lambda_list) {
    if (!(l >= 0.0)) throw Error(ErrorCode::InvalidConfig, "lambda values must be non-negative");
  }
  EigenSweep sweep;
  sweep.n = n;
  for (double c : c_list) {
    const double kappa = stability_kappa(family, c, nu);
    sweep.lengths.push_back(length_cfg > 0.0 ? length_cfg : default_pencil_length(kappa));
  }
  const int count = static_cast<int>(c_list.size() * lambda_list.size());
  sweep.rows.resize(count);
  parallel_for(count, jobs, [&](int idx) {
    const std::size_t ci = idx / lambda_list.size();
    const std::size_t li = idx % lambda_list.size();
    const auto pencil = build_pencil(family, c_list[ci], nu, lambda_list[li], n, sweep.lengths[ci]);
    const auto spec = growth_rates(pencil);
    sweep.rows[idx] = {c_list[ci], lambda_list[li], spec.omega.front().real(), spec.omega.front().imag()};
  });
  return sweep;
}

FileList write_eigen_outputs(const CommandContext& ctx, const EigenSweep& sweep, const fs::path& csv_path,
                             const fs::path& fit_path) {
  const Config& cfg = ctx.config;
  const StabilityFamily family = parse_stability_family(cfg.get_string("stability.family", "whitham"));
  const double nu = cfg.get_double("stability.nu", 1.0);
  const auto c_list = required_list(cfg, "stability.c_list");
  const auto lambda_list = required_list(cfg, "stability.lambda_list");
  FileList files;
  {
    CsvWriter csv(csv_path, {"family", "c", "nu", "lambda", "re_omega_max", "im_omega_at_max", "N", "L"});
    for (std::size_t r = 0; r < sweep.rows.size(); ++r) {
      const auto& row = sweep.rows[r];
      const double length = sweep.lengths[r / lambda_list.size()];
      csv.write(to_string(family), row.c, nu, row.lambda, row.re, row.im, sweep.n, length);
    }
    files.push_back(csv.path());
  }
  const bool fittable = lambda_list.size() >= 3 &&
                        std::all_of(lambda_list.begin(), lambda_list.end(), [](double l) { return l > 0.0 && l <= 0.2; });
  if (fittable) {
    CsvWriter fit(fit_path, {"family", "c", "nu", "omega1_fit", "lambda2_coeff", "omega1_sq_closed_form"});
    for (std::size_t ci = 0; ci < c_list.size(); ++ci) {
      Eigen::MatrixXd X(lambda_list.size(), 2);
      Eigen::VectorXd y(lambda_list.size());
      for (std::size_t li = 0; li < lambda_list.size(); ++li) {
        const double l = lambda_list[li];
        X(li, 0) = l;
        X(li, 1) = l * l;
        y(li) = sweep.rows[ci * lambda_list.size() + li].re;
      }
      const Eigen::Vector2d coef = X.colPivHouseholderQr().solve(y);
      const double w2 = omega1_squared(family, c_list[ci]);
      fit.write(to_string(family), c_list[ci], nu, coef(0), coef(1), w2);
      say(ctx, to_string(family), " c=", format_double(c_list[ci]), " Omega1 fit=", format_double(coef(0)),
          " closed form Omega1^2=", format_double(w2));
    }
    files.push_back(fit.path());
  }
  return files;
}

}  // namespace

FileList cmd_dispersion(const CommandContext& ctx) {
  const Config& cfg = ctx.config;
  const KernelSpec kernel = kernel_from(cfg);
  const double nu = cfg.has("model.nu") ? cfg.get_double("model.nu") : nu_coefficient(kernel);
  const int nk = cfg.get_int("grid.nk", 64);
  const int nl = cfg.get_int("grid.nl", nk);
  const double kmax = cfg.get_double("grid.k_max", 4.0);
  const double lmax = cfg.get_double("grid.l_max", kmax);
  if (nk < 2 || nl < 2 || !(kmax > 0.0) || !(lmax > 0.0)) {
    throw Error(ErrorCode::InvalidConfig, "dispersion lattice needs nk, nl >= 2 and positive extents");
  }
  ensure_dir(ctx.out_dir);
  FileList files;
  {
    CsvWriter csv(ctx.out_dir / "dispersion.csv", {"k", "l", "omega_full", "omega_kp", "kp_flag"});
    for (int i = 0; i < nk; ++i) {
      const double k = -kmax + 2.0 * kmax * i / (nk - 1);
      for (int j = 0; j < nl; ++j) {
        const double l = -lmax + 2.0 * lmax * j / (nl - 1);
        const double full = omega({DispersionMode::Full, k, l}, kernel, nu);
        double kp = std::numeric_limits<double>::quiet_NaN();
        std::string flag = "ok";
        if (k == 0.0) {
          flag = "singular";
        } else {
          kp = omega({DispersionMode::KpLongWave, k, l}, kernel, nu);
          // Outside |l| < sqrt(2)|k| the transverse correction outgrows
          // the leading term and the expansion heads to its k = 0 pole.
          if (l * l > 2.0 * k * k) flag = "diverging";
        }
        csv.write(k, l, full, kp, flag);
      }
    }
    files.push_back(csv.path());
  }
  {
    CsvWriter csv(ctx.out_dir / "singular_ray.csv", {"l", "k", "omega_full", "omega_kp"});
    for (double l : {0.25, 0.5, 1.0}) {
      for (int e = 0; e <= 8; ++e) {
        const double k = std::pow(10.0, -e);
        csv.write(l, k, omega({DispersionMode::Full, k, l}, kernel, nu),
                  omega({DispersionMode::KpLongWave, k, l}, kernel, nu));
      }
    }
    files.push_back(csv.path());
  }
  say(ctx, "dispersion lattice ", nk, "x", nl, " written (kernel ", kernel.name(), ", nu=", format_double(nu), ")");
  return files;
}

FileList cmd_simulate(const CommandContext& ctx) {
  const Config& cfg = ctx.config;
  const ModelSpec model = model_from(cfg, "mkdv");
  const Grid grid = grid_from(cfg, 256, 1, 80.0, 2.0 * std::numbers::pi);
  InitialData init = initial_from(cfg, model, grid);
  if (init.removed_mean != 0.0) {
    say(ctx, "zero-mass projection removed mean ", format_double(init.removed_mean));
  }
  const StepperConfig sc = stepper_from(cfg, model, grid, 1.0);
  RunOutputs out = run_with_outputs(ctx, model, init, sc, ctx.out_dir);
  const auto& last = out.trajectory.records.back().report;
  say(ctx, "t=", format_double(last.time), " dQ_rel=", format_double(last.dQ_rel),
      " dE_rel=", format_double(last.dE_rel), " dP_rel=", format_double(last.dP_rel));
  return out.files;
}

FileList cmd_soliton_check(const CommandContext& ctx) {
  const Config& cfg = ctx.config;
  const SolitonFamily family = parse_soliton_family(cfg.get_string("wave.family", "mkdv"));
  const SolitonParams p = soliton_params(family, cfg.get_double("wave.c", 2.0), cfg.get_double("model.mu", 6.0),
                                         cfg.get_double("model.nu", 1.0));
  const double lx = cfg.get_double("grid.lx", std::max(80.0, 56.0 / p.kappa));
  const Grid grid(cfg.get_int("grid.nx", 1024), 1, lx, 1.0);
  const LineSoliton wave = line_soliton_field(p, grid);
  const double tol_profile = cfg.get_double("check.profile_tolerance", 1e-10);
  const double tol_travel = cfg.get_double("check.travel_tolerance", 1e-8);

  // R'' + kappa^2 (2R^2 - 1) R for R = sech(kappa xi).
  SpectralField r = SpectralField::sample(grid, [&](double x, double) { return 1.0 / std::cosh(p.kappa * (x - wave.x0)); });
  SpectralField r2 = apply_multiplier(r, [](double k, double) { return Complex(-k * k, 0.0); });
  const auto& rv = r.ensure_values().values();
  const auto& r2v = r2.ensure_values().values();
  double profile_res = 0.0;
  for (std::size_t n = 0; n < rv.size(); ++n) {
    profile_res = std::max(profile_res, std::abs(r2v[n] + p.kappa * p.kappa * (2.0 * rv[n] * rv[n] - 1.0) * rv[n]));
  }

  // v_t + c v_x = 0 for the exact traveling wave.
  ModelSpec model;
  model.tag = family == SolitonFamily::MKdV ? ModelTag::MKdV : ModelTag::CubicBBM;
  model.mu = p.mu;
  model.nu = p.nu;
  SpectralField vt = rhs(model, wave.field);
  SpectralField vx = apply_multiplier(wave.field, [](double k, double) { return Complex(0.0, k); });
  const auto& a = vt.ensure_values().values();
  const auto& b = vx.ensure_values().values();
  double travel_res = 0.0;
  for (std::size_t n = 0; n < a.size(); ++n) travel_res = std::max(travel_res, std::abs(a[n] + p.c * b[n]));

  ensure_dir(ctx.out_dir);
  CsvWriter csv(ctx.out_dir / "soliton_check.csv", {"check", "value", "tolerance", "pass"});
  csv.write("profile_ode_residual", profile_res, tol_profile, profile_res <= tol_profile ? "PASS" : "FAIL");
  csv.write("traveling_residual", travel_res, tol_travel, travel_res <= tol_travel ? "PASS" : "FAIL");
  csv.write("alpha", p.alpha, 0.0, "-");
  csv.write("kappa", p.kappa, 0.0, "-");
  say(ctx, "profile ODE residual ", format_double(profile_res), (profile_res <= tol_profile ? " PASS" : " FAIL"));
  say(ctx, "traveling residual   ", format_double(travel_res), (travel_res <= tol_travel ? " PASS" : " FAIL"));
  return {csv.path()};
}

FileList cmd_verify_integrals(const CommandContext& ctx) {
  const Config& cfg = ctx.config;
  const auto kappas = cfg.get_double_list("stability.kappa_list", {0.5, 1.0, 2.0});
  if (kappas.empty()) throw Error(ErrorCode::InvalidConfig, "stability.kappa_list must not be empty");
  const double omega1 = cfg.get_double("stability.omega1", 1.0);
  const double nu = cfg.get_double("stability.nu", 1.0);
  const double tol = cfg.get_double("stability.tolerance", 1e-10);
  ensure_dir(ctx.out_dir);
  CsvWriter csv(ctx.out_dir / "integrals.csv", {"kappa", "quantity", "computed", "closed_form", "abs_err", "pass"});
  for (double kappa : kappas) {
    int passed = 0;
    const auto rows = inner_product_table(kappa, omega1, nu);
    for (const auto& row : rows) {
      const double err = std::abs(row.computed - row.closed_form);
      const bool ok = err <= tol;
      passed += ok ? 1 : 0;
      csv.write(kappa, row.name, row.computed, row.closed_form, err, ok ? "PASS" : "FAIL");
    }
    say(ctx, "kappa=", format_double(kappa), ": ", passed, "/", rows.size(),
        passed == static_cast<int>(rows.size()) ? " PASS" : " FAIL");
  }
  return {csv.path()};
}

FileList cmd_stability_eigen(const CommandContext& ctx) {
  const EigenSweep sweep = eigen_sweep(ctx.config, ctx.jobs);
  ensure_dir(ctx.out_dir);
  return write_eigen_outputs(ctx, sweep, ctx.out_dir / "eigen.csv", ctx.out_dir / "fit.csv");
}

namespace {

struct PerturbResult {
  GrowthFit fit;
  double lambda = 0.0;
  FileList files;
};

PerturbResult perturb_run(const CommandContext& ctx, const Config& cfg, const fs::path& dir) {
  const ModelSpec model = model_from(cfg, "whitham_kp_local");
  const Grid grid = grid_from(cfg, 1024, 64, 80.0, 2.0 * std::numbers::pi / 0.1);
  Config seeded = cfg;
  if (!seeded.has("wave.delta")) seeded.set("wave.delta", 1e-4);
  if (!seeded.has("wave.c")) seeded.set("wave.c", 7.0);
  InitialData init = initial_from(seeded, model, grid);
  if (!(init.lambda > 0.0)) throw Error(ErrorCode::InvalidConfig, "wave.delta must be non-zero");
  const StepperConfig sc = stepper_from(cfg, model, grid, 22.0);
  RunOutputs out = run_with_outputs(ctx, model, init, sc, dir);
  GrowthWindow window;
  window.delta = std::abs(init.delta);
  window.alpha = init.params.alpha;
  PerturbResult res;
  res.lambda = init.lambda;
  res.files = out.files;
  res.fit = measure_growth(out.trajectory, init.lambda, window);
  return res;
}

}  // namespace

FileList cmd_stability_perturb(const CommandContext& ctx) {
  PerturbResult res = perturb_run(ctx, ctx.config, ctx.out_dir);
  CsvWriter csv(ctx.out_dir / "growth.csv", {"lambda", "fitted_rate", "r_squared", "window_start", "window_end"});
  csv.write(res.lambda, res.fit.rate, res.fit.r_squared, res.fit.window_start, res.fit.window_end);
  res.files.push_back(csv.path());
  say(ctx, "lambda=", format_double(res.lambda), " rate=", format_double(res.fit.rate),
      " R^2=", format_double(res.fit.r_squared));
  return res.files;
}

FileList cmd_sweep(const CommandContext& ctx) {
  const Config& cfg = ctx.config;
  const std::string kind = cfg.get_string("sweep.kind", "eigen");
  ensure_dir(ctx.out_dir);
  if (kind == "eigen") {
    const EigenSweep sweep = eigen_sweep(cfg, ctx.jobs);
    return write_eigen_outputs(ctx, sweep, ctx.out_dir / "sweep.csv", ctx.out_dir / "sweep_fit.csv");
  }
  if (kind != "perturb") throw Error(ErrorCode::InvalidConfig, "sweep.kind must be 'eigen' or 'perturb'");
  const auto c_list = required_list(cfg, "sweep.c_list");
  const int count = static_cast<int>(c_list.size());
  std::vector<PerturbResult> results(count);
  std::vector<std::string> status(count, "ok");
  CommandContext quiet = ctx;
  quiet.report = nullptr;
  parallel_for(count, ctx.jobs, [&](int i) {
    Config run_cfg = cfg;
    run_cfg.set("wave.c", c_list[i]);
    std::ostringstream name;
    name << "run_" << std::setw(3) << std::setfill('0') << i;
    try {
      results[i] = perturb_run(quiet, run_cfg, ctx.out_dir / name.str());
    } catch (const Error& e) {
      // A subthreshold speed has no growth window; record and go on.
      if (e.code() != ErrorCode::NoGrowthWindow) throw;
      status[i] = "no_growth_window";
    }
  });
  CsvWriter csv(ctx.out_dir / "sweep.csv",
                {"c", "lambda", "fitted_rate", "r_squared", "window_start", "window_end", "status"});
  FileList files;
  for (int i = 0; i < count; ++i) {
    const auto& r = results[i];
    csv.write(c_list[i], r.lambda, r.fit.rate, r.fit.r_squared, r.fit.window_start, r.fit.window_end, status[i]);
    files.insert(files.end(), r.files.begin(), r.files.end());
  }
  files.push_back(csv.path());
  say(ctx, "perturbation sweep over ", count, " speeds done");
  return files;
}

const std::vector<std::string>& subcommand_names() {
  static const std::vector<std::string> names{"dispersion",       "simulate",          "soliton-check",
                                              "verify-integrals", "stability-eigen",   "stability-perturb",
                                              "sweep"};
  return names;
}

FileList run_command(const std::string& name, const CommandContext& ctx) {
  static const std::map<std::string, FileList (*)(const CommandContext&)> table{
      {"dispersion", cmd_dispersion},
      {"simulate", cmd_simulate},
      {"soliton-check", cmd_soliton_check},
      {"verify-integrals", cmd_verify_integrals},
      {"stability-eigen", cmd_stability_eigen},
      {"stability-perturb", cmd_stability_perturb},
      {"sweep", cmd_sweep},
  };
  const auto it = table.find(name);
  if (it == table.end()) throw Error(ErrorCode::InvalidArgument, "unknown subcommand '" + name + "'");
  if (ctx.jobs < 1) throw Error(ErrorCode::InvalidArgument, "--jobs must be >= 1");
  FileList files = it->second(ctx);

  std::vector<std::string> rel;
  for (const auto& f : files) rel.push_back(fs::relative(f, ctx.out_dir).generic_string());
  std::sort(rel.begin(), rel.end());
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(fnv1a64(ctx.config.source())));
  nlohmann::ordered_json manifest = {
      {"command", name}, {"version", FDKP_VERSION}, {"config_hash", std::string("fnv1a64:") + hash}, {"files", rel}};
  const fs::path path = ctx.out_dir / "manifest.json";
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << manifest.dump(2) << '\n';
  files.push_back(path);
  return files;
}

int exit_code_for(const std::exception& error) {
  if (const auto* e = dynamic_cast<const Error*>(&error)) return is_numerical(e->code()) ? 3 : 2;
  return 2;
}

}  // namespace fdkp
