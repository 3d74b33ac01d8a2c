#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fdkp/models.hpp"
#include "fdkp/spectral.hpp"

namespace fdkp {

enum class Scheme { Etdrk4, Rk4 };

Scheme parse_scheme(const std::string& text);
std::string_view to_string(Scheme scheme);

/// etdrk4 for first-order tags with unbounded symbols, rk4 for the
/// BBM family and ParentNonlocal.
Scheme default_scheme(ModelTag tag);

struct StepperConfig {
  Scheme scheme = Scheme::Etdrk4;
  double dt = 1e-3;
  double t_final = 1.0;
  int snapshot_every = 0;  // 0: no snapshots
  int monitor_every = 1;

  /// Throws InvalidArgument on non-positive dt or negative T, InvalidConfig on an
  /// inadmissible scheme.
  void validate(ModelTag tag) const;
};

/// etdrk4: 1e-2 Lx / Nx. rk4: 2.8 / max |Lambda| over the grid (the
/// largest linear frequency for ParentNonlocal).
double default_dt(const ModelSpec& model, const Grid& grid, Scheme scheme);

/// Field u (v, or w for ParentNonlocal) and, for ParentNonlocal, u_t.
struct State {
  SpectralField u;
  std::optional<SpectralField> ut;
  double time = 0.0;
};

/// One-step integrator. Holds the ETDRK4 coefficient tables and the model
/// operator, so one Stepper serves one run on one thread.
class Stepper {
 public:
  Stepper(const ModelSpec& model, const Grid& grid, Scheme scheme, double dt);

  Scheme scheme() const { return scheme_; }
  double dt() const { return dt_; }
  ModelOperator& op() { return op_; }

  /// Advance coefficient arrays in place. `ut` is required for
  /// ParentNonlocal and ignored otherwise.
  void advance(std::vector<Complex>& u, std::vector<Complex>* ut);

  void advance(State& state);

 private:
  void etdrk4(std::vector<Complex>& v);
  void rk4_first_order(std::vector<Complex>& v);
  void rk4_parent(std::vector<Complex>& w, std::vector<Complex>& wt);

  ModelOperator op_;
  Scheme scheme_;
  double dt_;
  bool project_;
  // ETDRK4 tables.
  std::vector<Complex> e_, e2_, q_, f1_, f2_, f3_;
  // Stage buffers.
  std::vector<std::vector<Complex>> buf_;
};

/// phi_1, phi_2, phi_3 at z with the Taylor switch at |z| < 0.1.
struct PhiValues {
  Complex phi1, phi2, phi3;
};
PhiValues phi_functions(Complex z);

/// Single step of the free-function form (builds a Stepper).
SpectralField step(const ModelSpec& model, SpectralField field, double dt, Scheme scheme);

struct InvariantValues {
  double Q = 0.0;
  double E = 0.0;
  double P = 0.0;
};

struct InvariantReport {
  double time = 0.0;
  double Q = 0.0, E = 0.0, P = 0.0;
  double dQ_rel = 0.0, dE_rel = 0.0, dP_rel = 0.0;
};

/// |x - x0| / max(|x0|, 1e-30).
double relative_drift(double x, double x0);

/// Q, E, P for the model. Whitham-type tags: Q = int v^2,
/// E = int 1/2 [(Lambda/k) v.v + mu/6 v^4], P = int v. BBM-type tags use
/// their mass and stiffness symbols. ParentNonlocal: Q is the momentum
/// int ((1+M) w_t) w_x, E the total energy, P = int (1+M) w_t.
InvariantValues invariants(const ModelSpec& model, const State& state);
InvariantValues invariants(const ModelSpec& model, const SpectralField& v);

InvariantReport make_report(double time, const InvariantValues& now, const InvariantValues& initial);

/// One monitor sample.
struct MonitorRecord {
  InvariantReport report;
  double max_abs = 0.0;
  /// L2-over-x norm of each tracked ky band, in the order given.
  std::vector<double> band_amplitude;
};

struct RunHooks {
  /// Transverse wavenumbers (grid-commensurate) whose band amplitude is tracked.
  std::vector<double> track_lambda;
  std::function<void(const MonitorRecord&)> on_monitor;
  std::function<void(const State&, int)> on_snapshot;
};

struct Trajectory {
  std::vector<MonitorRecord> records;
  std::vector<double> tracked_lambda;
  std::optional<State> final_state;
  double dt = 0.0;
  long steps = 0;
};

/// L2 norm over x of the ky = lambda band of v.
double band_amplitude(const SpectralField& v, int mode_index);

/// Integrates to T. dt is shrunk so that T is an integer number of steps.
/// KP-family states are zero-mass projected initially and after every
/// step. Throws UnstableRun on a non-finite state.
Trajectory run(const ModelSpec& model, State initial, const StepperConfig& config,
               const RunHooks& hooks = {});

}  // namespace fdkp
