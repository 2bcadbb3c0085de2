#pragma once

#include <algorithm>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "qpww/dynamics.hpp"

namespace qpww {

/// Background and linearized perturbation evolved together: the background
/// under rhs_diff, the perturbation under the full linearized flow.
struct CoupledState {
  DiffState bg;
  LinState lin;
};

inline CoupledState& axpy(CoupledState& a, double s, const CoupledState& b) {
  axpy(a.bg, s, b.bg);
  axpy(a.lin, s, b.lin);
  return a;
}
inline bool all_finite(const CoupledState& c) { return all_finite(c.bg) && all_finite(c.lin); }
void enforce_holomorphic(CoupledState& state);
double holomorphic_leakage(const CoupledState& state);

/// One classical RK4 step of u' = rhs(t, u). No projection.
template <class S, class Rhs>
S rk4_step(const Rhs& rhs, double t, const S& u, double dt) {
  const S k1 = rhs(t, u);
  S tmp = u;
  axpy(tmp, 0.5 * dt, k1);
  const S k2 = rhs(t + 0.5 * dt, tmp);
  tmp = u;
  axpy(tmp, 0.5 * dt, k2);
  const S k3 = rhs(t + 0.5 * dt, tmp);
  tmp = u;
  axpy(tmp, dt, k3);
  const S k4 = rhs(t + dt, tmp);
  S out = u;
  axpy(out, dt / 6.0, k1);
  axpy(out, dt / 3.0, k2);
  axpy(out, dt / 3.0, k3);
  axpy(out, dt / 6.0, k4);
  return out;
}

enum class ProjectorPolicy { every_step, every_k_steps };

struct RunConfig {
  double dt = 1e-3;
  double t_max = 1.0;
  ProjectorPolicy projector_policy = ProjectorPolicy::every_step;
  int projector_every = 1;
  int monitor_stride = 1;
  double eps_chord = kDefaultEpsChord;
  std::string integrator = "rk4";
  /// dt <= c_stab / sqrt(max |xi| in the box).
  double c_stab = 2.0;
  /// Sobolev index for A, B and the norm columns.
  double sobolev = 2.0;
  std::vector<int> energy_orders{1, 2};
  std::vector<double> checkpoint_times;
};

/// Throws ValidationError for nonpositive dt, an unknown integrator or a
/// violated stability heuristic.
void validate_run_config(const RunConfig& cfg, const Lattice& lattice);
int total_steps(const RunConfig& cfg);

struct StepInfo {
  double leakage = 0.0;  ///< measured before projection
  bool projected = false;
};

/// RK4 step followed by the projection policy. step is the index of the step
/// being taken (0-based), used by every_k_steps.
template <class S, class Rhs>
S step_rk4(const S& u, const Rhs& rhs, double t, double dt, const RunConfig& cfg, long step,
           StepInfo* info = nullptr) {
  S out = rk4_step(rhs, t, u, dt);
  const bool project = cfg.projector_policy == ProjectorPolicy::every_step ||
                       (step + 1) % std::max(1, cfg.projector_every) == 0;
  const double leak = holomorphic_leakage(out);
  if (project) enforce_holomorphic(out);
  if (info) *info = {leak, project};
  return out;
}

/// Rows of monitor samples with named columns.
struct TimeSeries {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  double value(std::size_t row, const std::string& column) const;
  std::vector<double> column(const std::string& name) const;
};

enum class RunStatus { completed, surface_degenerate, non_finite };

template <class S>
struct RunResult {
  TimeSeries series;
  S state;  ///< last finite, nondegenerate state
  double t = 0.0;
  long steps = 0;
  RunStatus status = RunStatus::completed;
  std::string message;
  double degenerate_min = 0.0;  ///< min |1+W| reported by SurfaceDegenerate
};

template <class S>
using CheckpointFn = std::function<void(double t, long step, const S& state)>;

/// Fixed-step integration to cfg.t_max, starting at step index start_step
/// (t = step * dt). Monitors are sampled every monitor_stride steps and at
/// the end; the checkpoint callback fires at the step nearest to each
/// checkpoint time. SurfaceDegenerate and non-finite coefficients stop the
/// run and are reported through the status with the partial series.
RunResult<DiffState> integrate(const DiffState& initial, const RunConfig& cfg, const CheckpointFn<DiffState>& checkpoint = {},
                               long start_step = 0);
RunResult<SurfaceState> integrate(const SurfaceState& initial, const RunConfig& cfg,
                                  const CheckpointFn<SurfaceState>& checkpoint = {}, long start_step = 0);
RunResult<CoupledState> integrate(const CoupledState& initial, const RunConfig& cfg,
                                  const CheckpointFn<CoupledState>& checkpoint = {}, long start_step = 0);

/// Coupled right-hand side: (rhs_diff(bg), P-sharp linearized_rhs(bg, lin)).
CoupledState rhs_coupled(const CoupledState& state, double eps_chord = kDefaultEpsChord);

struct DispersionResult {
  bool detected = false;
  double omega = 0.0;     ///< measured angular frequency (0 when not detected)
  double expected = 0.0;  ///< |xi|^{1/2}
  double xi = 0.0;
};

/// Starts the differentiated system at W = 0, R = amplitude * e^{i<j,alpha>}
/// and times the first zero of Re R_j(t) / amplitude, which behaves like
/// cos(omega t). Requires xi(j) < 0.
DispersionResult dispersion_probe(LatticePtr lattice, std::span<const int> j, double amplitude, const RunConfig& cfg);

}  // namespace qpww
