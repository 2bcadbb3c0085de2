#include "qpww/timestepper.hpp"

#include <cmath>

#include "qpww/errors.hpp"
#include "qpww/linearized.hpp"
#include "qpww/spectral.hpp"

namespace qpww {

void enforce_holomorphic(CoupledState& state) {
  enforce_holomorphic(state.bg);
  enforce_holomorphic(state.lin);
}

double holomorphic_leakage(const CoupledState& state) {
  return std::hypot(holomorphic_leakage(state.bg), holomorphic_leakage(state.lin));
}

void validate_run_config(const RunConfig& cfg, const Lattice& lattice) {
  if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) throw ValidationError("dynamics.dt must be positive");
  if (!(cfg.t_max >= 0.0) || !std::isfinite(cfg.t_max)) throw ValidationError("dynamics.t_max must be nonnegative");
  if (cfg.integrator != "rk4") throw ValidationError("dynamics.integrator: unknown integrator '" + cfg.integrator + "'");
  if (cfg.monitor_stride < 1) throw ValidationError("dynamics.monitor_stride must be >= 1");
  if (cfg.projector_every < 1) throw ValidationError("dynamics.projector_every must be >= 1");
  if (!(cfg.eps_chord > 0.0)) throw ValidationError("dynamics.eps_chord must be positive");
  for (int k : cfg.energy_orders)
    if (k < 0) throw ValidationError("dynamics.energy_orders must be nonnegative");
  const double limit = cfg.c_stab / std::sqrt(std::max(lattice.xi_max(), 1e-300));
  if (cfg.dt > limit)
    throw ValidationError("dynamics.dt = " + std::to_string(cfg.dt) + " exceeds the stability limit c_stab/sqrt(max|xi|) = " +
                          std::to_string(limit));
}

int total_steps(const RunConfig& cfg) { return static_cast<int>(std::llround(cfg.t_max / cfg.dt)); }

double TimeSeries::value(std::size_t row, const std::string& name) const {
  for (std::size_t c = 0; c < columns.size(); ++c)
    if (columns[c] == name) return rows.at(row).at(c);
  throw Error("time series has no column '" + name + "'");
}

std::vector<double> TimeSeries::column(const std::string& name) const {
  std::vector<double> out;
  out.reserve(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) out.push_back(value(r, name));
  return out;
}

CoupledState rhs_coupled(const CoupledState& state, double eps_chord) {
  LinearizedOptions opts;
  opts.eps_chord = eps_chord;
  CoupledState out{rhs_diff(state.bg, eps_chord), linearized_rhs(state.bg, state.lin, opts)};
  enforce_holomorphic(out.lin);
  return out;
}

namespace {

std::vector<std::string> diff_columns(const RunConfig& cfg) {
  std::vector<std::string> cols{"t", "step", "norm_W_Hs", "norm_R_Hs_half", "A", "B"};
  for (int k : cfg.energy_orders) cols.push_back("E" + std::to_string(k));
  for (const char* c : {"min_a", "min_abs_one_plus_W", "leakage"}) cols.emplace_back(c);
  return cols;
}

std::vector<double> diff_monitor(const DiffState& s, const RunConfig& cfg, double t, long step, double leakage) {
  const ControlParams cp = control_params(s, cfg.sobolev);
  std::vector<double> row{t, static_cast<double>(step), norm(s.W, cfg.sobolev, 0.0), norm(s.R, cfg.sobolev, 0.5), cp.A,
                          cp.B};
  for (int k : cfg.energy_orders) row.push_back(energy_Ek(s, k, cfg.eps_chord));
  row.push_back(compute_a_grid(s.R).min_real());
  row.push_back((to_grid(s.W) + cplx(1.0)).min_abs());
  row.push_back(leakage);
  return row;
}

auto make_rhs(const DiffState*, const RunConfig& cfg) {
  return [eps = cfg.eps_chord](double, const DiffState& u) { return rhs_diff(u, eps); };
}
auto make_rhs(const SurfaceState*, const RunConfig& cfg) {
  return [eps = cfg.eps_chord](double, const SurfaceState& u) { return rhs_undiff(u, eps); };
}
auto make_rhs(const CoupledState*, const RunConfig& cfg) {
  return [eps = cfg.eps_chord](double, const CoupledState& u) { return rhs_coupled(u, eps); };
}

std::vector<std::string> columns_for(const DiffState*, const RunConfig& cfg) { return diff_columns(cfg); }
std::vector<std::string> columns_for(const SurfaceState*, const RunConfig& cfg) {
  auto cols = diff_columns(cfg);
  cols.emplace_back("reconstruct_residual");
  return cols;
}
std::vector<std::string> columns_for(const CoupledState*, const RunConfig& cfg) {
  auto cols = diff_columns(cfg);
  for (const char* c : {"lin_norm_H0", "E0", "E_lin"}) cols.emplace_back(c);
  return cols;
}

std::vector<double> monitor(const DiffState& s, const RunConfig& cfg, double t, long step, double leak) {
  return diff_monitor(s, cfg, t, step, leak);
}
std::vector<double> monitor(const SurfaceState& s, const RunConfig& cfg, double t, long step, double leak) {
  const DiffState d = differentiate_state(s, cfg.eps_chord);
  auto row = diff_monitor(d, cfg, t, step, leak);
  row.push_back(reconstruct_check(s, d));
  return row;
}
std::vector<double> monitor(const CoupledState& s, const RunConfig& cfg, double t, long step, double leak) {
  auto row = diff_monitor(s.bg, cfg, t, step, leak);
  row.push_back(pair_norm(s.lin, 0.0));
  row.push_back(energy_E0(s.lin));
  row.push_back(energy_Elin(s.bg, s.lin, cfg.eps_chord));
  return row;
}

const LatticePtr& lattice_of(const DiffState& s) { return s.W.lattice_ptr(); }
const LatticePtr& lattice_of(const SurfaceState& s) { return s.W.lattice_ptr(); }
const LatticePtr& lattice_of(const CoupledState& s) { return s.bg.W.lattice_ptr(); }

template <class S>
RunResult<S> integrate_impl(const S& initial, const RunConfig& cfg, const CheckpointFn<S>& checkpoint, long start_step) {
  validate_run_config(cfg, *lattice_of(initial));
  const auto rhs = make_rhs(static_cast<const S*>(nullptr), cfg);
  const long n_total = total_steps(cfg);

  RunResult<S> result;
  result.series.columns = columns_for(static_cast<const S*>(nullptr), cfg);
  result.state = initial;
  result.steps = start_step;
  result.t = start_step * cfg.dt;

  std::vector<bool> fired(cfg.checkpoint_times.size(), false);
  auto fire_checkpoints = [&](long step, const S& s) {
    const double t = step * cfg.dt;
    for (std::size_t c = 0; c < fired.size(); ++c) {
      if (fired[c] || t + 0.5 * cfg.dt <= cfg.checkpoint_times[c]) continue;
      fired[c] = true;
      if (checkpoint) checkpoint(t, step, s);
    }
  };
  // Checkpoint times already behind the start step belong to an earlier run.
  for (std::size_t c = 0; c < fired.size(); ++c)
    fired[c] = cfg.checkpoint_times[c] < result.t - 0.5 * cfg.dt;

  double leak = holomorphic_leakage(initial);
  try {
    result.series.rows.push_back(monitor(initial, cfg, result.t, start_step, leak));
    fire_checkpoints(start_step, initial);
    S state = initial;
    for (long n = start_step; n < n_total; ++n) {
      StepInfo info;
      S next = step_rk4(state, rhs, n * cfg.dt, cfg.dt, cfg, n, &info);
      if (!all_finite(next)) {
        result.status = RunStatus::non_finite;
        result.message = "non-finite coefficients after step " + std::to_string(n + 1) + " (t = " +
                         std::to_string((n + 1) * cfg.dt) + ")";
        break;
      }
      state = std::move(next);
      leak = info.leakage;
      result.state = state;
      result.steps = n + 1;
      result.t = (n + 1) * cfg.dt;
      if ((n + 1 - start_step) % cfg.monitor_stride == 0 || n + 1 == n_total) {
        result.series.rows.push_back(monitor(state, cfg, result.t, n + 1, leak));
      }
      fire_checkpoints(n + 1, state);
    }
  } catch (const SurfaceDegenerate& e) {
    result.status = RunStatus::surface_degenerate;
    result.degenerate_min = e.min_value();
    result.message = std::string(e.what()) + " at t = " + std::to_string(result.t + cfg.dt);
  }
  return result;
}

}  // namespace

RunResult<DiffState> integrate(const DiffState& initial, const RunConfig& cfg, const CheckpointFn<DiffState>& checkpoint,
                               long start_step) {
  return integrate_impl(initial, cfg, checkpoint, start_step);
}

RunResult<SurfaceState> integrate(const SurfaceState& initial, const RunConfig& cfg,
                                  const CheckpointFn<SurfaceState>& checkpoint, long start_step) {
  return integrate_impl(initial, cfg, checkpoint, start_step);
}

RunResult<CoupledState> integrate(const CoupledState& initial, const RunConfig& cfg,
                                  const CheckpointFn<CoupledState>& checkpoint, long start_step) {
  return integrate_impl(initial, cfg, checkpoint, start_step);
}

DispersionResult dispersion_probe(LatticePtr lattice, std::span<const int> j, double amplitude, const RunConfig& cfg) {
  const std::size_t f = lattice->flat(j);
  if (f >= lattice->size()) throw ValidationError("dispersion probe mode " + format_index({j.begin(), j.end()}) + " outside box");
  DispersionResult out;
  out.xi = lattice->xi(f);
  if (!(out.xi < 0.0)) throw ValidationError("dispersion probe needs xi(j) < 0");
  out.expected = std::sqrt(-out.xi);
  if (amplitude == 0.0) return out;

  validate_run_config(cfg, *lattice);
  DiffState s{QPFunction(lattice), QPFunction::mode(lattice, j, amplitude)};
  auto rhs = [eps = cfg.eps_chord](double, const DiffState& u) { return rhs_diff(u, eps); };
  const long max_steps = static_cast<long>(std::ceil(2.0 * M_PI / (out.expected * cfg.dt)));
  double prev = 1.0;
  for (long n = 0; n < max_steps; ++n) {
    s = step_rk4(s, rhs, n * cfg.dt, cfg.dt, cfg, n);
    const double cur = s.R[f].real() / amplitude;
    if (prev > 0.0 && cur <= 0.0) {
      // cos has an inflection at its zero, so the linear root is O(dt^3).
      const double t0 = n * cfg.dt + cfg.dt * prev / (prev - cur);
      out.detected = true;
      out.omega = M_PI / (2.0 * t0);
      return out;
    }
    prev = cur;
  }
  return out;
}

}  // namespace qpww
