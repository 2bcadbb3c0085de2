#include "qpww/experiments.hpp"

#include <cmath>
#include <limits>

#include "parallel.hpp"
#include "qpww/errors.hpp"
#include "qpww/littlewood_paley.hpp"
#include "qpww/random_fields.hpp"
#include "qpww/spectral.hpp"
#include "qpww/timestepper.hpp"

namespace qpww {
namespace {

constexpr cplx I{0.0, 1.0};

using Trajectory = std::vector<DiffState>;

// Frozen coefficients of one iterate at one time.
struct Frozen {
  Grid b;          // b^m
  Grid ratio;      // (1+W^m) / (1+Wbar^m)
  Grid one_plus_a; // 1 + a^m
  QPFunction c;    // (1 - Y^m)^2
  QPFunction FW;   // P#[(1+W^m) M^m]
  QPFunction FR;   // P#[i(1+a^m)(Y^m - T_c W^m) - i a^m]
};

Frozen freeze(const DiffState& s, double eps_chord) {
  Frozen z;
  const QPFunction Y = compute_Y(s.W, eps_chord);
  const QPFunction a = compute_a(s.R);
  const QPFunction M = compute_M(s.R, Y);
  Grid one_plus = to_grid(s.W) + cplx(1.0);
  z.b = to_grid(compute_b(s.R, Y));
  z.ratio = one_plus;
  for (std::size_t n = 0; n < z.ratio.size(); ++n) z.ratio[n] = one_plus[n] / std::conj(one_plus[n]);
  z.one_plus_a = to_grid(a) + cplx(1.0);
  Grid omy = 1.0 - to_grid(Y);
  z.c = to_coeffs(omy * omy);
  z.FW = project(to_coeffs(one_plus * to_grid(M)), Projector::Psharp);
  const QPFunction tw = paraproduct(z.c, s.W).low_high;
  z.FR = project(to_coeffs(I * z.one_plus_a * to_grid(Y - tw)) - I * a, Projector::Psharp);
  return z;
}

Frozen combine(const std::vector<const Frozen*>& f, const std::vector<double>& w) {
  Frozen out = *f[0];
  out.b *= w[0];
  out.ratio *= w[0];
  out.one_plus_a *= w[0];
  out.c *= w[0];
  out.FW *= w[0];
  out.FR *= w[0];
  for (std::size_t i = 1; i < f.size(); ++i) {
    out.b += f[i]->b * w[i];
    out.ratio += f[i]->ratio * w[i];
    out.one_plus_a += f[i]->one_plus_a * w[i];
    out.c.axpy(w[i], f[i]->c);
    out.FW.axpy(w[i], f[i]->FW);
    out.FR.axpy(w[i], f[i]->FR);
  }
  return out;
}

// Lagrange interpolation of the frozen coefficients at fractional node x
// through (up to) four neighbouring nodes.
Frozen interpolate(const std::vector<Frozen>& nodes, double x) {
  const int last = static_cast<int>(nodes.size()) - 1;
  const int width = std::min(3, last);
  const double nearest = std::round(x);
  if (std::abs(x - nearest) < 1e-12) return nodes[static_cast<int>(nearest)];
  int start = static_cast<int>(std::floor(x)) - 1;
  start = std::clamp(start, 0, last - width);
  std::vector<const Frozen*> pts;
  std::vector<double> w;
  for (int i = start; i <= start + width; ++i) {
    double l = 1.0;
    for (int m = start; m <= start + width; ++m)
      if (m != i) l *= (x - m) / static_cast<double>(i - m);
    pts.push_back(&nodes[i]);
    w.push_back(l);
  }
  return combine(pts, w);
}

DiffState iterate_rhs(const Frozen& z, const DiffState& u) {
  const Grid Wa = to_grid(d_alpha(u.W)), Ra = to_grid(d_alpha(u.R));
  const QPFunction tw = paraproduct(z.c, u.W).low_high;
  const Grid twg = to_grid(tw);
  Grid gw = z.b * Wa + z.ratio * Ra;
  Grid gr = z.b * Ra - I * z.one_plus_a * twg;
  DiffState out{z.FW - project(to_coeffs(gw), Projector::Psharp), z.FR - project(to_coeffs(gr), Projector::Psharp)};
  return out;
}

Trajectory solve_iterate(const DiffState& initial, const Trajectory& prev, const IterationOptions& opts) {
  std::vector<Frozen> nodes;
  nodes.reserve(prev.size());
  for (const auto& s : prev) nodes.push_back(freeze(s, opts.eps_chord));
  Trajectory out{initial};
  out.reserve(prev.size());
  DiffState u = initial;
  for (std::size_t n = 0; n + 1 < prev.size(); ++n) {
    auto rhs = [&](double t, const DiffState& v) { return iterate_rhs(interpolate(nodes, t / opts.dt), v); };
    u = rk4_step(rhs, n * opts.dt, u, opts.dt);
    enforce_holomorphic(u);
    if (!all_finite(u)) throw NonFinite("iteration produced non-finite coefficients");
    out.push_back(u);
  }
  return out;
}

Trajectory solve_direct(const DiffState& initial, long steps, double dt, double eps_chord) {
  auto rhs = [eps_chord](double, const DiffState& v) { return rhs_diff(v, eps_chord); };
  Trajectory out{initial};
  DiffState u = initial;
  for (long n = 0; n < steps; ++n) {
    u = rk4_step(rhs, n * dt, u, dt);
    enforce_holomorphic(u);
    out.push_back(u);
  }
  return out;
}

double sup_distance(const Trajectory& a, const Trajectory& b, std::size_t stride_b = 1) {
  double d = 0.0;
  for (std::size_t n = 0; n < a.size(); ++n) d = std::max(d, pair_norm(a[n] - b[n * stride_b], 0.0));
  return d;
}

DiffState resample(const DiffState& s, const LatticePtr& lat) { return {resample(s.W, lat), resample(s.R, lat)}; }

}  // namespace

IterationReport iteration_experiment(const DiffState& initial, const IterationOptions& opts) {
  if (opts.m_max < 1) throw ValidationError("iteration: m_max must be >= 1");
  if (!(opts.dt > 0.0) || !(opts.T > 0.0)) throw ValidationError("iteration: need T > 0 and dt > 0");
  const long steps = std::lround(opts.T / opts.dt);
  if (steps < 1) throw ValidationError("iteration: T must cover at least one step");

  IterationReport report;
  Trajectory prev(steps + 1, zero_like(initial));
  for (int m = 0; m < opts.m_max; ++m) {
    Trajectory next = solve_iterate(initial, prev, opts);
    report.delta.push_back(sup_distance(next, prev));
    report.contraction.push_back(m == 0 ? std::numeric_limits<double>::quiet_NaN()
                                        : report.delta[m] / report.delta[m - 1]);
    prev = std::move(next);
  }
  report.non_contraction = opts.m_max > 1;
  for (std::size_t m = 1; m < report.contraction.size(); ++m)
    if (report.contraction[m] < 1.0) report.non_contraction = false;

  const Trajectory direct = solve_direct(initial, steps, opts.dt, opts.eps_chord);
  report.distance_to_direct = sup_distance(prev, direct);

  const Trajectory half = solve_direct(initial, 2 * steps, 0.5 * opts.dt, opts.eps_chord);
  report.dt_gap = sup_distance(direct, half, 2);

  const Lattice& lat = initial.W.lattice();
  const LatticePtr fine = validate_lattice(lat.k(), 2 * lat.radius(), lat.tolerance());
  const Trajectory refined = solve_direct(resample(initial, fine), steps, opts.dt, opts.eps_chord);
  for (std::size_t n = 0; n < direct.size(); ++n)
    report.resolution_gap =
        std::max(report.resolution_gap, pair_norm(direct[n] - resample(refined[n], initial.W.lattice_ptr()), 0.0));

  double scale = 0.0;
  for (const auto& s : direct) scale = std::max(scale, pair_norm(s, 0.0));
  report.roundoff_floor = std::numeric_limits<double>::epsilon() * static_cast<double>(steps) * scale;
  report.truncation_tolerance = report.dt_gap + report.resolution_gap + report.roundoff_floor;
  return report;
}

std::vector<double> band_profile(const DiffState& state, double s, int bands) {
  std::vector<double> out;
  for (int l = 0; l < bands; ++l) {
    const DiffState band{lp_project(state.W, l), lp_project(state.R, l)};
    out.push_back(pair_norm(band, s));
  }
  return out;
}

RefinementReport refinement_experiment(const RefinementOptions& opts) {
  if (opts.N_list.size() < 2) throw ValidationError("refinement: need at least two resolutions");
  for (std::size_t i = 1; i < opts.N_list.size(); ++i)
    if (opts.N_list[i] <= opts.N_list[i - 1]) throw ValidationError("refinement: N_list must increase");
  const std::vector<double> k = opts.k.empty() ? default_frequencies(opts.dim) : opts.k;
  std::vector<LatticePtr> lats;
  for (int N : opts.N_list) lats.push_back(validate_lattice(k, N));
  const LatticePtr finest = lats.back();
  const double decay = opts.decay > 0.0 ? opts.decay : opts.sobolev + 1.0;
  const DiffState data = random_diff_state(finest, decay, opts.sobolev, opts.target_A, opts.seed);

  RunConfig cfg;
  cfg.dt = opts.dt;
  cfg.t_max = opts.T;
  cfg.eps_chord = opts.eps_chord;
  cfg.sobolev = opts.sobolev;
  cfg.energy_orders.clear();
  cfg.monitor_stride = std::max(1, total_steps(cfg));

  std::vector<DiffState> finals(lats.size());
  detail::parallel_for(lats.size(), opts.threads, [&](std::size_t i) {
    const auto run = integrate(resample(data, lats[i]), cfg);
    if (run.status == RunStatus::surface_degenerate) throw SurfaceDegenerate(run.degenerate_min, opts.eps_chord);
    if (run.status == RunStatus::non_finite)
      throw NonFinite("refinement run N=" + std::to_string(opts.N_list[i]) + ": " + run.message);
    finals[i] = run.state;
  });

  RefinementReport report;
  report.N = opts.N_list;
  for (std::size_t i = 0; i + 1 < lats.size(); ++i) {
    const DiffState diff = resample(finals[i], lats[i + 1]) - finals[i + 1];
    report.dist_H0.push_back(pair_norm(diff, 0.0));
    report.dist_Hs.push_back(pair_norm(diff, opts.sobolev));
  }
  report.monotone = true;
  for (std::size_t i = 1; i < report.dist_H0.size(); ++i)
    if (!(report.dist_H0[i] < report.dist_H0[i - 1])) report.monotone = false;

  const int bands = lp_band_count(*finest);
  const std::vector<double> initial = band_profile(data, opts.sobolev, bands);
  report.envelope.assign(bands, 0.0);
  for (int l = 0; l < bands; ++l)
    for (int m = 0; m < bands; ++m)
      report.envelope[l] = std::max(report.envelope[l], initial[m] * std::pow(2.0, -0.5 * std::abs(l - m)));
  for (std::size_t i = 0; i < lats.size(); ++i) {
    report.band_norms.push_back(band_profile(resample(finals[i], finest), opts.sobolev, bands));
    for (int l = 0; l < bands; ++l)
      if (report.envelope[l] > 0.0)
        report.envelope_ratio = std::max(report.envelope_ratio, report.band_norms.back()[l] / report.envelope[l]);
  }
  return report;
}

}  // namespace qpww
