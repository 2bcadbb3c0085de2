#include <cmath>

#include "doctest.h"
#include "qpww/errors.hpp"
#include "qpww/linearized.hpp"
#include "qpww/random_fields.hpp"
#include "qpww/spectral.hpp"
#include "qpww/timestepper.hpp"

using namespace qpww;

namespace {

LatticePtr golden(int N) { return validate_lattice(default_frequencies(2), N); }

RunConfig quiet(double dt, double t_max) {
  RunConfig cfg;
  cfg.dt = dt;
  cfg.t_max = t_max;
  cfg.energy_orders = {};
  return cfg;
}

// Exact propagator of w' = -r_a, r' = i w on one mode with xi = mu < 0:
// A^2 = mu I, so exp(tA) = cos(wt) I + sin(wt)/w A with w = sqrt(-mu).
std::pair<cplx, cplx> exact_mode(cplx w, cplx r, double mu, double t) {
  const double om = std::sqrt(-mu);
  const double c = std::cos(om * t), s = std::sin(om * t) / om;
  const cplx aw = -cplx(0.0, mu) * r, ar = cplx(0.0, 1.0) * w;
  return {c * w + s * aw, c * r + s * ar};
}

}  // namespace

TEST_CASE("zero state stays zero") {
  auto lat = golden(4);
  const DiffState zero{QPFunction(lat), QPFunction(lat)};
  const RunConfig cfg = quiet(1e-2, 0.1);
  auto rhs = [](double, const DiffState& u) { return rhs_diff(u); };
  const DiffState next = step_rk4(zero, rhs, 0.0, cfg.dt, cfg, 0);
  CHECK(next.W.max_abs() == 0.0);
  const auto result = integrate(zero, cfg);
  CHECK(result.status == RunStatus::completed);
  CHECK(result.steps == 10);
  for (double a : result.series.column("A")) CHECK(a == 0.0);
}

TEST_CASE("RK4 step matches the mode propagator to fifth order") {
  auto lat = golden(4);
  const std::vector<int> j{-1, -1};
  const double mu = lat->xi(lat->flat(j));
  const LinState u{QPFunction::mode(lat, j, cplx(0.3, 0.1)), QPFunction::mode(lat, j, cplx(0.0, -0.2))};
  auto rhs = [](double, const LinState& s) { return LinState{-d_alpha(s.r), cplx(0.0, 1.0) * s.w}; };
  auto err = [&](double dt) {
    const LinState v = rk4_step(rhs, 0.0, u, dt);
    const auto [w, r] = exact_mode(u.w.at(j), u.r.at(j), mu, dt);
    return std::abs(v.w.at(j) - w) + std::abs(v.r.at(j) - r);
  };
  const double e1 = err(0.1), e2 = err(0.05);
  CHECK(e1 <= 1e-5);
  CHECK(e1 / e2 == doctest::Approx(32.0).epsilon(0.1));
}

TEST_CASE("fourth-order self-convergence on the nonlinear flow") {
  auto lat = golden(6);
  const DiffState u0 = random_diff_state(lat, 3.0, 2.0, 0.2, 5);
  auto run = [&](double dt) { return integrate(u0, quiet(dt, 0.2)).state; };
  const DiffState ref = run(0.2 / 128);
  auto dist = [&](const DiffState& s) { return pair_norm(DiffState{s.W - ref.W, s.R - ref.R}, 0.0); };
  const double e1 = dist(run(0.2 / 8)), e2 = dist(run(0.2 / 16));
  CHECK(e1 / e2 >= 12.0);
  CHECK(e1 / e2 <= 20.0);
}

TEST_CASE("stability heuristic and configuration checks") {
  auto lat = golden(16);
  RunConfig cfg = quiet(1.0, 1.0);
  CHECK_THROWS_AS(validate_run_config(cfg, *lat), ValidationError);
  cfg.dt = 1e-3;
  CHECK_NOTHROW(validate_run_config(cfg, *lat));
  cfg.integrator = "etd";
  CHECK_THROWS_AS(validate_run_config(cfg, *lat), ValidationError);
  cfg = quiet(-1e-3, 1.0);
  CHECK_THROWS_AS(validate_run_config(cfg, *lat), ValidationError);
}

TEST_CASE("monitor series is sampled on stride and at the end") {
  auto lat = golden(4);
  const DiffState u0 = random_diff_state(lat, 3.0, 2.0, 0.05, 6);
  RunConfig cfg = quiet(1e-2, 0.105);
  cfg.monitor_stride = 4;
  cfg.energy_orders = {1};
  const auto result = integrate(u0, cfg);
  const auto steps = result.series.column("step");
  CHECK(steps.front() == 0.0);
  CHECK(steps.back() == 11.0);
  for (std::size_t i = 1; i < steps.size(); ++i) CHECK(steps[i] > steps[i - 1]);
  for (const auto& row : result.series.rows)
    for (double v : row) CHECK(std::isfinite(v));
  CHECK(result.series.value(0, "leakage") == 0.0);
  for (double leak : result.series.column("leakage")) CHECK(leak <= 1e-14);
}

TEST_CASE("small single mode returns to its A and B after one linear period") {
  auto lat = golden(8);
  const std::vector<int> j{-1, 0};
  const DiffState u0{QPFunction::mode(lat, j, 1e-5), QPFunction::mode(lat, j, cplx(0.0, 3e-6))};
  const auto result = integrate(u0, quiet(2.0 * M_PI / 6000, 2.0 * M_PI));
  REQUIRE(result.steps == 6000);
  for (const char* col : {"A", "B"}) {
    const auto v = result.series.column(col);
    double lo = v.front(), hi = v.front();
    for (double x : v) lo = std::min(lo, x), hi = std::max(hi, x);
    CHECK(hi - lo > 1e-3 * v.front());
    CHECK(std::abs(v.back() - v.front()) / v.front() <= 1e-6);
  }
}

TEST_CASE("engineered blow-up stops with the last good state") {
  auto lat = validate_lattice({1.0}, 16);
  const DiffState u0{QPFunction::mode(lat, {-1}, 0.5), QPFunction::mode(lat, {-1}, cplx(0.0, 1.0))};
  RunConfig cfg = quiet(1e-3, 2.0);
  cfg.eps_chord = 0.1;
  const auto result = integrate(u0, cfg);
  CHECK(result.status == RunStatus::surface_degenerate);
  CHECK(result.t > 0.3);
  CHECK(result.t < 0.6);
  CHECK(result.degenerate_min <= 0.1);
  CHECK(all_finite(result.state));
  CHECK_FALSE(result.series.rows.empty());
  CHECK(result.series.column("t").back() == doctest::Approx(result.t));
}

TEST_CASE("resuming from a mid-run state reproduces the run bitwise") {
  auto lat = golden(4);
  const DiffState u0 = random_diff_state(lat, 3.0, 2.0, 0.1, 7);
  const RunConfig full = quiet(1e-2, 0.1);
  const RunConfig half = quiet(1e-2, 0.05);
  const auto a = integrate(u0, full);
  const auto b = integrate(u0, half);
  const auto c = integrate(b.state, full, {}, b.steps);
  CHECK(c.steps == a.steps);
  CHECK(c.state.W == a.state.W);
  CHECK(c.state.R == a.state.R);
  CHECK(c.series.rows.back() == a.series.rows.back());
}

TEST_CASE("checkpoint callback fires once per requested time") {
  auto lat = golden(4);
  const DiffState u0 = random_diff_state(lat, 3.0, 2.0, 0.1, 8);
  RunConfig cfg = quiet(1e-2, 0.1);
  cfg.checkpoint_times = {0.03, 0.074};
  std::vector<long> hits;
  integrate(u0, cfg, [&](double, long step, const DiffState&) { hits.push_back(step); });
  CHECK(hits == std::vector<long>{3, 7});
}

TEST_CASE("undifferentiated and coupled flows integrate") {
  auto lat = golden(4);
  const DiffState d = random_diff_state(lat, 3.0, 2.0, 0.05, 9);
  const auto u = integrate(undifferentiate_state(d), quiet(2.5e-3, 0.05));
  CHECK(u.status == RunStatus::completed);
  const auto residual = u.series.column("reconstruct_residual");
  CHECK(residual.front() <= 1e-7);
  CHECK(residual.back() <= 1.1 * residual.front());
  const CoupledState c{d, random_lin_state(lat, 2.0, 10)};
  const auto r = integrate(c, quiet(1e-2, 0.05));
  CHECK(r.status == RunStatus::completed);
  CHECK(std::isfinite(r.series.value(0, "E_lin")));
}

TEST_CASE("dispersion probe") {
  auto lat = golden(16);
  const RunConfig cfg = quiet(1e-3, 1.0);
  for (int m : {1, 4}) {
    const std::vector<int> j{-m, 0};
    const DispersionResult r = dispersion_probe(lat, j, 1e-6, cfg);
    CHECK(r.detected);
    CHECK(std::abs(r.omega - std::sqrt(double(m))) / std::sqrt(double(m)) <= 1e-3);
  }
  const std::vector<int> j{-1, 0};
  const DispersionResult none = dispersion_probe(lat, j, 0.0, cfg);
  CHECK_FALSE(none.detected);
  CHECK(none.omega == 0.0);
  const std::vector<int> up{1, 0};
  CHECK_THROWS_AS(dispersion_probe(lat, up, 1e-6, cfg), ValidationError);
}
