#include <cmath>

#include "doctest.h"
#include "qpww/linearized.hpp"
#include "qpww/random_fields.hpp"
#include "qpww/spectral.hpp"

using namespace qpww;

namespace {

LatticePtr golden(int N) { return validate_lattice(default_frequencies(2), N); }

DiffState shifted(const DiffState& bg, double eps, const LinState& lin) {
  DiffState s = bg;
  s.W.axpy(eps, lin.w);
  s.R.axpy(eps, lin.r);
  return s;
}

double fd_error(const DiffState& bg, const LinState& lin, double eps) {
  const DiffState base = rhs_diff(bg);
  const DiffState moved = rhs_diff(shifted(bg, eps, lin));
  LinState lhs{(moved.W - base.W) * (1.0 / eps), (moved.R - base.R) * (1.0 / eps)};
  LinState rhs = linearized_rhs(bg, lin);
  enforce_holomorphic(rhs);
  return pair_norm(LinState{lhs.w - rhs.w, lhs.r - rhs.r}, 0.0);
}

}  // namespace

TEST_CASE("zero background gives the dispersive linear flow") {
  auto lat = golden(6);
  const DiffState bg{QPFunction(lat), QPFunction(lat)};
  const LinState lin = random_lin_state(lat, 2.0, 3);
  const LinState d = linearized_rhs(bg, lin);
  CHECK((d.w + d_alpha(lin.r)).max_abs() <= 1e-15);
  CHECK((d.r - cplx(0.0, 1.0) * lin.w).max_abs() <= 1e-15);
}

TEST_CASE("E0 of a single mode") {
  auto lat = golden(6);
  const std::vector<int> j{-1, -1};
  const double mu = lat->xi(lat->flat(j));
  const LinState lin{QPFunction::mode(lat, j, cplx(0.2, 0.1)), QPFunction::mode(lat, j, cplx(-0.3, 0.4))};
  CHECK(energy_E0(lin) == doctest::Approx(0.05 + std::abs(mu) * 0.25).epsilon(1e-14));
}

TEST_CASE("E_lin at zero background adds the L2 mass of r") {
  auto lat = golden(6);
  const DiffState bg{QPFunction(lat), QPFunction(lat)};
  const LinState lin = random_lin_state(lat, 2.0, 5);
  const double mass = l2_norm(lin.r) * l2_norm(lin.r);
  CHECK(energy_Elin(bg, lin) == doctest::Approx(energy_E0(lin) + mass).epsilon(1e-13));
}

TEST_CASE("E0 is conserved to first order by the zero-background flow") {
  auto lat = golden(6);
  const DiffState bg{QPFunction(lat), QPFunction(lat)};
  const LinState lin = random_lin_state(lat, 2.0, 6);
  const LinState d = linearized_rhs(bg, lin);
  double rate = 0.0;
  for (std::size_t f = 0; f < lat->size(); ++f)
    rate += 2.0 * (std::conj(lin.w[f]) * d.w[f]).real() - 2.0 * lat->xi(f) * (std::conj(lin.r[f]) * d.r[f]).real();
  CHECK(std::abs(rate) <= 1e-14);
}

TEST_CASE("delta a is the polarization of the quadratic a") {
  auto lat = golden(6);
  const DiffState bg = random_diff_state(lat, 3.0, 2.0, 0.1, 12);
  const LinState lin = random_lin_state(lat, 2.0, 13);
  const double h = 0.25;
  const QPFunction plus = compute_a(bg.R + h * lin.r);
  const QPFunction minus = compute_a(bg.R - h * lin.r);
  const DeltaFields df = delta_fields(bg, lin);
  CHECK(((plus - minus) * (0.5 / h) - df.da).max_abs() <= 1e-14);
  CHECK(df.db.is_real(1e-14));
  CHECK(df.dM.is_real(1e-14));
}

TEST_CASE("linearization matches the finite-difference derivative") {
  auto lat = golden(6);
  const DiffState bg = random_diff_state(lat, 3.0, 2.0, 0.2, 14);
  const LinState lin = random_lin_state(lat, 2.0, 15);
  const double e3 = fd_error(bg, lin, 1e-3);
  const double e4 = fd_error(bg, lin, 1e-4);
  CHECK(e3 <= 1e-2);
  CHECK(e3 / e4 == doctest::Approx(10.0).epsilon(0.05));
}

TEST_CASE("reduced mode without sources is the projected principal part") {
  auto lat = golden(6);
  const DiffState bg = random_diff_state(lat, 3.0, 2.0, 0.1, 16);
  const LinState lin = random_lin_state(lat, 2.0, 17);
  LinearizedOptions reduced;
  reduced.mode = LinearizedMode::reduced;
  const LinState red = linearized_rhs(bg, lin, reduced);
  CHECK(holomorphic_leakage(red) <= 1e-15);
  reduced.sources = source_terms(bg, lin);
  LinState with = linearized_rhs(bg, lin, reduced);
  LinState full = linearized_rhs(bg, lin);
  enforce_holomorphic(full);
  CHECK(pair_norm(LinState{with.w - full.w, with.r - full.r}, 0.0) <= 1e-13);
}

TEST_CASE("energy weight is close to one for small backgrounds") {
  auto lat = golden(6);
  const DiffState bg = random_diff_state(lat, 3.0, 2.0, 1e-4, 18);
  const QPFunction c = elin_weight(bg);
  CHECK(std::abs(c.mean() - 1.0) <= 1e-3);
}

TEST_CASE("difference experiment on identical states") {
  auto lat = golden(4);
  const DiffState bg = random_diff_state(lat, 3.0, 2.0, 0.05, 19);
  const DifferenceReport r = difference_experiment(bg, bg, 0.05, 1e-2);
  REQUIRE_FALSE(r.samples.empty());
  for (const auto& s : r.samples) CHECK(s.distance == 0.0);
}

TEST_CASE("difference experiment stays under its Gronwall envelope") {
  auto lat = golden(4);
  const DiffState bg1 = random_diff_state(lat, 3.0, 2.0, 0.1, 20);
  DiffState bg2 = bg1;
  const LinState pert = random_lin_state(lat, 3.0, 21);
  bg2.W.axpy(1e-6, pert.w);
  bg2.R.axpy(1e-6, pert.r);
  const DifferenceReport r = difference_experiment(bg1, bg2, 0.2, 5e-3);
  CHECK_FALSE(r.degenerate);
  CHECK(std::isfinite(r.gronwall_constant));
  const double d0 = r.samples.front().distance;
  for (const auto& s : r.samples)
    CHECK(s.distance <= d0 * std::exp(r.gronwall_constant * s.B_integral) * (1.0 + 1e-12));
}
