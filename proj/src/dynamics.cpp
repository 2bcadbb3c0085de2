#include "qpww/dynamics.hpp"

#include <cmath>

#include "qpww/errors.hpp"
#include "qpww/linearized.hpp"
#include "qpww/spectral.hpp"

namespace qpww {
namespace {

constexpr cplx I{0.0, 1.0};

// Samples 1 + w on the padded grid and checks the chord condition.
Grid one_plus_grid(const QPFunction& w, double eps_chord) {
  Grid g = to_grid(w) + cplx(1.0);
  const double m = g.min_abs();
  if (!(m > eps_chord)) throw SurfaceDegenerate(m, eps_chord);
  return g;
}

Grid reciprocal(Grid g) {
  for (auto& v : g.values()) v = 1.0 / v;
  return g;
}

QPFunction two_re_P(const Grid& g) {
  QPFunction p = to_coeffs(g);
  project_inplace(p, Projector::P);
  return 2.0 * real_part(p);
}

QPFunction two_im_P(const Grid& g) {
  QPFunction p = to_coeffs(g);
  project_inplace(p, Projector::P);
  return 2.0 * imag_part(p);
}

double mass_where(const QPFunction& u, auto&& pred) {
  double s = 0.0;
  const Lattice& lat = u.lattice();
  for (std::size_t f = 0; f < lat.size(); ++f)
    if (f != lat.zero_index() && pred(lat.xi(f))) s += std::norm(u[f]);
  return s;
}

}  // namespace

QPFunction compute_Y(const QPFunction& W, double eps_chord) {
  Grid one_plus = one_plus_grid(W, eps_chord);
  Grid w = to_grid(W);
  for (std::size_t n = 0; n < w.size(); ++n) w[n] /= one_plus[n];
  return to_coeffs(w);
}

QPFunction compute_b(const QPFunction& R, const QPFunction& Y) {
  return two_re_P(to_grid(R) * (1.0 - to_grid(Y).conj()));
}

QPFunction compute_a(const QPFunction& R) { return two_im_P(to_grid(R) * to_grid(d_alpha(R)).conj()); }

Grid compute_a_grid(const QPFunction& R) {
  Grid p = project_P_full(to_grid(R) * to_grid(d_alpha(R)).conj());
  for (auto& v : p.values()) v = 2.0 * v.imag();
  return p;
}

QPFunction compute_M(const QPFunction& R, const QPFunction& Y) {
  // Pbar[X] + P[Xbar] = 2 Re P[Xbar] with Xbar = R Ybar_a - Rbar_a Y.
  Grid r = to_grid(R), y = to_grid(Y);
  Grid ra = to_grid(d_alpha(R)), ya = to_grid(d_alpha(Y));
  return two_re_P(r * ya.conj() - ra.conj() * y);
}

QPFunction compute_M_rational(const DiffState& s, double eps_chord) {
  Grid inv = reciprocal(one_plus_grid(s.W, eps_chord));
  Grid ra = to_grid(d_alpha(s.R));
  Grid sum = ra * inv.conj() + ra.conj() * inv;
  const QPFunction b = compute_b(s.R, compute_Y(s.W, eps_chord));
  return to_coeffs(sum) - d_alpha(b);
}

namespace {

struct SurfaceGrids {
  Grid qa;     // Q_alpha
  Grid inv_j;  // 1 / J
};

SurfaceGrids surface_grids(const SurfaceState& s, double eps_chord) {
  Grid one_plus = one_plus_grid(d_alpha(s.W), eps_chord);
  Grid inv_j(one_plus.lattice_ptr(), one_plus.resolution());
  for (std::size_t n = 0; n < one_plus.size(); ++n) inv_j[n] = 1.0 / std::norm(one_plus[n]);
  return {to_grid(d_alpha(s.Q)), std::move(inv_j)};
}

}  // namespace

QPFunction compute_F(const SurfaceState& s, double eps_chord) {
  auto [qa, inv_j] = surface_grids(s, eps_chord);
  QPFunction F = to_coeffs((qa - qa.conj()) * inv_j);
  project_inplace(F, Projector::P);
  return F;
}

QPFunction compute_b_surface(const SurfaceState& s, double eps_chord) {
  auto [qa, inv_j] = surface_grids(s, eps_chord);
  return two_re_P(qa * inv_j);
}

AuxFields aux_fields(const DiffState& s, double eps_chord) {
  AuxFields aux;
  aux.Y = compute_Y(s.W, eps_chord);
  aux.b = compute_b(s.R, aux.Y);
  aux.a = compute_a(s.R);
  aux.M = compute_M(s.R, aux.Y);
  Grid r = to_grid(s.R), y = to_grid(aux.Y);
  aux.F = to_coeffs(r * (1.0 - y.conj()) - r.conj() * (1.0 - y));
  project_inplace(aux.F, Projector::P);
  Grid one_plus = to_grid(s.W) + cplx(1.0);
  aux.J = real_part(to_coeffs(one_plus * one_plus.conj()));
  return aux;
}

DiffState rhs_diff(const DiffState& s, double eps_chord) {
  // Same coefficients as compute_Y/b/a/M, with each grid sampled once.
  Grid one_plus = one_plus_grid(s.W, eps_chord);
  Grid w = to_grid(s.W), y_grid = w;
  for (std::size_t n = 0; n < w.size(); ++n) y_grid[n] /= one_plus[n];
  Grid wa = to_grid(d_alpha(s.W));
  Grid r = to_grid(s.R), ra = to_grid(d_alpha(s.R));
  const QPFunction Y = to_coeffs(y_grid);
  Grid y = to_grid(Y), ya = to_grid(d_alpha(Y));
  Grid bg = to_grid(two_re_P(r * (1.0 - y.conj())));
  Grid ag = to_grid(two_im_P(r * ra.conj()));
  Grid mg = to_grid(two_re_P(r * ya.conj() - ra.conj() * y));

  Grid wt(w.lattice_ptr(), w.resolution()), rt(w.lattice_ptr(), w.resolution());
  for (std::size_t n = 0; n < w.size(); ++n) {
    const cplx op = one_plus[n];
    wt[n] = -bg[n] * wa[n] - op * ra[n] / std::conj(op) + op * mg[n];
    rt[n] = -bg[n] * ra[n] + I * (w[n] - ag[n]) / op;
  }
  DiffState out{to_coeffs(wt), to_coeffs(rt)};
  enforce_holomorphic(out);
  return out;
}

SurfaceState rhs_undiff(const SurfaceState& s, double eps_chord) {
  auto [qa, inv_j] = surface_grids(s, eps_chord);
  QPFunction F = to_coeffs((qa - qa.conj()) * inv_j);
  project_inplace(F, Projector::P);
  QPFunction kinetic = to_coeffs(qa * qa.conj() * inv_j);
  project_inplace(kinetic, Projector::P);

  Grid fg = to_grid(F);
  Grid one_plus = to_grid(d_alpha(s.W)) + cplx(1.0);
  SurfaceState out;
  out.W = -to_coeffs(fg * one_plus);
  out.Q = -to_coeffs(fg * qa) + I * s.W - kinetic;
  enforce_holomorphic(out);
  return out;
}

DiffState differentiate_state(const SurfaceState& s, double eps_chord) {
  DiffState d;
  d.W = d_alpha(s.W);
  Grid inv = reciprocal(one_plus_grid(d.W, eps_chord));
  d.R = to_coeffs(to_grid(d_alpha(s.Q)) * inv);
  return d;
}

namespace {

QPFunction antiderivative_alpha(const QPFunction& u) {
  const Lattice& lat = u.lattice();
  QPFunction out(u.lattice_ptr());
  for (std::size_t f = 0; f < lat.size(); ++f)
    if (f != lat.zero_index()) out[f] = u[f] / cplx(0.0, lat.xi(f));
  return out;
}

}  // namespace

SurfaceState undifferentiate_state(const DiffState& s) {
  QPFunction one_plus = s.W;
  one_plus[one_plus.lattice().zero_index()] += 1.0;
  return {antiderivative_alpha(s.W), antiderivative_alpha(multiply(s.R, one_plus))};
}

double reconstruct_check(const SurfaceState& u, const DiffState& v) {
  const QPFunction wa = d_alpha(u.W);
  const QPFunction qa = d_alpha(u.Q);
  QPFunction one_plus = wa;
  one_plus[one_plus.lattice().zero_index()] += 1.0;
  return l2_norm(v.W - wa) + l2_norm(multiply(v.R, one_plus) - qa);
}

ControlParams control_params(const DiffState& s, double sob) {
  return {pair_norm(s, sob - 0.5), pair_norm(s, sob)};
}

std::vector<std::vector<int>> multi_indices(int dim, int order) {
  std::vector<std::vector<int>> out;
  std::vector<int> kappa(dim, 0);
  auto rec = [&](auto&& self, int axis, int remaining) -> void {
    if (axis == dim - 1) {
      kappa[axis] = remaining;
      out.push_back(kappa);
      return;
    }
    for (int c = remaining; c >= 0; --c) {
      kappa[axis] = c;
      self(self, axis + 1, remaining - c);
    }
  };
  rec(rec, 0, order);
  return out;
}

double energy_Ek(const DiffState& s, int k, double eps_chord) {
  const QPFunction weight = elin_weight(s, eps_chord);
  double total = 0.0;
  for (const auto& kappa : multi_indices(s.W.lattice().dim(), k)) {
    LinState d{s.W, s.R};
    for (int axis = 0; axis < static_cast<int>(kappa.size()); ++axis)
      for (int c = 0; c < kappa[axis]; ++c) {
        d.w = partial(d.w, axis);
        d.r = partial(d.r, axis);
      }
    total += energy_Elin(weight, d);
  }
  return total;
}

void enforce_holomorphic(DiffState& s) {
  project_inplace(s.W, Projector::Psharp);
  project_inplace(s.R, Projector::Psharp);
}

void enforce_holomorphic(LinState& s) {
  project_inplace(s.w, Projector::Psharp);
  project_inplace(s.r, Projector::Psharp);
}

void enforce_holomorphic(SurfaceState& s) {
  project_inplace(s.W, Projector::Pi);
  project_inplace(s.Q, Projector::Pr);
}

double holomorphic_leakage(const DiffState& s) {
  auto pos = [](double xi) { return xi > 0.0; };
  return std::sqrt(mass_where(s.W, pos) + mass_where(s.R, pos) + std::norm(s.W.mean()) + std::norm(s.R.mean()));
}

double holomorphic_leakage(const LinState& s) {
  auto pos = [](double xi) { return xi > 0.0; };
  return std::sqrt(mass_where(s.w, pos) + mass_where(s.r, pos) + std::norm(s.w.mean()) + std::norm(s.r.mean()));
}

double holomorphic_leakage(const SurfaceState& s) {
  auto pos = [](double xi) { return xi > 0.0; };
  const double re_w = s.W.mean().real(), im_q = s.Q.mean().imag();
  return std::sqrt(mass_where(s.W, pos) + mass_where(s.Q, pos) + re_w * re_w + im_q * im_q);
}

}  // namespace qpww
