#include "qpww/linearized.hpp"

#include <cmath>

#include "qpww/errors.hpp"
#include "qpww/spectral.hpp"
#include "qpww/timestepper.hpp"

namespace qpww {
namespace {

constexpr cplx I{0.0, 1.0};

// Background quantities shared by the linearized operators. inv = 1/(1+W)
// equals 1 - Y pointwise; evaluating it on the grid keeps the linearization
// the exact derivative of the discrete rhs_diff.
struct Background {
  Grid one_plus;  // 1 + W
  Grid inv;       // 1 / (1 + W)
  QPFunction Y, b, a, M;
};

Background background(const DiffState& bg, double eps_chord) {
  Background out;
  out.one_plus = to_grid(bg.W) + cplx(1.0);
  const double m = out.one_plus.min_abs();
  if (!(m > eps_chord)) throw SurfaceDegenerate(m, eps_chord);
  out.inv = out.one_plus;
  for (auto& v : out.inv.values()) v = 1.0 / v;
  out.Y = compute_Y(bg.W, eps_chord);
  out.b = compute_b(bg.R, out.Y);
  out.a = compute_a(bg.R);
  out.M = compute_M(bg.R, out.Y);
  return out;
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

DeltaFields delta_fields(const DiffState& bg, const Background& ctx, const LinState& lin) {
  // dY = w / (1+W)^2 = (1-Y)^2 w.
  const QPFunction dY = to_coeffs(to_grid(lin.w) * ctx.inv * ctx.inv);
  const Grid R = to_grid(bg.R), Ra = to_grid(d_alpha(bg.R));
  const Grid r = to_grid(lin.r), ra = to_grid(d_alpha(lin.r));
  const Grid Y = to_grid(ctx.Y), Ya = to_grid(d_alpha(ctx.Y));
  const Grid dYg = to_grid(dY), dYa = to_grid(d_alpha(dY));

  DeltaFields d;
  d.db = two_re_P(r * (1.0 - Y.conj()) - R * dYg.conj());
  d.da = two_im_P(Ra.conj() * r + R * ra.conj());
  d.dM = two_re_P(r * Ya.conj() + R * dYa.conj() - ra.conj() * Y - Ra.conj() * dYg);
  return d;
}

SourceTerms source_terms(const DiffState& bg, const Background& ctx, const LinState& lin) {
  const DeltaFields d = delta_fields(bg, ctx, lin);
  const Grid w = to_grid(lin.w);
  const Grid Wa = to_grid(d_alpha(bg.W)), Ra = to_grid(d_alpha(bg.R));
  const Grid M = to_grid(ctx.M), db = to_grid(d.db), da = to_grid(d.da), dM = to_grid(d.dM);
  const Grid& op = ctx.one_plus;
  const Grid& inv = ctx.inv;

  Grid f(op.lattice_ptr(), op.resolution()), g(op.lattice_ptr(), op.resolution());
  for (std::size_t n = 0; n < f.size(); ++n) {
    const cplx ib = std::conj(inv[n]);  // 1 - Ybar
    f[n] = -ib * Ra[n] * w[n] + ib * ib * op[n] * Ra[n] * std::conj(w[n]) + M[n] * w[n] - Wa[n] * db[n] +
           op[n] * dM[n];
    g[n] = -Ra[n] * db[n] - I * inv[n] * da[n];
  }
  return {to_coeffs(f), to_coeffs(g)};
}

}  // namespace

DeltaFields delta_fields(const DiffState& bg, const LinState& lin, double eps_chord) {
  return delta_fields(bg, background(bg, eps_chord), lin);
}

SourceTerms source_terms(const DiffState& bg, const LinState& lin, double eps_chord) {
  return source_terms(bg, background(bg, eps_chord), lin);
}

LinState linearized_rhs(const DiffState& bg, const LinState& lin, const LinearizedOptions& opts) {
  const Background ctx = background(bg, opts.eps_chord);
  const Grid b = to_grid(ctx.b), a = to_grid(ctx.a);
  const Grid w = to_grid(lin.w), wa = to_grid(d_alpha(lin.w)), ra = to_grid(d_alpha(lin.r));
  Grid principal = ctx.one_plus;
  if (opts.principal == PrincipalCoefficient::one_plus_W_alpha) principal = to_grid(d_alpha(bg.W)) + cplx(1.0);

  const std::size_t n_pts = w.size();
  Grid adv_w(w.lattice_ptr(), w.resolution()), adv_r = adv_w, coup_w = adv_w, coup_r = adv_w;
  for (std::size_t n = 0; n < n_pts; ++n) {
    const cplx inv = ctx.inv[n];
    adv_w[n] = -b[n] * wa[n];
    adv_r[n] = -b[n] * ra[n];
    coup_w[n] = -std::conj(inv) * principal[n] * ra[n];
    coup_r[n] = I * (1.0 + a[n]) * inv * inv * w[n];
  }

  LinState out;
  if (opts.mode == LinearizedMode::full) {
    const SourceTerms src = source_terms(bg, ctx, lin);
    out.w = to_coeffs(adv_w + coup_w) + src.f;
    out.r = to_coeffs(adv_r + coup_r) + src.g;
    return out;
  }
  out.w = project(to_coeffs(adv_w), Projector::Psharp) + project(to_coeffs(coup_w), Projector::Psharp);
  out.r = project(to_coeffs(adv_r), Projector::Psharp) + project(to_coeffs(coup_r), Projector::Psharp);
  if (opts.sources) {
    out.w += project(opts.sources->f, Projector::Psharp);
    out.r += project(opts.sources->g, Projector::Psharp);
  }
  return out;
}

namespace {

// sum_j (-xi_j) |r_j|^2, the spectral form of (1/2i) int (r rbar_a - rbar r_a).
double half_derivative_term(const QPFunction& r) {
  const Lattice& lat = r.lattice();
  double s = 0.0;
  for (std::size_t f = 0; f < lat.size(); ++f) s -= lat.xi(f) * std::norm(r[f]);
  return s;
}

double l2_squared(const QPFunction& u) {
  double s = 0.0;
  for (auto c : u.coeffs()) s += std::norm(c);
  return s;
}

}  // namespace

double energy_E0(const LinState& lin) { return l2_squared(lin.w) + half_derivative_term(lin.r); }

QPFunction elin_weight(const DiffState& bg, double eps_chord) {
  Grid one_plus = to_grid(bg.W) + cplx(1.0);
  const double m = one_plus.min_abs();
  if (!(m > eps_chord)) throw SurfaceDegenerate(m, eps_chord);
  Grid a = to_grid(compute_a(bg.R));
  for (std::size_t n = 0; n < a.size(); ++n) a[n] = (1.0 + a[n].real()) / std::norm(one_plus[n]);
  return real_part(to_coeffs(a));
}

double energy_Elin(const QPFunction& weight, const LinState& lin) {
  Grid w = to_grid(lin.w);
  Grid c = to_grid(weight);
  double weighted = 0.0;
  for (std::size_t n = 0; n < w.size(); ++n) weighted += c[n].real() * std::norm(w[n]);
  weighted /= static_cast<double>(w.size());
  return weighted + half_derivative_term(lin.r) + l2_squared(lin.r);
}

double energy_Elin(const DiffState& bg, const LinState& lin, double eps_chord) {
  return energy_Elin(elin_weight(bg, eps_chord), lin);
}

double energy_Elin_rate(const DiffState& bg, const LinState& lin, double h, double eps_chord) {
  const CoupledState base{bg, lin};
  const CoupledState dir = rhs_coupled(base, eps_chord);
  CoupledState plus = base, minus = base;
  axpy(plus, h, dir);
  axpy(minus, -h, dir);
  return (energy_Elin(plus.bg, plus.lin, eps_chord) - energy_Elin(minus.bg, minus.lin, eps_chord)) / (2.0 * h);
}

DifferenceReport difference_experiment(const DiffState& bg1, const DiffState& bg2, double t_final, double dt, double s,
                                       double eps_chord) {
  if (!(dt > 0.0) || !(t_final >= 0.0)) throw ValidationError("difference_experiment: need dt > 0 and t_final >= 0");
  DifferenceReport report;
  auto rhs = [eps_chord](double, const DiffState& u) { return rhs_diff(u, eps_chord); };
  DiffState u1 = bg1, u2 = bg2;
  const long steps = std::lround(t_final / dt);
  double integral = 0.0;
  double prev_B = 0.0;

  auto sample = [&](double t) {
    const ControlParams c1 = control_params(u1, s), c2 = control_params(u2, s);
    const double B = c1.B + c2.B;
    if (!report.samples.empty()) integral += 0.5 * dt * (B + prev_B);
    prev_B = B;
    report.samples.push_back({t, pair_norm(u1 - u2, 0.0), B, c1.A + c2.A, integral});
  };

  sample(0.0);
  try {
    for (long n = 0; n < steps; ++n) {
      u1 = rk4_step(rhs, n * dt, u1, dt);
      u2 = rk4_step(rhs, n * dt, u2, dt);
      enforce_holomorphic(u1);
      enforce_holomorphic(u2);
      sample((n + 1) * dt);
    }
  } catch (const SurfaceDegenerate& e) {
    report.degenerate = true;
    report.message = e.what();
  }

  const double d0 = report.samples.front().distance;
  double c = 0.0;
  for (const auto& smp : report.samples) {
    if (smp.B_integral <= 0.0 || d0 <= 0.0 || smp.distance <= d0) continue;
    c = std::max(c, std::log(smp.distance / d0) / smp.B_integral);
  }
  report.gronwall_constant = c;
  return report;
}

}  // namespace qpww
