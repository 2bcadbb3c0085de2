#include "qpww/spectral.hpp"

#include <cmath>

#include "fft.hpp"
#include "qpww/errors.hpp"

namespace qpww {
namespace {

double sgn(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

}  // namespace

QPFunction derivative_alpha(const QPFunction& u, Weight weight, double theta) {
  const Lattice& lat = u.lattice();
  QPFunction out = u;
  for (std::size_t f = 0; f < lat.size(); ++f) {
    const double xi = lat.xi(f);
    switch (weight) {
      case Weight::d_alpha:
        out[f] *= cplx(0.0, xi);
        break;
      case Weight::abs_d_alpha:
        out[f] *= (xi == 0.0 && theta > 0.0) ? 0.0 : std::pow(std::abs(xi), theta);
        break;
      case Weight::bracket_alpha:
        out[f] *= std::pow(1.0 + xi * xi, 0.5 * theta);
        break;
    }
  }
  return out;
}

QPFunction partial(const QPFunction& u, int axis) {
  const Lattice& lat = u.lattice();
  QPFunction out = u;
  for (std::size_t f = 0; f < lat.size(); ++f) out[f] *= cplx(0.0, lat.component(f, axis));
  return out;
}

QPFunction hilbert(const QPFunction& u) {
  const Lattice& lat = u.lattice();
  QPFunction out = u;
  for (std::size_t f = 0; f < lat.size(); ++f) out[f] *= cplx(0.0, -sgn(lat.xi(f)));
  return out;
}

void project_inplace(QPFunction& u, Projector which) {
  const Lattice& lat = u.lattice();
  const std::size_t z = lat.zero_index();
  const cplx mean = u[z];
  if (which == Projector::P0) {
    for (std::size_t f = 0; f < lat.size(); ++f)
      if (f != z) u[f] = 0.0;
    return;
  }
  const bool keep_negative = which == Projector::P || which == Projector::Psharp || which == Projector::Pr ||
                             which == Projector::Pi;
  for (std::size_t f = 0; f < lat.size(); ++f) {
    if (f == z) continue;
    const double xi = lat.xi(f);
    if (keep_negative ? xi > 0.0 : xi < 0.0) u[f] = 0.0;
  }
  switch (which) {
    case Projector::P:
    case Projector::Pbar:
      u[z] = 0.5 * mean;
      break;
    case Projector::Psharp:
    case Projector::PbarSharp:
      u[z] = 0.0;
      break;
    case Projector::Pr:
    case Projector::PbarR:
      u[z] = mean.real();
      break;
    case Projector::Pi:
    case Projector::PbarI:
      u[z] = cplx(0.0, mean.imag());
      break;
    case Projector::P0:
      break;
  }
}

QPFunction project(const QPFunction& u, Projector which) {
  QPFunction out = u;
  project_inplace(out, which);
  return out;
}

QPFunction conj(const QPFunction& u) {
  const Lattice& lat = u.lattice();
  QPFunction out(u.lattice_ptr());
  for (std::size_t f = 0; f < lat.size(); ++f) out[f] = std::conj(u[lat.mirror(f)]);
  return out;
}

QPFunction real_part(const QPFunction& u) {
  const Lattice& lat = u.lattice();
  QPFunction out(u.lattice_ptr());
  for (std::size_t f = 0; f < lat.size(); ++f) out[f] = 0.5 * (u[f] + std::conj(u[lat.mirror(f)]));
  return out;
}

QPFunction imag_part(const QPFunction& u) {
  const Lattice& lat = u.lattice();
  QPFunction out(u.lattice_ptr());
  for (std::size_t f = 0; f < lat.size(); ++f) out[f] = cplx(0.0, -0.5) * (u[f] - std::conj(u[lat.mirror(f)]));
  return out;
}

QPFunction multiply(const QPFunction& u, const QPFunction& v) {
  if (!u.lattice().same_as(v.lattice())) throw Error("multiply: operands on different lattices");
  Grid g = to_grid(u);
  g *= to_grid(v);
  return to_coeffs(g);
}

QPFunction reciprocal_one_plus(const QPFunction& w, double eps_chord) {
  Grid g = to_grid(w);
  double min_abs = INFINITY;
  for (auto& v : g.values()) {
    v += 1.0;
    min_abs = std::min(min_abs, std::abs(v));
    v = 1.0 / v;
  }
  if (!(min_abs > eps_chord)) throw SurfaceDegenerate(min_abs, eps_chord);
  return to_coeffs(g);
}

double norm(const QPFunction& u, double s, double theta) {
  const Lattice& lat = u.lattice();
  double sum = 0.0;
  for (std::size_t f = 0; f < lat.size(); ++f) {
    const double a2 = std::norm(u[f]);
    if (a2 == 0.0) continue;
    double w = 1.0;
    if (s != 0.0) w *= std::pow(1.0 + lat.index_norm2(f), s);
    if (theta != 0.0) w *= std::pow(1.0 + lat.xi(f) * lat.xi(f), theta);
    sum += w * a2;
  }
  return std::sqrt(sum);
}

double sup_norm(const QPFunction& u) { return to_grid(u).max_abs(); }

double inner(const QPFunction& u, const QPFunction& v) {
  double sum = 0.0;
  for (std::size_t f = 0; f < u.coeffs().size(); ++f) sum += (u[f] * std::conj(v[f])).real();
  return sum;
}

Grid project_P_full(const Grid& g) {
  const Lattice& lat = *g.lattice_ptr();
  const int m = g.resolution();
  const int d = lat.dim();
  std::vector<cplx> work(g.values().begin(), g.values().end());
  detail::fft_inplace(work, d, m, -1);
  const double scale = 1.0 / static_cast<double>(work.size());
  for (std::size_t n = 0; n < work.size(); ++n) {
    std::size_t rest = n;
    double xi = 0.0;
    bool resolved = true;
    for (int i = d - 1; i >= 0; --i) {
      int c = static_cast<int>(rest % static_cast<std::size_t>(m));
      rest /= static_cast<std::size_t>(m);
      if (c > m / 2 || (2 * c == m)) c -= m;
      if (2 * std::abs(c) >= m) resolved = false;
      xi += c * lat.k()[i];
    }
    double keep = 0.0;
    if (resolved) keep = std::abs(xi) <= lat.tolerance() ? 0.5 : (xi < 0.0 ? 1.0 : 0.0);
    work[n] *= keep * scale;
  }
  detail::fft_inplace(work, d, m, +1);
  return Grid(g.lattice_ptr(), m, std::move(work));
}

}  // namespace qpww
