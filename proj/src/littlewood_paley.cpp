#include "qpww/littlewood_paley.hpp"

#include <cmath>
#include <vector>

#include "qpww/errors.hpp"

namespace qpww {
namespace {

double bump(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

QPFunction apply_symbol(const QPFunction& u, auto&& symbol) {
  const Lattice& lat = u.lattice();
  QPFunction out = u;
  for (std::size_t f = 0; f < lat.size(); ++f) out[f] *= symbol(lat.xi(f));
  return out;
}

}  // namespace

double lp_cutoff(double x) {
  const double a = std::abs(x);
  if (a <= 1.0) return 1.0;
  if (a >= 2.0) return 0.0;
  const double up = bump(2.0 - a);
  return up / (up + bump(a - 1.0));
}

double lp_band_symbol(int level, double xi) {
  if (level < 0) return 0.0;
  const double lo = std::ldexp(xi, -level);
  if (level == 0) return lp_cutoff(lo);
  return lp_cutoff(lo) - lp_cutoff(2.0 * lo);
}

QPFunction lp_project(const QPFunction& u, int level) {
  return apply_symbol(u, [level](double xi) { return lp_band_symbol(level, xi); });
}

QPFunction lp_lowpass(const QPFunction& u, int level) {
  if (level < 0) return QPFunction(u.lattice_ptr());
  return apply_symbol(u, [level](double xi) { return lp_cutoff(std::ldexp(xi, -level)); });
}

int lp_band_count(const Lattice& lattice) {
  int l = 0;
  while (std::ldexp(1.0, l) < lattice.xi_max()) ++l;
  return l + 1;
}

Paraproduct paraproduct(const QPFunction& f, const QPFunction& g) {
  if (!f.lattice().same_as(g.lattice())) throw Error("paraproduct: operands on different lattices");
  const int bands = lp_band_count(f.lattice());
  const int gap = kParaproductGap;
  const int m = f.lattice().padded_resolution();

  std::vector<Grid> fb, gb;
  for (int l = 0; l < bands; ++l) {
    fb.push_back(to_grid(lp_project(f, l), m));
    gb.push_back(to_grid(lp_project(g, l), m));
  }
  Grid low_high(f.lattice_ptr(), m), high_low(f.lattice_ptr(), m), diag(f.lattice_ptr(), m);
  for (int k = 0; k < bands; ++k) {
    for (int l = 0; l < bands; ++l) {
      Grid* target = k > l + gap ? &high_low : (l > k + gap ? &low_high : &diag);
      // f_k g_l
      auto tv = target->values();
      auto fv = fb[k].values();
      auto gv = gb[l].values();
      for (std::size_t n = 0; n < tv.size(); ++n) tv[n] += fv[n] * gv[n];
    }
  }
  return {to_coeffs(low_high), to_coeffs(high_low), to_coeffs(diag)};
}

}  // namespace qpww
