#pragma once

#include "qpww/qpfunction.hpp"

namespace qpww {

/// Smooth even cutoff: 1 on |x| <= 1, 0 on |x| >= 2, C-infinity in between
/// (ratio of exp(-1/t) bumps).
double lp_cutoff(double x);
/// Symbol of the dyadic band l in the alpha direction:
/// l = 0 -> chi(xi), l >= 1 -> chi(2^-l xi) - chi(2^-(l-1) xi).
/// The bands sum to one at every xi.
double lp_band_symbol(int level, double xi);

/// P_l^alpha u.
QPFunction lp_project(const QPFunction& u, int level);
/// P_{<=l}^alpha u = chi(2^-l xi) u_j (zero for l < 0).
QPFunction lp_lowpass(const QPFunction& u, int level);
/// Number of bands needed to tile the box: levels 0..count-1 reconstruct u.
int lp_band_count(const Lattice& lattice);

struct Paraproduct {
  QPFunction low_high;  ///< T_f g = sum_{k > l+4} f_l g_k
  QPFunction high_low;  ///< T_g f = sum_{k > l+4} f_k g_l
  QPFunction diagonal;  ///< Pi(f,g) = sum_{|k-l| <= 4} f_k g_l
};

inline constexpr int kParaproductGap = 4;

/// Bony decomposition of the dealiased product in the alpha direction.
Paraproduct paraproduct(const QPFunction& f, const QPFunction& g);

}  // namespace qpww
