#pragma once

#include "qpww/qpfunction.hpp"

namespace qpww {

// Fourier multipliers. Every operator here acts mode by mode on the
// coefficients and is exact on the truncated lattice.

enum class Weight {
  d_alpha,       ///< i xi
  abs_d_alpha,   ///< |xi|^theta
  bracket_alpha  ///< (1 + xi^2)^{theta/2}
};

QPFunction derivative_alpha(const QPFunction& u, Weight weight = Weight::d_alpha, double theta = 1.0);
/// d_alpha = k . grad on the torus (symbol i xi).
inline QPFunction d_alpha(const QPFunction& u) { return derivative_alpha(u, Weight::d_alpha); }
/// Torus coordinate derivative d / d alpha_axis (symbol i j_axis).
QPFunction partial(const QPFunction& u, int axis);

/// Quasiperiodic Hilbert transform, symbol -i sgn(xi) with sgn(0) = 0.
QPFunction hilbert(const QPFunction& u);

enum class Projector {
  P0,         ///< mean
  P,          ///< (I - iH)/2: keep xi < 0, half the mean
  Pbar,       ///< (I + iH)/2
  Psharp,     ///< P - P0/2
  PbarSharp,  ///< Pbar - P0/2
  Pr,         ///< Psharp + Re P0
  Pi,         ///< Psharp + i Im P0
  PbarR,      ///< PbarSharp + Re P0
  PbarI       ///< PbarSharp + i Im P0
};

QPFunction project(const QPFunction& u, Projector which);
void project_inplace(QPFunction& u, Projector which);

/// Coefficients of the complex conjugate function: c_j -> conj(c_{-j}).
QPFunction conj(const QPFunction& u);
QPFunction real_part(const QPFunction& u);
QPFunction imag_part(const QPFunction& u);

/// Dealiased product: both factors are sampled on the padded grid, multiplied
/// pointwise and analyzed back; the result is truncated to the box.
QPFunction multiply(const QPFunction& u, const QPFunction& v);

/// P on every mode the grid resolves (|m_i| < M/2), not only the box.
/// Grid products of box functions keep their full spectrum this way.
Grid project_P_full(const Grid& g);

/// 1 / (1 + w) evaluated pointwise on the padded grid. Throws
/// SurfaceDegenerate when min |1 + w| <= eps_chord on that grid.
QPFunction reciprocal_one_plus(const QPFunction& w, double eps_chord = 1e-6);

/// (sum_j (1+|j|^2)^s (1+xi^2)^theta |u_j|^2)^{1/2}, the H^{s,theta} norm.
double norm(const QPFunction& u, double s = 0.0, double theta = 0.0);
inline double l2_norm(const QPFunction& u) { return norm(u, 0.0, 0.0); }
/// Max of |u| over the padded collocation grid.
double sup_norm(const QPFunction& u);
/// Real inner product Re sum_j u_j conj(v_j) (normalized torus measure).
double inner(const QPFunction& u, const QPFunction& v);

}  // namespace qpww
