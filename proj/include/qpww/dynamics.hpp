#pragma once

#include "qpww/states.hpp"

namespace qpww {

inline constexpr double kDefaultEpsChord = 1e-6;

/// Auxiliary fields of a differentiated state. b, a, M, J are real.
struct AuxFields {
  QPFunction Y;  ///< W / (1 + W)
  QPFunction b;  ///< advection velocity 2 Re P[R (1 - Ybar)]
  QPFunction a;  ///< frequency shift 2 Im P[R Rbar_alpha], nonnegative
  QPFunction M;  ///< Pbar[Rbar Y_a - R_a Ybar] + P[R Ybar_a - Rbar_a Y]
  QPFunction F;  ///< P[R (1 - Ybar) - Rbar (1 - Y)], equal to P[(Q_a - Qbar_a)/J]
  QPFunction J;  ///< |1 + W|^2
};

QPFunction compute_Y(const QPFunction& W, double eps_chord = kDefaultEpsChord);
QPFunction compute_b(const QPFunction& R, const QPFunction& Y);
QPFunction compute_a(const QPFunction& R);
/// Values of 2 Im P[R Rbar_a] on the padded grid with the full product
/// spectrum kept. Nonnegative up to roundoff; compute_a is its box truncation.
Grid compute_a_grid(const QPFunction& R);
/// Projection form of M.
QPFunction compute_M(const QPFunction& R, const QPFunction& Y);
/// Rational form R_a/(1+Wbar) + Rbar_a/(1+W) - b_a, used as a cross-check.
QPFunction compute_M_rational(const DiffState& state, double eps_chord = kDefaultEpsChord);
/// F = P[(Q_a - Qbar_a) / J] from the undifferentiated unknowns.
QPFunction compute_F(const SurfaceState& state, double eps_chord = kDefaultEpsChord);
/// b from the undifferentiated unknowns, P[Q_a/J] + Pbar[Qbar_a/J].
QPFunction compute_b_surface(const SurfaceState& state, double eps_chord = kDefaultEpsChord);
AuxFields aux_fields(const DiffState& state, double eps_chord = kDefaultEpsChord);

/// Time derivative of the differentiated system, projected by P-sharp:
///   W_t = -b W_a - (1+W) R_a / (1+Wbar) + (1+W) M
///   R_t = -b R_a + i (W - a) / (1+W)
DiffState rhs_diff(const DiffState& state, double eps_chord = kDefaultEpsChord);

/// Time derivative of the undifferentiated system
///   W_t = -F (1 + W_a),  Q_t = -F Q_a + i W - P[|Q_a|^2 / J],
/// with W_t projected by P^i and Q_t by P^r.
SurfaceState rhs_undiff(const SurfaceState& state, double eps_chord = kDefaultEpsChord);

/// (W, Q) -> (W_a, Q_a / (1 + W_a)).
DiffState differentiate_state(const SurfaceState& state, double eps_chord = kDefaultEpsChord);
/// Inverse of differentiate_state on zero-mean data: W = d_a^{-1} W,
/// Q = d_a^{-1}[R (1 + W)], both with zero mean.
SurfaceState undifferentiate_state(const DiffState& state);
/// ||v.W - d_a u.W|| + ||v.R (1 + d_a u.W) - d_a u.Q|| in L^2.
double reconstruct_check(const SurfaceState& u, const DiffState& v);

struct ControlParams {
  double A = 0.0;  ///< ||(W,R)|| in H^{s-1/2} x H^{s-1/2,1/2}
  double B = 0.0;  ///< ||(W,R)|| in H^s x H^{s,1/2}
};
ControlParams control_params(const DiffState& state, double s);

/// Sum of E_lin(d^kappa W, d^kappa R) over torus multi-indices |kappa| = k,
/// with the linearized energy weights taken from the state itself.
double energy_Ek(const DiffState& state, int k, double eps_chord = kDefaultEpsChord);

/// Project a differentiated state onto the zero-mean holomorphic class.
void enforce_holomorphic(DiffState& state);
void enforce_holomorphic(LinState& state);
/// W onto range(P^i), Q onto range(P^r).
void enforce_holomorphic(SurfaceState& state);

/// L^2 mass outside the admissible class (xi >= 0 part, mean included).
double holomorphic_leakage(const DiffState& state);
double holomorphic_leakage(const LinState& state);
double holomorphic_leakage(const SurfaceState& state);

/// All multi-indices kappa in N^d with |kappa| = k.
std::vector<std::vector<int>> multi_indices(int dim, int order);

}  // namespace qpww
