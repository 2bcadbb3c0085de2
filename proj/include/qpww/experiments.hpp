#pragma once

#include <cstdint>
#include <vector>

#include "qpww/dynamics.hpp"

namespace qpww {

struct IterationOptions {
  int m_max = 6;
  double T = 0.1;
  double dt = 1e-3;
  double eps_chord = kDefaultEpsChord;
};

struct IterationReport {
  /// delta[m] = sup_t ||iterate m+1 - iterate m|| in H^0 x H^{0,1/2}, m = 0..m_max-1.
  std::vector<double> delta;
  /// contraction[m] = delta[m] / delta[m-1] for m >= 1 (contraction[0] is NaN).
  std::vector<double> contraction;
  /// sup_t ||iterate m_max - direct RK4 solution||.
  double distance_to_direct = 0.0;
  /// Direct-solver gaps dt vs dt/2 and N vs 2N plus a roundoff floor.
  double truncation_tolerance = 0.0;
  double dt_gap = 0.0;
  double resolution_gap = 0.0;
  double roundoff_floor = 0.0;
  /// No tested step contracted (c_m >= 1 for every m >= 1).
  bool non_contraction = false;
  /// Stated for the record: frozen coefficients are cubic Lagrange in t
  /// through four stored nodes.
  int interpolation_order = 3;
};

/// Builds the iterates of the linear nonautonomous scheme
///   W'_t + P#[b W'_a + (1+W)/(1+Wbar) R'_a] = P#[(1+W) M]
///   R'_t + P#[b R'_a - i(1+a) T_{(1-Y)^2} W'] = P#[i(1+a)(Y - T_{(1-Y)^2} W) - i a]
/// where unprimed quantities come from the previous iterate, starting from
/// (0, 0) and using the same initial data for every iterate.
IterationReport iteration_experiment(const DiffState& initial, const IterationOptions& opts);

struct RefinementOptions {
  int dim = 2;
  std::vector<double> k;  ///< empty: default_frequencies(dim)
  std::vector<int> N_list{8, 16, 32, 64};
  double sobolev = 2.1;
  double decay = -1.0;  ///< negative: s + 1
  double target_A = 0.1;
  std::uint64_t seed = 7;
  double T = 0.1;
  double dt = 5e-3;
  double eps_chord = kDefaultEpsChord;
  unsigned threads = 1;
};

struct RefinementReport {
  std::vector<int> N;
  /// Distances between the final states of runs N_list[i] and N_list[i+1].
  std::vector<double> dist_H0;
  std::vector<double> dist_Hs;
  bool monotone = false;  ///< dist_H0 strictly decreasing
  /// Per run: H^s-band norms of the final state, bands 0..L-1.
  std::vector<std::vector<double>> band_norms;
  /// Slowly varying envelope (slope 1/2 in the dyadic index) of the initial band norms on the finest lattice.
  std::vector<double> envelope;
  /// max over runs and bands of band_norm / envelope.
  double envelope_ratio = 0.0;
};

/// Draws data with |u_j| ~ <j>^{-decay} on the finest lattice, truncates it
/// to each N and evolves every truncation to T with the same step.
RefinementReport refinement_experiment(const RefinementOptions& opts);

/// Band norms ||P_l (W, R)|| in H^s x H^{s,1/2}, l = 0..bands-1.
std::vector<double> band_profile(const DiffState& state, double s, int bands);

}  // namespace qpww
