#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qpww/dynamics.hpp"

namespace qpww {

/// Linearizations of b, a, M in the direction (w, r). All three are real.
struct DeltaFields {
  QPFunction db;
  QPFunction da;
  QPFunction dM;
};

struct SourceTerms {
  QPFunction f;
  QPFunction g;
};

DeltaFields delta_fields(const DiffState& bg, const LinState& lin, double eps_chord = kDefaultEpsChord);

/// f = -(1-Ybar) R_a w + (1-Ybar)^2 (1+W) R_a wbar + M w - W_a db + (1+W) dM
/// g = -R_a db - i (1-Y) da
SourceTerms source_terms(const DiffState& bg, const LinState& lin, double eps_chord = kDefaultEpsChord);

enum class LinearizedMode { full, reduced };

/// Coefficient of r_a in the w equation. The nonlinear system gives
/// (1-Ybar)(1+W); the (1+W_a) spelling is kept for comparison only.
enum class PrincipalCoefficient { one_plus_W, one_plus_W_alpha };

struct LinearizedOptions {
  LinearizedMode mode = LinearizedMode::full;
  PrincipalCoefficient principal = PrincipalCoefficient::one_plus_W;
  /// Reduced mode only: external sources (zero when absent).
  std::optional<SourceTerms> sources;
  double eps_chord = kDefaultEpsChord;
};

/// Full mode:
///   w_t = -b w_a - (1-Ybar)(1+W) r_a + f
///   r_t = -b r_a + i (1+a)(1-Y)^2 w + g
/// with (f, g) from source_terms; output is not projected.
/// Reduced mode applies P-sharp to every term and uses the supplied sources.
LinState linearized_rhs(const DiffState& bg, const LinState& lin, const LinearizedOptions& opts = {});

/// Energy of the zero-background flow w_t = -r_a, r_t = i w:
///   int |w|^2 + (1/2i)(r rbar_a - rbar r_a)  =  sum |w_j|^2 + sum (-xi_j) |r_j|^2.
double energy_E0(const LinState& lin);

/// Precomputed background weight (1 + a)|1 - Y|^2.
QPFunction elin_weight(const DiffState& bg, double eps_chord = kDefaultEpsChord);
/// int (1+a)|1-Y|^2 |w|^2 + (1/2i)(r rbar_a - rbar r_a) + |r|^2.
double energy_Elin(const DiffState& bg, const LinState& lin, double eps_chord = kDefaultEpsChord);
double energy_Elin(const QPFunction& weight, const LinState& lin);

/// Time derivative of E_lin along the coupled flow (bg under rhs_diff, lin
/// under the full linearized flow projected by P-sharp), by a centered
/// difference in the flow direction.
double energy_Elin_rate(const DiffState& bg, const LinState& lin, double h = 1e-5,
                        double eps_chord = kDefaultEpsChord);

struct DifferenceSample {
  double t = 0.0;
  double distance = 0.0;  ///< ||(W1-W2, R1-R2)|| in H^0 x H^{0,1/2}
  double B_sum = 0.0;     ///< B1 + B2 at sobolev index s
  double A_sum = 0.0;
  double B_integral = 0.0;
};

struct DifferenceReport {
  std::vector<DifferenceSample> samples;
  /// Smallest C with distance(t) <= distance(0) exp(C int_0^t B) on the run.
  double gronwall_constant = 0.0;
  bool degenerate = false;
  std::string message;
};

/// Evolves two differentiated states side by side with RK4 and records the
/// H^0 distance against the Gronwall envelope exp(C int B).
DifferenceReport difference_experiment(const DiffState& bg1, const DiffState& bg2, double t_final, double dt,
                                       double s = 2.0, double eps_chord = kDefaultEpsChord);

}  // namespace qpww
