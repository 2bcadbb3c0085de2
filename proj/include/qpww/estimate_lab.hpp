#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "qpww/lattice.hpp"

namespace qpww {

/// Parameters of a randomized suite. Negative decays select the defaults:
/// states s + 1, multipliers f s + (d+2)/2, operands u (d+2)/2.
struct SuiteParams {
  int dim = 2;
  int N = 8;
  std::vector<double> k;  ///< empty: default_frequencies(dim)
  double sobolev = 2.0;
  double radius = 0.3;  ///< A is drawn uniformly in [radius/2, radius]
  int trials = 100;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  double decay = -1.0;
  double multiplier_decay = -1.0;
  double operand_decay = -1.0;
  double dt = 1e-3;  ///< step for flow derivatives

  double state_decay() const { return decay > 0.0 ? decay : sobolev + 1.0; }
  double f_decay() const { return multiplier_decay > 0.0 ? multiplier_decay : sobolev + 0.5 * (dim + 2); }
  double u_decay() const { return operand_decay > 0.0 ? operand_decay : 0.5 * (dim + 2); }
  LatticePtr lattice() const;
};

struct TrialReport {
  std::string lemma;
  int trials = 0;
  int discarded = 0;  ///< trials that hit SurfaceDegenerate
  std::vector<double> ratios;  ///< per trial; NaN marks a discarded trial
  double max_ratio = 0.0;
  SuiteParams params;
};

enum class BernsteinVariant { b1, b2 };
enum class CommutatorVariant { com1, com2, com3 };
enum class ProductVariant { prod1, prod2, prod3 };
enum class WWLemma { Y_moser, b_bounds, a_bounds, a_material_derivative, M_bounds };

/// max_l ||P_l u||_inf / (2^{l(d/2-s)} ||u||_{H^s})  (b1), or with
/// 2^{l((d-1)/2-s)} ||u||_{H^{s,1/2}}  (b2).
TrialReport bernstein_check(BernsteinVariant variant, const SuiteParams& params);
/// ||[f,P] d_a u|| / (||f|| ||u||) in the three norm pairings.
TrialReport commutator_check(CommutatorVariant variant, const SuiteParams& params);
/// ||f u|| / (||f|| ||u||) in the three norm pairings.
TrialReport product_check(ProductVariant variant, const SuiteParams& params);
/// ||(T_f - f) u||_{H^{0,1/2}} / (||f||_{H^s} ||u||_{L^2}).
TrialReport paraproduct_error_check(const SuiteParams& params);
/// Water-wave auxiliary bounds on random states in the A-ball.
TrialReport ww_lemma_check(WWLemma which, const SuiteParams& params);
/// ||(P#f, P#g)||_{H^0} / (B ||(w,r)||_{H^0}) for random background and perturbation.
TrialReport linearized_source_check(const SuiteParams& params);
/// |dE^k/dt| / (B ||(W,R)||^2_{H^k}) with dE^k/dt from a centered difference
/// of E^k over one RK4 step forward and one backward.
TrialReport energy_growth_check(int k, const SuiteParams& params);

/// Every check above, in a fixed order.
std::vector<TrialReport> lemma_suite(const SuiteParams& params);

std::string lemma_name(BernsteinVariant v);
std::string lemma_name(CommutatorVariant v);
std::string lemma_name(ProductVariant v);
std::string lemma_name(WWLemma w);

/// One summary line per report.
void write_report_csv(std::ostream& out, const std::vector<TrialReport>& reports);
/// Long format: lemma, trial, ratio.
void write_trials_csv(std::ostream& out, const std::vector<TrialReport>& reports);

}  // namespace qpww
