#include "qpww/estimate_lab.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <ostream>

#include "parallel.hpp"
#include "qpww/dynamics.hpp"
#include "qpww/errors.hpp"
#include "qpww/linearized.hpp"
#include "qpww/littlewood_paley.hpp"
#include "qpww/random_fields.hpp"
#include "qpww/series_io.hpp"
#include "qpww/spectral.hpp"
#include "qpww/timestepper.hpp"

namespace qpww {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double safe_ratio(double num, double den) { return den > 0.0 ? num / den : 0.0; }

// Streams used by a trial; offsets keep f, u and the state independent.
std::uint64_t stream(const SuiteParams& p, int trial, std::uint64_t which) {
  return trial_seed(p.seed, static_cast<std::uint64_t>(trial) * 8 + which);
}

TrialReport run_suite(const std::string& name, const SuiteParams& params, const std::function<double(int)>& trial) {
  if (params.trials < 0) throw ValidationError("suite trials must be nonnegative");
  TrialReport report;
  report.lemma = name;
  report.trials = params.trials;
  report.params = params;
  report.ratios.assign(params.trials, 0.0);
  detail::parallel_for(params.trials, params.threads, [&](std::size_t i) {
    try {
      report.ratios[i] = trial(static_cast<int>(i));
    } catch (const SurfaceDegenerate&) {
      report.ratios[i] = kNaN;
    }
  });
  for (double r : report.ratios) {
    if (std::isnan(r)) {
      ++report.discarded;
      continue;
    }
    report.max_ratio = std::max(report.max_ratio, r);
  }
  return report;
}

DiffState random_state(const SuiteParams& p, const LatticePtr& lat, int trial) {
  const double A = p.radius * (0.5 + 0.5 * uniform01(stream(p, trial, 0)));
  return random_diff_state(lat, p.state_decay(), p.sobolev, A, stream(p, trial, 1));
}

// [f, P] d_a u = f P(d_a u) - P(f d_a u).
QPFunction commutator(const QPFunction& f, const QPFunction& u) {
  const QPFunction du = d_alpha(u);
  return multiply(f, project(du, Projector::P)) - project(multiply(f, du), Projector::P);
}

}  // namespace

LatticePtr SuiteParams::lattice() const {
  const std::vector<double> freq = k.empty() ? default_frequencies(dim) : k;
  return validate_lattice(freq, N);
}

std::string lemma_name(BernsteinVariant v) { return v == BernsteinVariant::b1 ? "bernstein-b1" : "bernstein-b2"; }
std::string lemma_name(CommutatorVariant v) {
  switch (v) {
    case CommutatorVariant::com1: return "com1";
    case CommutatorVariant::com2: return "com2";
    case CommutatorVariant::com3: return "com3";
  }
  return {};
}
std::string lemma_name(ProductVariant v) {
  switch (v) {
    case ProductVariant::prod1: return "prod1";
    case ProductVariant::prod2: return "prod2";
    case ProductVariant::prod3: return "prod3";
  }
  return {};
}
std::string lemma_name(WWLemma w) {
  switch (w) {
    case WWLemma::Y_moser: return "Y-moser";
    case WWLemma::b_bounds: return "b-bounds";
    case WWLemma::a_bounds: return "a-bounds";
    case WWLemma::a_material_derivative: return "a-material-derivative";
    case WWLemma::M_bounds: return "M-bounds";
  }
  return {};
}

TrialReport bernstein_check(BernsteinVariant variant, const SuiteParams& p) {
  const LatticePtr lat = p.lattice();
  const int bands = lp_band_count(*lat);
  const double d = p.dim, s = p.sobolev;
  return run_suite(lemma_name(variant), p, [&](int t) {
    const QPFunction u = random_function(lat, p.u_decay(), stream(p, t, 2));
    const double un = variant == BernsteinVariant::b1 ? norm(u, s, 0.0) : norm(u, s, 0.5);
    const double expo = variant == BernsteinVariant::b1 ? 0.5 * d - s : 0.5 * (d - 1) - s;
    double worst = 0.0;
    for (int l = 0; l < bands; ++l) {
      const double lambda = std::ldexp(1.0, l);
      worst = std::max(worst, safe_ratio(sup_norm(lp_project(u, l)), std::pow(lambda, expo) * un));
    }
    return worst;
  });
}

TrialReport commutator_check(CommutatorVariant variant, const SuiteParams& p) {
  const LatticePtr lat = p.lattice();
  const double s = p.sobolev;
  return run_suite(lemma_name(variant), p, [&](int t) {
    const QPFunction f = random_function(lat, p.f_decay(), stream(p, t, 3));
    const QPFunction u = random_function(lat, p.u_decay(), stream(p, t, 2));
    const QPFunction c = commutator(f, u);
    switch (variant) {
      case CommutatorVariant::com1: return safe_ratio(l2_norm(c), norm(f, s, 0.5) * l2_norm(u));
      case CommutatorVariant::com2: return safe_ratio(l2_norm(c), norm(f, s, 0.0) * norm(u, 0.0, 0.5));
      case CommutatorVariant::com3: return safe_ratio(norm(c, 0.0, 0.5), norm(f, s, 0.5) * norm(u, 0.0, 0.5));
    }
    return 0.0;
  });
}

TrialReport product_check(ProductVariant variant, const SuiteParams& p) {
  const LatticePtr lat = p.lattice();
  const double s = p.sobolev;
  return run_suite(lemma_name(variant), p, [&](int t) {
    const QPFunction f = random_function(lat, p.f_decay(), stream(p, t, 3));
    const QPFunction u = random_function(lat, p.u_decay(), stream(p, t, 2));
    const QPFunction fu = multiply(f, u);
    const double un = norm(u, 0.0, 0.5);
    switch (variant) {
      case ProductVariant::prod1: return safe_ratio(norm(fu, 0.0, 0.5), norm(f, s - 0.5, 0.0) * un);
      case ProductVariant::prod2: return safe_ratio(l2_norm(fu), norm(f, s - 1.0, 0.0) * un);
      case ProductVariant::prod3: return safe_ratio(norm(fu, 0.0, 0.5), norm(f, s - 1.0, 0.5) * un);
    }
    return 0.0;
  });
}

TrialReport paraproduct_error_check(const SuiteParams& p) {
  const LatticePtr lat = p.lattice();
  return run_suite("para-err", p, [&](int t) {
    const QPFunction f = random_function(lat, p.f_decay(), stream(p, t, 3));
    const QPFunction u = random_function(lat, p.u_decay(), stream(p, t, 2));
    const Paraproduct pp = paraproduct(f, u);
    const QPFunction err = pp.low_high - multiply(f, u);
    return safe_ratio(norm(err, 0.0, 0.5), norm(f, p.sobolev, 0.0) * l2_norm(u));
  });
}

TrialReport ww_lemma_check(WWLemma which, const SuiteParams& p) {
  const LatticePtr lat = p.lattice();
  const double s = p.sobolev;
  return run_suite(lemma_name(which), p, [&](int t) {
    const DiffState st = random_state(p, lat, t);
    const ControlParams cp = control_params(st, s);
    const double A = cp.A, B = cp.B;
    switch (which) {
      case WWLemma::Y_moser: {
        const QPFunction Y = compute_Y(st.W);
        return std::max(safe_ratio(norm(Y, s, 0.0), norm(st.W, s, 0.0)),
                        safe_ratio(norm(Y, s - 0.5, 0.0), norm(st.W, s - 0.5, 0.0)));
      }
      case WWLemma::b_bounds: {
        const QPFunction b = compute_b(st.R, compute_Y(st.W));
        return std::max(safe_ratio(norm(b, s - 0.5, 0.5), A), safe_ratio(norm(b, s, 0.5), B));
      }
      case WWLemma::a_bounds: {
        const QPFunction a = compute_a(st.R);
        return std::max(safe_ratio(norm(a, s - 0.5, 0.0), A * A), safe_ratio(norm(a, s, 0.0), A * B));
      }
      case WWLemma::a_material_derivative: {
        // a is quadratic in R, so the centered difference along the flow is exact.
        const DiffState dir = rhs_diff(st);
        const double h = p.dt;
        DiffState plus = st, minus = st;
        axpy(plus, h, dir);
        axpy(minus, -h, dir);
        const QPFunction a_t = (1.0 / (2.0 * h)) * (compute_a(plus.R) - compute_a(minus.R));
        const QPFunction b = compute_b(st.R, compute_Y(st.W));
        return safe_ratio(sup_norm(a_t + multiply(b, d_alpha(compute_a(st.R)))), B);
      }
      case WWLemma::M_bounds: {
        const QPFunction M = compute_M(st.R, compute_Y(st.W));
        return safe_ratio(norm(M, s - 0.5, 0.0), A * B);
      }
    }
    return 0.0;
  });
}

TrialReport linearized_source_check(const SuiteParams& p) {
  const LatticePtr lat = p.lattice();
  return run_suite("lin-source", p, [&](int t) {
    const DiffState bg = random_state(p, lat, t);
    const LinState lin = random_lin_state(lat, p.u_decay(), stream(p, t, 4));
    const SourceTerms src = source_terms(bg, lin);
    const LinState projected{project(src.f, Projector::Psharp), project(src.g, Projector::Psharp)};
    return safe_ratio(pair_norm(projected, 0.0), control_params(bg, p.sobolev).B * pair_norm(lin, 0.0));
  });
}

TrialReport energy_growth_check(int k, const SuiteParams& p) {
  if (k < 0) throw ValidationError("energy order must be nonnegative");
  const LatticePtr lat = p.lattice();
  return run_suite("energy-growth-k" + std::to_string(k), p, [&](int t) {
    const DiffState st = random_state(p, lat, t);
    auto rhs = [](double, const DiffState& u) { return rhs_diff(u); };
    DiffState fwd = rk4_step(rhs, 0.0, st, p.dt);
    DiffState bwd = rk4_step(rhs, 0.0, st, -p.dt);
    enforce_holomorphic(fwd);
    enforce_holomorphic(bwd);
    const double rate = (energy_Ek(fwd, k) - energy_Ek(bwd, k)) / (2.0 * p.dt);
    const double n = pair_norm(st, k);
    return safe_ratio(std::abs(rate), control_params(st, p.sobolev).B * n * n);
  });
}

std::vector<TrialReport> lemma_suite(const SuiteParams& p) {
  std::vector<TrialReport> out;
  for (auto v : {BernsteinVariant::b1, BernsteinVariant::b2}) out.push_back(bernstein_check(v, p));
  for (auto v : {CommutatorVariant::com1, CommutatorVariant::com2, CommutatorVariant::com3})
    out.push_back(commutator_check(v, p));
  for (auto v : {ProductVariant::prod1, ProductVariant::prod2, ProductVariant::prod3}) out.push_back(product_check(v, p));
  out.push_back(paraproduct_error_check(p));
  for (auto w : {WWLemma::Y_moser, WWLemma::b_bounds, WWLemma::a_bounds, WWLemma::a_material_derivative,
                 WWLemma::M_bounds})
    out.push_back(ww_lemma_check(w, p));
  out.push_back(linearized_source_check(p));
  for (int k : {1, 2}) out.push_back(energy_growth_check(k, p));
  return out;
}

void write_report_csv(std::ostream& out, const std::vector<TrialReport>& reports) {
  out << "lemma,trials,discarded,max_ratio,s,d,N,radius,seed\n";
  for (const auto& r : reports) {
    out << r.lemma << ',' << r.trials << ',' << r.discarded << ',' << format_double(r.max_ratio) << ',' << format_double(r.params.sobolev)
        << ',' << r.params.dim << ',' << r.params.N << ',' << format_double(r.params.radius) << ',' << r.params.seed << '\n';
  }
}

void write_trials_csv(std::ostream& out, const std::vector<TrialReport>& reports) {
  out << "lemma,trial,ratio\n";
  for (const auto& r : reports)
    for (std::size_t i = 0; i < r.ratios.size(); ++i) out << r.lemma << ',' << i << ',' << format_double(r.ratios[i]) << '\n';
}

}  // namespace qpww
