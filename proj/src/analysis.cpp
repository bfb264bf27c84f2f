#include "pconf/analysis.hpp"

#include <cmath>
#include <limits>

namespace pconf {
namespace {

void check_probe_args(const SampledFunction& f, double t0, int k_min, int k_max) {
  if (t0 != 1.0 && t0 != -1.0) throw Error(ErrorCode::kPrecondition, "t0 must be -1 or 1");
  if (k_min < 0 || k_max < k_min || k_max > 60) {
    throw Error(ErrorCode::kPrecondition, "need 0 <= k_min <= k_max <= 60");
  }
  if (std::ldexp(1.0, -k_max) < 2.0 * f.max_node_gap()) {
    throw Error(ErrorCode::kScaleBelowGrid,
                "2^-" + std::to_string(k_max) + " is below twice the max node gap");
  }
}

double increment(const SampledFunction& f, double t0, double s) {
  return t0 > 0.0 ? std::abs(f.eval(1.0) - f.eval(1.0 - s))
                  : std::abs(f.eval(-1.0 + s) - f.eval(-1.0));
}

double log_log_slope(const std::vector<double>& steps, const std::vector<double>& incs) {
  const auto n = static_cast<double>(steps.size());
  if (steps.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (!(incs[i] > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    const double x = std::log(steps[i]);
    const double y = std::log(incs[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

QuotientProbe difference_quotients(const SampledFunction& f, double t0, int k_min, int k_max) {
  check_probe_args(f, t0, k_min, k_max);
  QuotientProbe p;
  p.t0 = t0;
  p.k_min = k_min;
  p.k_max = k_max;
  std::vector<double> incs;
  for (int k = k_min; k <= k_max; ++k) {
    const double s = std::ldexp(1.0, -k);
    const double inc = increment(f, t0, s);
    p.ks.push_back(k);
    p.steps.push_back(s);
    p.quotients.push_back(inc / s);
    incs.push_back(inc);
  }
  for (std::size_t i = 1; i < p.quotients.size(); ++i) {
    p.ratios.push_back(p.quotients[i] / p.quotients[i - 1]);
  }
  p.holder_exponent = log_log_slope(p.steps, incs);
  return p;
}

double holder_estimate(const SampledFunction& f, double t0, int k_min, int k_max) {
  return difference_quotients(f, t0, k_min, k_max).holder_exponent;
}

std::vector<DyadicRow> dyadic_fixed_point_check(const MonotoneFunction& h, const MapPair& pair,
                                                int m_max) {
  std::vector<DyadicRow> rows;
  const double gap = h.max_node_gap();
  double orbit = 0.0;
  for (int m = 1; m <= m_max; ++m) {
    orbit = pair.delta1(orbit);
    DyadicRow r;
    r.m = m;
    r.point = 1.0 - std::ldexp(1.0, -m);
    r.value = h.eval(r.point);
    r.deviation = std::abs(r.value - r.point);
    r.orbit_matches_standard = orbit == r.point;
    r.below_resolution = std::ldexp(1.0, -m) < gap;
    rows.push_back(r);
  }
  return rows;
}

ExperimentReport nonregular_experiment(const ExperimentOptions& opts) {
  if (opts.n < 1 || opts.k < 1) throw Error(ErrorCode::kPrecondition, "n and k must be >= 1");
  if (opts.n == opts.k) {
    throw Error(ErrorCode::kPrecondition, "n == k: identical intervals give no contradiction");
  }
  auto build = [&](int idx) {
    try {
      return build_family(PerturbedFlatFamily{idx, opts.shape});
    } catch (const Error& e) {
      throw Error(ErrorCode::kBuildFailure, e.what());
    }
  };
  const MapPair delta = build(opts.n);
  const MapPair sigma = build(opts.k);

  ExperimentReport r;
  r.n = opts.n;
  r.k = opts.k;
  r.grid = opts.solver.grid;
  r.jn = *delta.perturbation_interval();
  r.jk = *sigma.perturbation_interval();
  r.lambda = *delta.flat_point();
  r.omega = *sigma.flat_point();
  r.lambda_in_interior = r.jn.contains_interior(r.lambda);
  r.omega_in_interior = r.jk.contains_interior(r.omega);
  r.dyadic_tol = opts.dyadic_tol;

  // The systems without their guiding sets: the unique conjugation fixing
  // -1, 0, 1, computed through the standard configuration.
  const auto conj = conjugate(delta, sigma, opts.solver);
  const MonotoneFunction& h = conj.h;
  r.residual = verify_conjugacy(h, delta, sigma).max_residual;
  r.h_injective = h.strictly_increasing();

  r.dyadic = dyadic_fixed_point_check(h, delta, opts.m_max);
  r.dyadic_ok = true;
  for (const auto& row : r.dyadic) r.dyadic_ok = r.dyadic_ok && row.deviation <= opts.dyadic_tol;

  r.h_of_lambda = h.eval(r.lambda);
  r.h_maps_jn_to_jn = std::abs(h.eval(r.jn.lo) - r.jn.lo) <= opts.dyadic_tol &&
                      std::abs(h.eval(r.jn.hi) - r.jn.hi) <= opts.dyadic_tol;

  // h is monotone and fixes the endpoints of Jn, so h(λ) ∈ Jn; ω lies in the
  // interior of Jk, which meets Jn in at most an endpoint.
  const bool h_lambda_in_jn = r.h_of_lambda >= r.jn.lo - opts.dyadic_tol &&
                              r.h_of_lambda <= r.jn.hi + opts.dyadic_tol;
  r.non_isomorphic = r.dyadic_ok && r.h_maps_jn_to_jn && h_lambda_in_jn && r.lambda_in_interior &&
                     r.omega_in_interior && !r.jn.contains(r.omega);
  r.verdict = r.non_isomorphic ? "non-isomorphic" : "undetermined";
  if (!r.dyadic_ok) throw DyadicCheckFailure(std::move(r));
  return r;
}

}  // namespace pconf
