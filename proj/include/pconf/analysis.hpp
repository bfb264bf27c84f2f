#pragma once

// Numerical evidence about conjugations: one-sided difference quotients at
// the endpoint fixed points (growth witnesses a non-C¹ conjugation), and the
// flat-point experiment showing that the unique conjugation between two
// perturbed configurations cannot carry one guiding set onto the other.

#include <string>
#include <vector>

#include "pconf/conjugacy.hpp"
#include "pconf/error.hpp"
#include "pconf/funcspace.hpp"
#include "pconf/pconfig.hpp"

namespace pconf {

struct QuotientProbe {
  double t0 = 1.0;
  int k_min = 0;
  int k_max = 0;
  std::vector<int> ks;
  std::vector<double> steps;      // 2^-k
  std::vector<double> quotients;  // |f(t0) - f(t0 ∓ 2^-k)| / 2^-k
  std::vector<double> ratios;     // quotients[i+1] / quotients[i]
  double holder_exponent = 0.0;
};

/// t0 ∈ {-1, 1}, 0 <= k_min <= k_max. Throws ScaleBelowGrid when
/// 2^-k_max < 2·(max node gap) and Precondition on bad arguments.
QuotientProbe difference_quotients(const SampledFunction& f, double t0, int k_min, int k_max);

/// Least-squares slope of log|f(t0) - f(t0 ∓ s)| against log s.
double holder_estimate(const SampledFunction& f, double t0, int k_min, int k_max);

struct DyadicRow {
  int m = 0;
  double point = 0.0;      // 1 - 2^-m
  double value = 0.0;      // h(point)
  double deviation = 0.0;  // |value - point|
  bool orbit_matches_standard = false;  // δ₁^m(0) == 1 - 2^-m
  bool below_resolution = false;        // 2^-m < max node gap of h
};

std::vector<DyadicRow> dyadic_fixed_point_check(const MonotoneFunction& h, const MapPair& pair,
                                                int m_max);

struct ExperimentOptions {
  int n = 2;
  int k = 3;
  FlatShape shape;
  SolverOptions solver;
  int m_max = 8;
  double dyadic_tol = 1e-3;
};

struct ExperimentReport {
  int n = 0;
  int k = 0;
  std::size_t grid = 0;
  Interval jn;
  Interval jk;
  double lambda = 0.0;  // flat point of δ₁, in int(Jn)
  double omega = 0.0;   // flat point of σ₁, in int(Jk)
  bool lambda_in_interior = false;
  bool omega_in_interior = false;
  std::vector<DyadicRow> dyadic;
  double dyadic_tol = 0.0;
  bool dyadic_ok = false;
  double h_of_lambda = 0.0;
  bool h_maps_jn_to_jn = false;
  bool h_injective = false;
  double residual = 0.0;  // conjugacy residual of h between the two systems
  bool non_isomorphic = false;
  std::string verdict;
};

class DyadicCheckFailure : public Error {
 public:
  explicit DyadicCheckFailure(ExperimentReport report)
      : Error(ErrorCode::kDyadicCheckFailure, "dyadic point drifted beyond tolerance"),
        report_(std::move(report)) {}
  const ExperimentReport& report() const { return report_; }

 private:
  ExperimentReport report_;
};

/// Throws Precondition when n == k or either is < 1, BuildFailure when a
/// family cannot be built, DyadicCheckFailure (carrying the report) when a
/// dyadic fixed point deviates by more than dyadic_tol.
ExperimentReport nonregular_experiment(const ExperimentOptions& opts);

}  // namespace pconf
