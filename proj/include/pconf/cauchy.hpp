#pragma once

// Solutions of the homogeneous equation f(t) = f(δ₁(t)) + f(δ₂(t)).
//
// Linear functions c·t always solve it. Any conjugation h between the pair
// and a different P-configuration solves it as well (sum the two conjugacy
// relations and use σ₁ + σ₂ = id) and is not linear, since h(1) = 1 would
// force h = id and hence δ₁ = σ₁.

#include <optional>
#include <string>
#include <vector>

#include "pconf/conjugacy.hpp"
#include "pconf/funcspace.hpp"
#include "pconf/pconfig.hpp"

namespace pconf {

enum class LinearFit {
  kEndpoint,  // c = f(1)
  kLeastSquares,
};

/// sup over the points of |f(t) - f(δ₁(t)) - f(δ₂(t))|; points are f's
/// nodes unless a uniform grid size is given.
double fe_residual(const SampledFunction& f, const MapPair& pair, std::size_t grid = 0);

/// sup over nodes of |f(t) - c·t|, c = f(1) by default.
double nonlinearity_gap(const SampledFunction& f, LinearFit fit = LinearFit::kEndpoint);

struct SolutionCertificate {
  MonotoneFunction solution;
  double fe_residual = 0.0;
  /// 2·(conjugacy residual) + additivity slack of the target. The certified
  /// inequality fe_residual <= fe_bound holds pointwise by construction.
  double fe_bound = 0.0;
  double conjugacy_residual = 0.0;
  /// Largest change of the solution between adjacent nodes; nothing is
  /// claimed between nodes beyond this.
  double interpolation_slack = 0.0;
  double nonlinearity_gap = 0.0;
  std::string source{};
  std::string target{};
  bool degenerate = false;
  std::vector<std::string> warnings{};
  ConvergenceLog log{};
};

struct SolveOptions {
  SolverOptions solver;
  /// Target configuration; standard by default, quadratic(0.2) when the
  /// source itself is standard.
  std::optional<FamilySpec> target;
};

/// Throws InvalidPair when the source fails validation (in its own mode).
SolutionCertificate solve_nonlinear(const MapPair& pair, const SolveOptions& opts = {});

struct InducedVerification {
  double additivity_max_dev = 0.0;  // |σ₁(t) + σ₂(t) - t|
  std::array<BoundaryValue, 4> boundary;
  double boundary_max_dev = 0.0;
  bool strictly_increasing = false;
  // The induced maps are only continuous and strictly increasing; no
  // derivative is claimed.
  bool differentiability_claimed = false;
};

struct InducedSystem {
  SampledFunction sigma1;
  SampledFunction sigma2;
  InducedVerification verification;
};

/// σᵢ = f ∘ δᵢ ∘ f⁻¹. Sampled at f's node values (where f⁻¹ is exact) unless
/// a uniform grid size is given. Throws NotStrictlyIncreasing or
/// AnchorsNotFixed.
InducedSystem induced_system(const MonotoneFunction& f, const MapPair& pair,
                             std::size_t grid = 0);

}  // namespace pconf
