#pragma once

// Conjugation of a P-configuration to the standard one.
//
// With f the two-branch inverse (δ₂⁻¹ on [-1, 0], δ₁⁻¹ on (0, 1]) and χ the
// matching sign, the operator
//
//     (T g)(z) = (g(f(z)) + χ(z)) / 2
//
// maps nondecreasing functions fixing -1, 0, 1 into themselves and is a
// 1/2-contraction in the sup norm. Its fixed point h satisfies
// h(δᵢ(t)) = σᵢ(h(t)) with σ₁(t) = (t+1)/2, σ₂(t) = (t-1)/2.

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pconf/error.hpp"
#include "pconf/funcspace.hpp"
#include "pconf/pconfig.hpp"

namespace pconf {

/// Increasing-function inverse by bisection: smallest-interval midpoint
/// after a fixed number of halvings, exact at the bracket ends. The result
/// is nondecreasing in y.
template <typename F>
double bisect_increasing(F&& fn, double y, double lo, double hi, int iterations = 60) {
  if (y <= fn(lo)) return lo;
  if (y >= fn(hi)) return hi;
  for (int i = 0; i < iterations; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (fn(mid) < y) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

class BranchInverse {
 public:
  /// Throws InvalidPair if the boundary pattern fails and BranchNotInvertible
  /// if either branch is not strictly increasing on a check grid.
  explicit BranchInverse(MapPair pair);

  /// f(z): δ₂⁻¹(z) for z <= 0, δ₁⁻¹(z) for z > 0.
  double operator()(double z) const;
  /// χ(z): -1 on [-1, 0], +1 on (0, 1].
  static double sign(double z) { return z <= 0.0 ? -1.0 : 1.0; }

 private:
  MapPair pair_;
};

enum class GridKind {
  kUniform,
  // Uniform nodes merged with the orbit of {-1, 0, 1} under words of the
  // pair up to the depth whose node count matches the uniform part. On orbit
  // nodes the conjugation takes dyadic values, so its variation between
  // adjacent nodes is bounded by 2^-depth even where it is only Hölder.
  kDynamic,
};

/// Images of {-1, 0, 1} under all words of exactly `depth` letters (which
/// include all shorter words), in increasing order: 2^(depth+1) + 1 points.
std::vector<double> orbit_nodes(const MapPair& pair, int depth);

/// Solver nodes. `size` must be odd and >= 3 so that 0 is a node.
std::vector<double> solver_grid(const MapPair& pair, std::size_t size, GridKind kind);

struct ConvergenceLog {
  std::size_t iterations = 0;
  std::vector<double> distances;  // d_k = |h_{k+1} - h_k|
  std::vector<double> ratios;     // d_{k+1} / d_k
  double residual = 0.0;          // |T h - h| for the returned h
  std::size_t grid = 0;
  std::size_t nodes = 0;
  double tol = 0.0;
  double max_local_variation = 0.0;
  bool strictly_increasing = false;
};

class MaxIterExceeded : public Error {
 public:
  explicit MaxIterExceeded(ConvergenceLog log)
      : Error(ErrorCode::kMaxIterExceeded,
              "no convergence after " + std::to_string(log.iterations) + " iterations"),
        log_(std::move(log)) {}
  const ConvergenceLog& log() const { return log_; }

 private:
  ConvergenceLog log_;
};

struct SolverOptions {
  std::size_t grid = 4097;
  double tol = 1e-10;
  std::size_t max_iter = 200;
  GridKind grid_kind = GridKind::kDynamic;
  /// Starting iterate; identity when empty. Resampled onto the solver grid.
  std::optional<MonotoneFunction> initial;
};

/// One application of T on g's own nodes. g must fix -1, 0, 1 at nodes.
MonotoneFunction apply_T(const MonotoneFunction& g, const MapPair& pair);

struct Conjugation {
  MonotoneFunction h;
  ConvergenceLog log;
};

Conjugation conjugate_to_standard(const MapPair& pair, const SolverOptions& opts = {});

struct PairConjugation {
  MonotoneFunction h;
  ConvergenceLog source_log;
  ConvergenceLog target_log;
};

/// h = h_target⁻¹ ∘ h_source, sampled where either solution has a node (in
/// the standard coordinate), so conjugate(b, a) is the node swap of
/// conjugate(a, b).
PairConjugation conjugate(const MapPair& source, const MapPair& target,
                          const SolverOptions& opts = {});

struct Word {
  std::vector<int> letters;  // branch indices, applied right to left
  double base = 0.0;         // one of -1, 0, 1
};

struct OrbitPoint {
  double abscissa = 0.0;  // δ_w(base)
  double ordinate = 0.0;  // σ_w(base), exact dyadic
};

OrbitPoint orbit_oracle(const MapPair& pair, const Word& word);

/// All words of length 0..max_len over {1, 2} on each base.
std::vector<Word> all_words(int max_len, std::span<const double> bases);

struct ConjugacyResidual {
  double max_residual = 0.0;
  double branch1 = 0.0;
  double branch2 = 0.0;
  std::array<double, 3> anchor_deviation{};  // |h(a) - a| for a = -1, 0, 1
};

/// max over points t and i of |h(δᵢ(t)) - σᵢ(h(t))|. Points are h's nodes
/// unless a uniform grid size is given.
ConjugacyResidual verify_conjugacy(const MonotoneFunction& h, const MapPair& source,
                                   const MapPair& target, std::size_t grid = 0);

}  // namespace pconf
