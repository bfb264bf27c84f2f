#pragma once

// Sampled functions on I = [-1, 1].
//
// Everything in the solver is represented as a piecewise-linear interpolant
// through explicit (node, value) pairs. SampledFunction carries no shape
// constraint and is what residual measurements accept; MonotoneFunction adds
// the invariants of the fixed-point space (nondecreasing values inside
// [-1, 1]) together with inversion and composition.

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace pconf {

enum class Provenance { kSampled, kIdentity, kSolver, kComposition, kInverse };

std::string_view to_string(Provenance p);

/// Uniformly spaced nodes on [-1, 1]; for odd n the middle node is exactly 0.
std::vector<double> uniform_grid(std::size_t n);

class SampledFunction {
 public:
  /// Throws BadDomain unless nodes are strictly increasing from -1 to 1 and
  /// the two lists have equal length >= 2.
  SampledFunction(std::vector<double> nodes, std::vector<double> values);

  template <typename F>
  static SampledFunction sample(std::span<const double> nodes, F&& f) {
    std::vector<double> values;
    values.reserve(nodes.size());
    for (double t : nodes) values.push_back(f(t));
    return SampledFunction({nodes.begin(), nodes.end()}, std::move(values));
  }

  /// Exact at nodes, linear in between. Throws OutOfDomain outside [-1, 1].
  double eval(double t) const;
  double operator()(double t) const { return eval(t); }

  std::span<const double> nodes() const { return nodes_; }
  std::span<const double> values() const { return values_; }
  std::size_t size() const { return nodes_.size(); }

  double max_node_gap() const;
  /// Largest |values[i+1] - values[i]|; bounds the interpolation error of any
  /// monotone function agreeing with this one at the nodes.
  double max_local_variation() const;

 protected:
  std::size_t segment(double t) const;

  std::vector<double> nodes_;
  std::vector<double> values_;
};

class MonotoneFunction : public SampledFunction {
 public:
  /// Validating constructor; comparisons are exact. Throws NonMonotoneInput
  /// on any strict decrease and BadDomain on a malformed grid or end values
  /// outside [-1, 1].
  MonotoneFunction(std::vector<double> nodes, std::vector<double> values,
                   Provenance provenance = Provenance::kSampled);

  static MonotoneFunction identity(std::size_t grid);
  static MonotoneFunction identity_on(std::span<const double> nodes);

  /// Smallest t with eval(t) == y. Throws OutOfRange when y lies outside
  /// [values.front(), values.back()].
  double eval_inverse(double y) const;

  bool strictly_increasing() const;
  Provenance provenance() const { return provenance_; }

 private:
  Provenance provenance_;
};

MonotoneFunction make_monotone(std::vector<double> nodes,
                               std::vector<double> values);

/// outer ∘ inner, sampled on inner's nodes.
MonotoneFunction compose(const MonotoneFunction& outer,
                         const MonotoneFunction& inner);

/// Inverse of a strictly increasing surjection of [-1, 1]. Without a grid
/// size the result is the exact inverse of the interpolant (nodes and values
/// swapped); with one it is resampled onto a uniform grid of that size.
/// Throws NotInvertible on a plateau or when f(-1) != -1 or f(1) != 1.
MonotoneFunction invert(const MonotoneFunction& f,
                        std::optional<std::size_t> uniform_size = std::nullopt);

/// max over the union of both node sets of |f - g|. Reduction order is the
/// merged node order, so the result is deterministic.
double sup_distance(const SampledFunction& f, const SampledFunction& g);

}  // namespace pconf
