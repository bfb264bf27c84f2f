#include "pconf/funcspace.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pconf/error.hpp"

namespace pconf {

std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::kSampled: return "sampled";
    case Provenance::kIdentity: return "identity";
    case Provenance::kSolver: return "solver";
    case Provenance::kComposition: return "composition";
    case Provenance::kInverse: return "inverse";
  }
  return "sampled";
}

std::vector<double> uniform_grid(std::size_t n) {
  if (n < 2) throw Error(ErrorCode::kBadDomain, "grid needs at least 2 nodes");
  std::vector<double> nodes(n);
  const double denom = static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    nodes[i] = -1.0 + 2.0 * static_cast<double>(i) / denom;
  }
  nodes.front() = -1.0;
  nodes.back() = 1.0;
  return nodes;
}

SampledFunction::SampledFunction(std::vector<double> nodes,
                                 std::vector<double> values)
    : nodes_(std::move(nodes)), values_(std::move(values)) {
  if (nodes_.size() != values_.size()) {
    throw Error(ErrorCode::kBadDomain, "nodes and values differ in length");
  }
  if (nodes_.size() < 2) {
    throw Error(ErrorCode::kBadDomain, "need at least two nodes");
  }
  if (nodes_.front() != -1.0 || nodes_.back() != 1.0) {
    throw Error(ErrorCode::kBadDomain, "nodes must span [-1, 1]");
  }
  for (std::size_t i = 1; i < nodes_.size(); ++i) {
    if (!(nodes_[i] > nodes_[i - 1])) {
      throw Error(ErrorCode::kBadDomain,
                  "nodes not strictly increasing at index " + std::to_string(i));
    }
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kBadDomain, "non-finite value");
  }
}

std::size_t SampledFunction::segment(double t) const {
  // Index i with nodes[i] <= t < nodes[i+1]; the last segment is closed.
  auto it = std::upper_bound(nodes_.begin(), nodes_.end(), t);
  auto i = static_cast<std::size_t>(it - nodes_.begin());
  if (i == 0) return 0;
  return std::min(i - 1, nodes_.size() - 2);
}

double SampledFunction::eval(double t) const {
  if (!(t >= -1.0 && t <= 1.0)) {
    throw Error(ErrorCode::kOutOfDomain, "t = " + std::to_string(t));
  }
  const std::size_t i = segment(t);
  const double x0 = nodes_[i];
  const double x1 = nodes_[i + 1];
  if (t == x0) return values_[i];
  if (t == x1) return values_[i + 1];
  const double v0 = values_[i];
  const double v1 = values_[i + 1];
  return v0 + (t - x0) / (x1 - x0) * (v1 - v0);
}

double SampledFunction::max_node_gap() const {
  double gap = 0.0;
  for (std::size_t i = 1; i < nodes_.size(); ++i) {
    gap = std::max(gap, nodes_[i] - nodes_[i - 1]);
  }
  return gap;
}

double SampledFunction::max_local_variation() const {
  double var = 0.0;
  for (std::size_t i = 1; i < values_.size(); ++i) {
    var = std::max(var, std::abs(values_[i] - values_[i - 1]));
  }
  return var;
}

MonotoneFunction::MonotoneFunction(std::vector<double> nodes,
                                   std::vector<double> values,
                                   Provenance provenance)
    : SampledFunction(std::move(nodes), std::move(values)),
      provenance_(provenance) {
  for (std::size_t i = 1; i < values_.size(); ++i) {
    if (values_[i] < values_[i - 1]) {
      throw Error(ErrorCode::kNonMonotoneInput,
                  "value decreases at node " + std::to_string(nodes_[i]));
    }
  }
  if (values_.front() < -1.0 || values_.back() > 1.0) {
    throw Error(ErrorCode::kBadDomain, "values leave [-1, 1]");
  }
}

MonotoneFunction MonotoneFunction::identity(std::size_t grid) {
  auto nodes = uniform_grid(grid);
  auto values = nodes;
  return MonotoneFunction(std::move(nodes), std::move(values),
                          Provenance::kIdentity);
}

MonotoneFunction MonotoneFunction::identity_on(std::span<const double> nodes) {
  std::vector<double> n(nodes.begin(), nodes.end());
  auto v = n;
  return MonotoneFunction(std::move(n), std::move(v), Provenance::kIdentity);
}

double MonotoneFunction::eval_inverse(double y) const {
  if (!(y >= values_.front() && y <= values_.back())) {
    throw Error(ErrorCode::kOutOfRange, "y = " + std::to_string(y));
  }
  auto it = std::lower_bound(values_.begin(), values_.end(), y);
  auto i = static_cast<std::size_t>(it - values_.begin());
  if (i == 0 || values_[i] == y) return nodes_[i];
  const double v0 = values_[i - 1];
  const double v1 = values_[i];
  const double x0 = nodes_[i - 1];
  const double x1 = nodes_[i];
  return x0 + (y - v0) / (v1 - v0) * (x1 - x0);
}

bool MonotoneFunction::strictly_increasing() const {
  for (std::size_t i = 1; i < values_.size(); ++i) {
    if (!(values_[i] > values_[i - 1])) return false;
  }
  return true;
}

MonotoneFunction make_monotone(std::vector<double> nodes,
                               std::vector<double> values) {
  return MonotoneFunction(std::move(nodes), std::move(values));
}

MonotoneFunction compose(const MonotoneFunction& outer,
                         const MonotoneFunction& inner) {
  std::vector<double> values;
  values.reserve(inner.size());
  for (double y : inner.values()) {
    if (y < -1.0 || y > 1.0) {
      throw Error(ErrorCode::kRangeMismatch, "inner value outside [-1, 1]");
    }
    values.push_back(outer.eval(y));
  }
  return MonotoneFunction({inner.nodes().begin(), inner.nodes().end()},
                          std::move(values), Provenance::kComposition);
}

MonotoneFunction invert(const MonotoneFunction& f,
                        std::optional<std::size_t> uniform_size) {
  const auto v = f.values();
  if (v.front() != -1.0 || v.back() != 1.0) {
    throw Error(ErrorCode::kNotInvertible, "range is not all of [-1, 1]");
  }
  if (!f.strictly_increasing()) {
    throw Error(ErrorCode::kNotInvertible, "plateau detected");
  }
  if (!uniform_size) {
    return MonotoneFunction({v.begin(), v.end()},
                            {f.nodes().begin(), f.nodes().end()},
                            Provenance::kInverse);
  }
  auto nodes = uniform_grid(*uniform_size);
  std::vector<double> values;
  values.reserve(nodes.size());
  for (double y : nodes) values.push_back(f.eval_inverse(y));
  return MonotoneFunction(std::move(nodes), std::move(values),
                          Provenance::kInverse);
}

double sup_distance(const SampledFunction& f, const SampledFunction& g) {
  const auto a = f.nodes();
  const auto b = g.nodes();
  double dist = 0.0;
  if (std::equal(a.begin(), a.end(), b.begin(), b.end())) {
    const auto fv = f.values();
    const auto gv = g.values();
    for (std::size_t i = 0; i < fv.size(); ++i) {
      dist = std::max(dist, std::abs(fv[i] - gv[i]));
    }
    return dist;
  }
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() || j < b.size()) {
    double t;
    if (j == b.size() || (i < a.size() && a[i] < b[j])) {
      t = a[i++];
    } else if (i == a.size() || b[j] < a[i]) {
      t = b[j++];
    } else {
      t = a[i++];
      ++j;
    }
    dist = std::max(dist, std::abs(f.eval(t) - g.eval(t)));
  }
  return dist;
}

}  // namespace pconf
