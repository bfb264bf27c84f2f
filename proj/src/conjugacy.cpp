#include "pconf/conjugacy.hpp"

#include <algorithm>
#include <cmath>

namespace pconf {
namespace {

constexpr double kBoundaryTol = 1e-12;
constexpr std::size_t kMonotoneCheckGrid = 4097;

// Segment index and weight of a fixed abscissa on a fixed node grid, so that
// repeated interpolation of changing node values costs O(1) per point.
struct Stencil {
  std::size_t i = 0;
  double w = 0.0;
};

Stencil locate(std::span<const double> nodes, double t) {
  auto it = std::upper_bound(nodes.begin(), nodes.end(), t);
  std::size_t i = it == nodes.begin() ? 0 : static_cast<std::size_t>(it - nodes.begin()) - 1;
  i = std::min(i, nodes.size() - 2);
  if (t == nodes[i]) return {i, 0.0};
  if (t == nodes[i + 1]) return {i, 1.0};
  return {i, (t - nodes[i]) / (nodes[i + 1] - nodes[i])};
}

double interpolate(std::span<const double> values, const Stencil& s) {
  if (s.w == 0.0) return values[s.i];
  if (s.w == 1.0) return values[s.i + 1];
  return values[s.i] + s.w * (values[s.i + 1] - values[s.i]);
}

struct Anchors {
  std::size_t lo = 0;
  std::size_t mid = 0;
  std::size_t hi = 0;
};

std::optional<Anchors> find_anchors(std::span<const double> nodes) {
  auto it = std::lower_bound(nodes.begin(), nodes.end(), 0.0);
  if (it == nodes.end() || *it != 0.0) return std::nullopt;
  return Anchors{0, static_cast<std::size_t>(it - nodes.begin()), nodes.size() - 1};
}

void pin(std::vector<double>& values, const Anchors& a) {
  values[a.lo] = -1.0;
  values[a.mid] = 0.0;
  values[a.hi] = 1.0;
}

void require_in_C(const SampledFunction& g, const Anchors* anchors) {
  if (anchors == nullptr) throw Error(ErrorCode::kNotInC, "0 is not a node");
  const auto v = g.values();
  if (v[anchors->lo] != -1.0 || v[anchors->mid] != 0.0 || v[anchors->hi] != 1.0) {
    throw Error(ErrorCode::kNotInC, "function does not fix -1, 0, 1");
  }
}

// Pulls the nodes back through the branch inverse once; T then only needs
// the current values at these stencils.
struct Pullback {
  std::vector<Stencil> stencils;
  std::vector<double> signs;
};

Pullback make_pullback(std::span<const double> nodes, const BranchInverse& f) {
  Pullback p;
  p.stencils.reserve(nodes.size());
  p.signs.reserve(nodes.size());
  for (double z : nodes) {
    p.stencils.push_back(locate(nodes, f(z)));
    p.signs.push_back(BranchInverse::sign(z));
  }
  return p;
}

void step(const Pullback& p, std::span<const double> current, std::vector<double>& next,
          const Anchors& anchors) {
  next.resize(current.size());
  for (std::size_t j = 0; j < current.size(); ++j) {
    next[j] = 0.5 * (interpolate(current, p.stencils[j]) + p.signs[j]);
  }
  pin(next, anchors);
}

double node_distance(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace

BranchInverse::BranchInverse(MapPair pair) : pair_(std::move(pair)) {
  const bool boundary = std::abs(pair_.delta2(-1.0) + 1.0) <= kBoundaryTol &&
                        std::abs(pair_.delta2(1.0)) <= kBoundaryTol &&
                        std::abs(pair_.delta1(-1.0)) <= kBoundaryTol &&
                        std::abs(pair_.delta1(1.0) - 1.0) <= kBoundaryTol;
  if (!boundary) {
    throw Error(ErrorCode::kInvalidPair, describe(pair_.spec()) + " violates the boundary pattern");
  }
  const auto grid = uniform_grid(kMonotoneCheckGrid);
  for (int branch = 1; branch <= 2; ++branch) {
    double prev = pair_.delta(branch, grid[0]);
    for (std::size_t i = 1; i < grid.size(); ++i) {
      const double cur = pair_.delta(branch, grid[i]);
      if (!(cur > prev)) {
        throw Error(ErrorCode::kBranchNotInvertible,
                    "delta" + std::to_string(branch) + " not strictly increasing near t = " +
                        std::to_string(grid[i]));
      }
      prev = cur;
    }
  }
}

double BranchInverse::operator()(double z) const {
  if (z <= 0.0) {
    return bisect_increasing([this](double t) { return pair_.delta2(t); }, z, -1.0, 1.0);
  }
  return bisect_increasing([this](double t) { return pair_.delta1(t); }, z, -1.0, 1.0);
}

std::vector<double> orbit_nodes(const MapPair& pair, int depth) {
  std::vector<double> level{-1.0, 0.0, 1.0};
  for (int d = 0; d < depth; ++d) {
    std::vector<double> next;
    next.reserve(2 * level.size() - 1);
    for (double t : level) next.push_back(pair.delta2(t));
    // δ₂(1) = 0 = δ₁(-1): the shared point is emitted once.
    for (std::size_t i = 1; i < level.size(); ++i) next.push_back(pair.delta1(level[i]));
    level = std::move(next);
  }
  return level;
}

std::vector<double> solver_grid(const MapPair& pair, std::size_t size, GridKind kind) {
  if (size < 3 || size % 2 == 0) {
    throw Error(ErrorCode::kPrecondition, "solver grid size must be odd and >= 3");
  }
  auto nodes = uniform_grid(size);
  if (kind == GridKind::kUniform) return nodes;
  int depth = 0;
  while ((std::size_t{2} << (depth + 1)) + 1 <= size) ++depth;
  auto orbit = orbit_nodes(pair, depth);
  nodes.insert(nodes.end(), orbit.begin(), orbit.end());
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  nodes.front() = -1.0;
  nodes.back() = 1.0;
  return nodes;
}

MonotoneFunction apply_T(const MonotoneFunction& g, const MapPair& pair) {
  const auto anchors = find_anchors(g.nodes());
  require_in_C(g, anchors ? &*anchors : nullptr);
  const BranchInverse f(pair);
  const auto pull = make_pullback(g.nodes(), f);
  std::vector<double> next;
  step(pull, g.values(), next, *anchors);
  return MonotoneFunction({g.nodes().begin(), g.nodes().end()}, std::move(next),
                          Provenance::kSolver);
}

Conjugation conjugate_to_standard(const MapPair& pair, const SolverOptions& opts) {
  if (!(opts.tol > 0.0)) throw Error(ErrorCode::kPrecondition, "tol must be positive");
  const BranchInverse f(pair);
  const auto nodes = solver_grid(pair, opts.grid, opts.grid_kind);
  const auto anchors = *find_anchors(nodes);

  std::vector<double> current;
  if (opts.initial) {
    current.reserve(nodes.size());
    for (double t : nodes) current.push_back(opts.initial->eval(t));
    require_in_C(SampledFunction(nodes, current), &anchors);
  } else {
    current = nodes;
  }

  const auto pull = make_pullback(nodes, f);
  ConvergenceLog log;
  log.grid = opts.grid;
  log.nodes = nodes.size();
  log.tol = opts.tol;

  std::vector<double> next;
  bool converged = false;
  while (log.iterations < opts.max_iter) {
    step(pull, current, next, anchors);
    const double d = node_distance(next, current);
    if (!log.distances.empty() && log.distances.back() > 0.0) {
      log.ratios.push_back(d / log.distances.back());
    }
    log.distances.push_back(d);
    ++log.iterations;
    current.swap(next);
    if (d <= opts.tol) {
      converged = true;
      break;
    }
  }

  step(pull, current, next, anchors);
  log.residual = node_distance(next, current);
  if (!converged) throw MaxIterExceeded(std::move(log));

  MonotoneFunction h(nodes, std::move(current), Provenance::kSolver);
  log.max_local_variation = h.max_local_variation();
  log.strictly_increasing = h.strictly_increasing();
  return {std::move(h), std::move(log)};
}

PairConjugation conjugate(const MapPair& source, const MapPair& target,
                          const SolverOptions& opts) {
  auto src = conjugate_to_standard(source, opts);
  auto tgt = conjugate_to_standard(target, opts);
  if (!tgt.h.strictly_increasing()) {
    throw Error(ErrorCode::kNotInvertible,
                "target conjugation has a plateau at grid resolution");
  }
  // Both solutions land in the standard coordinate u. Every u taken at a
  // node of either one becomes a node pair (h_s⁻¹(u), h_t⁻¹(u)), so the
  // reverse conjugation is exactly the node-swapped inverse of this one.
  std::vector<double> u(src.h.values().begin(), src.h.values().end());
  u.insert(u.end(), tgt.h.values().begin(), tgt.h.values().end());
  std::sort(u.begin(), u.end());
  u.erase(std::unique(u.begin(), u.end()), u.end());
  std::vector<double> nodes;
  std::vector<double> values;
  nodes.reserve(u.size());
  values.reserve(u.size());
  for (double level : u) {
    const double x = src.h.eval_inverse(level);
    const double y = tgt.h.eval_inverse(level);
    const bool anchor = level == -1.0 || level == 0.0 || level == 1.0;
    while (!nodes.empty() && (x <= nodes.back() || y <= values.back())) {
      if (!anchor) break;
      nodes.pop_back();
      values.pop_back();
    }
    if (!nodes.empty() && (x <= nodes.back() || y <= values.back())) continue;
    nodes.push_back(x);
    values.push_back(y);
  }
  pin(values, *find_anchors(nodes));
  MonotoneFunction pinned(std::move(nodes), std::move(values), Provenance::kComposition);
  return {std::move(pinned), std::move(src.log), std::move(tgt.log)};
}

OrbitPoint orbit_oracle(const MapPair& pair, const Word& word) {
  if (word.base != -1.0 && word.base != 0.0 && word.base != 1.0) {
    throw Error(ErrorCode::kPrecondition, "word base must be -1, 0 or 1");
  }
  OrbitPoint p{word.base, word.base};
  for (auto it = word.letters.rbegin(); it != word.letters.rend(); ++it) {
    if (*it == 1) {
      p.abscissa = pair.delta1(p.abscissa);
      p.ordinate = 0.5 * (p.ordinate + 1.0);
    } else if (*it == 2) {
      p.abscissa = pair.delta2(p.abscissa);
      p.ordinate = 0.5 * (p.ordinate - 1.0);
    } else {
      throw Error(ErrorCode::kPrecondition, "word letters must be 1 or 2");
    }
  }
  return p;
}

std::vector<Word> all_words(int max_len, std::span<const double> bases) {
  std::vector<Word> words;
  for (double base : bases) {
    for (int len = 0; len <= max_len; ++len) {
      for (std::size_t code = 0; code < (std::size_t{1} << len); ++code) {
        Word w;
        w.base = base;
        w.letters.resize(static_cast<std::size_t>(len));
        for (int k = 0; k < len; ++k) w.letters[static_cast<std::size_t>(k)] = ((code >> k) & 1U) ? 2 : 1;
        words.push_back(std::move(w));
      }
    }
  }
  return words;
}

ConjugacyResidual verify_conjugacy(const MonotoneFunction& h, const MapPair& source,
                                   const MapPair& target, std::size_t grid) {
  std::vector<double> points;
  if (grid == 0) {
    points.assign(h.nodes().begin(), h.nodes().end());
  } else {
    points = uniform_grid(grid);
  }
  ConjugacyResidual r;
  for (double t : points) {
    const double ht = h.eval(t);
    r.branch1 = std::max(r.branch1, std::abs(h.eval(source.delta1(t)) - target.delta1(ht)));
    r.branch2 = std::max(r.branch2, std::abs(h.eval(source.delta2(t)) - target.delta2(ht)));
  }
  r.anchor_deviation = {std::abs(h.eval(-1.0) + 1.0), std::abs(h.eval(0.0)),
                        std::abs(h.eval(1.0) - 1.0)};
  r.max_residual = std::max({r.branch1, r.branch2, r.anchor_deviation[0],
                             r.anchor_deviation[1], r.anchor_deviation[2]});
  return r;
}

}  // namespace pconf
