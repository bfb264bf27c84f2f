#include "pconf/cauchy.hpp"

#include <algorithm>
#include <cmath>

#include "pconf/error.hpp"

namespace pconf {
namespace {

std::vector<double> sample_points(const SampledFunction& f, std::size_t grid) {
  if (grid == 0) return {f.nodes().begin(), f.nodes().end()};
  return uniform_grid(grid);
}

bool same_maps(const MapPair& a, const MapPair& b, std::size_t grid) {
  for (double t : uniform_grid(grid)) {
    if (a.delta1(t) != b.delta1(t) || a.delta2(t) != b.delta2(t)) return false;
  }
  return true;
}

bool values_increasing(std::span<const double> v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] > v[i - 1])) return false;
  }
  return true;
}

}  // namespace

double fe_residual(const SampledFunction& f, const MapPair& pair, std::size_t grid) {
  double r = 0.0;
  for (double t : sample_points(f, grid)) {
    r = std::max(r, std::abs(f.eval(t) - f.eval(pair.delta1(t)) - f.eval(pair.delta2(t))));
  }
  return r;
}

double nonlinearity_gap(const SampledFunction& f, LinearFit fit) {
  const auto t = f.nodes();
  const auto v = f.values();
  double c = v.back();
  if (fit == LinearFit::kLeastSquares) {
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      num += t[i] * v[i];
      den += t[i] * t[i];
    }
    c = num / den;
  }
  double gap = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) gap = std::max(gap, std::abs(v[i] - c * t[i]));
  return gap;
}

SolutionCertificate solve_nonlinear(const MapPair& pair, const SolveOptions& opts) {
  ValidateOptions vopts;
  vopts.mode = pair.quasi() ? Mode::kQuasi : Mode::kFull;
  const auto report = validate(pair, vopts);
  if (report.classification == Classification::kInvalid) {
    throw Error(ErrorCode::kInvalidPair, describe(pair.spec()) + " is not a valid configuration");
  }

  FamilySpec target_spec = StandardFamily{};
  if (opts.target) {
    target_spec = *opts.target;
  } else if (same_maps(pair, standard_pair(), opts.solver.grid)) {
    target_spec = QuadraticFamily{0.2};
  }
  const MapPair target = build_family(target_spec);

  std::vector<std::string> warnings;
  if (report.classification == Classification::kGuided) {
    warnings.emplace_back("guided pair: the conjugation is not guaranteed to be injective");
  }

  if (same_maps(pair, target, opts.solver.grid)) {
    warnings.emplace_back("DegenerateChoice: source equals target, only the linear solution results");
    auto id = MonotoneFunction::identity_on(solver_grid(pair, opts.solver.grid, opts.solver.grid_kind));
    SolutionCertificate cert{.solution = id};
    cert.fe_residual = fe_residual(id, pair);
    cert.fe_bound = cert.fe_residual;
    cert.nonlinearity_gap = nonlinearity_gap(id);
    cert.source = describe(pair.spec());
    cert.target = describe(target.spec());
    cert.degenerate = true;
    cert.warnings = std::move(warnings);
    return cert;
  }

  const bool to_standard = std::holds_alternative<StandardFamily>(target_spec);
  MonotoneFunction h = MonotoneFunction::identity(3);
  ConvergenceLog log;
  if (to_standard) {
    auto c = conjugate_to_standard(pair, opts.solver);
    h = std::move(c.h);
    log = std::move(c.log);
  } else {
    auto c = conjugate(pair, target, opts.solver);
    h = std::move(c.h);
    log = std::move(c.source_log);
  }

  SolutionCertificate cert{.solution = h};
  cert.fe_residual = fe_residual(h, pair);
  cert.conjugacy_residual = verify_conjugacy(h, pair, target).max_residual;
  double target_additivity = 0.0;
  for (double y : h.values()) {
    target_additivity = std::max(target_additivity,
                                 std::abs(target.delta1(y) + target.delta2(y) - y));
  }
  cert.fe_bound = 2.0 * cert.conjugacy_residual + target_additivity;
  cert.interpolation_slack = h.max_local_variation();
  cert.nonlinearity_gap = nonlinearity_gap(h);
  cert.source = describe(pair.spec());
  cert.target = describe(target.spec());
  if (!h.strictly_increasing()) {
    warnings.emplace_back("solution has a plateau at grid resolution");
  }
  cert.warnings = std::move(warnings);
  cert.log = std::move(log);
  return cert;
}

InducedSystem induced_system(const MonotoneFunction& f, const MapPair& pair, std::size_t grid) {
  if (!f.strictly_increasing()) {
    throw Error(ErrorCode::kNotStrictlyIncreasing, "induced system needs an injective f");
  }
  if (f.eval(-1.0) != -1.0 || f.eval(0.0) != 0.0 || f.eval(1.0) != 1.0) {
    throw Error(ErrorCode::kAnchorsNotFixed, "f must fix -1, 0 and 1");
  }
  std::vector<double> ys;
  std::vector<double> xs;
  if (grid == 0) {
    ys.assign(f.values().begin(), f.values().end());
    xs.assign(f.nodes().begin(), f.nodes().end());
  } else {
    ys = uniform_grid(grid);
    xs.reserve(ys.size());
    for (double y : ys) xs.push_back(f.eval_inverse(y));
  }
  std::vector<double> s1;
  std::vector<double> s2;
  s1.reserve(xs.size());
  s2.reserve(xs.size());
  for (double x : xs) {
    s1.push_back(f.eval(pair.delta1(x)));
    s2.push_back(f.eval(pair.delta2(x)));
  }

  InducedVerification v;
  for (std::size_t i = 0; i < ys.size(); ++i) {
    v.additivity_max_dev = std::max(v.additivity_max_dev, std::abs(s1[i] + s2[i] - ys[i]));
  }
  v.strictly_increasing = values_increasing(s1) && values_increasing(s2);

  SampledFunction sigma1(ys, std::move(s1));
  SampledFunction sigma2(std::move(ys), std::move(s2));
  v.boundary = {BoundaryValue{"sigma2(-1)", -1.0, sigma2.eval(-1.0)},
                BoundaryValue{"sigma2(1)", 0.0, sigma2.eval(1.0)},
                BoundaryValue{"sigma1(-1)", 0.0, sigma1.eval(-1.0)},
                BoundaryValue{"sigma1(1)", 1.0, sigma1.eval(1.0)}};
  for (const auto& b : v.boundary) {
    v.boundary_max_dev = std::max(v.boundary_max_dev, std::abs(b.actual - b.expected));
  }
  return {std::move(sigma1), std::move(sigma2), v};
}

}  // namespace pconf
