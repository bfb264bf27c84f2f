#include "pconf/pconfig.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "pconf/error.hpp"
#include "pconf/funcspace.hpp"

namespace pconf {
namespace {

constexpr double kPi = std::numbers::pi;

double horner(const std::vector<double>& coeffs, double t) {
  double acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * t + *it;
  return acc;
}

double horner_derivative(const std::vector<double>& coeffs, double t) {
  double acc = 0.0;
  for (std::size_t k = coeffs.size(); k-- > 1;) {
    acc = acc * t + static_cast<double>(k) * coeffs[k];
  }
  return acc;
}

bool all_finite(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

Interval dyadic_interval(int n) {
  return {1.0 - std::ldexp(1.0, -n), 1.0 - std::ldexp(1.0, -(n + 1))};
}

std::string family_name(const FamilySpec& spec) {
  return std::visit(overloaded{
                        [](const StandardFamily&) { return std::string("standard"); },
                        [](const QuadraticFamily&) { return std::string("quadratic"); },
                        [](const PolynomialFamily&) { return std::string("polynomial"); },
                        [](const PerturbedFlatFamily&) { return std::string("perturbed_flat"); },
                    },
                    spec);
}

std::string describe(const FamilySpec& spec) {
  std::ostringstream os;
  std::visit(overloaded{
                 [&](const StandardFamily&) { os << "standard"; },
                 [&](const QuadraticFamily& q) { os << "quadratic(c=" << q.c << ")"; },
                 [&](const PolynomialFamily& p) {
                   os << "polynomial(deg=" << (p.delta1.size() - 1)
                      << (p.quasi ? ", quasi)" : ")");
                 },
                 [&](const PerturbedFlatFamily& f) { os << "perturbed_flat(n=" << f.n << ")"; },
             },
             spec);
  return os.str();
}

MapPair::MapPair(FamilySpec spec) : spec_(std::move(spec)) {
  if (auto* f = std::get_if<PerturbedFlatFamily>(&spec_)) {
    const Interval jn = dyadic_interval(f->n);
    flat_a_ = jn.lo;
    flat_len_ = jn.width();
    flat_m_ = f->shape.phi_width / (2.0 * f->shape.psi_width);
  }
}

MapPair build_family(const FamilySpec& spec) {
  std::visit(overloaded{
                 [](const StandardFamily&) {},
                 [](const QuadraticFamily& q) {
                   if (!std::isfinite(q.c)) throw Error(ErrorCode::kBadSpec, "c must be finite");
                 },
                 [](const PolynomialFamily& p) {
                   if (p.delta1.empty() || !all_finite(p.delta1)) {
                     throw Error(ErrorCode::kBadSpec, "delta1 needs finite coefficients");
                   }
                   if (p.quasi && (p.delta2.empty() || !all_finite(p.delta2))) {
                     throw Error(ErrorCode::kBadSpec, "quasi mode needs delta2 coefficients");
                   }
                   if (!p.quasi && !p.delta2.empty()) {
                     throw Error(ErrorCode::kBadSpec,
                                 "full mode derives delta2 = t - delta1; do not supply it");
                   }
                 },
                 [](const PerturbedFlatFamily& f) {
                   if (f.n < 1 || f.n > 40) throw Error(ErrorCode::kBadSpec, "n must be in [1, 40]");
                   const double w = f.shape.phi_width;
                   const double v = f.shape.psi_width;
                   if (!(w > 0.0 && w <= 0.5)) {
                     throw Error(ErrorCode::kBadSpec, "phi_width must lie in (0, 1/2]");
                   }
                   if (!(v > 0.0 && v <= 0.25)) {
                     throw Error(ErrorCode::kBadSpec, "psi_width must lie in (0, 1/4]");
                   }
                   if (!(w / (2.0 * v) < 0.5)) {
                     throw Error(ErrorCode::kBadSpec,
                                 "shape gives m >= 1/2, so delta1' would reach 1");
                   }
                 },
             },
             spec);
  return MapPair(spec);
}

MapPair standard_pair() { return build_family(StandardFamily{}); }

bool MapPair::quasi() const {
  const auto* p = std::get_if<PolynomialFamily>(&spec_);
  return p != nullptr && p->quasi;
}

std::optional<double> MapPair::flat_point() const {
  if (!std::holds_alternative<PerturbedFlatFamily>(spec_)) return std::nullopt;
  return flat_a_ + 0.5 * flat_len_;
}

std::optional<Interval> MapPair::perturbation_interval() const {
  if (!std::holds_alternative<PerturbedFlatFamily>(spec_)) return std::nullopt;
  return Interval{flat_a_, flat_a_ + flat_len_};
}

double MapPair::flat_offset(double u) const {
  const auto& shape = std::get<PerturbedFlatFamily>(spec_).shape;
  const double v = shape.psi_width;
  const double w = shape.phi_width;
  // ∫₀ᵘ ψ
  double psi_int;
  if (u <= 0.0) {
    psi_int = 0.0;
  } else if (u < v) {
    psi_int = 0.5 * u - v / (4.0 * kPi) * std::sin(2.0 * kPi * u / v);
  } else {
    psi_int = 0.5 * v;
  }
  // ∫₀ᵘ φ
  const double lo = 0.5 - 0.5 * w;
  const double hi = 0.5 + 0.5 * w;
  double phi_int;
  if (u <= lo) {
    phi_int = 0.0;
  } else if (u < hi) {
    phi_int = 0.5 * (u - lo) + w / (4.0 * kPi) * std::sin(2.0 * kPi * (u - 0.5) / w);
  } else {
    phi_int = 0.5 * w;
  }
  return flat_len_ * (flat_m_ * psi_int - 0.5 * phi_int);
}

double MapPair::flat_offset_slope(double u) const {
  const auto& shape = std::get<PerturbedFlatFamily>(spec_).shape;
  const double v = shape.psi_width;
  const double w = shape.phi_width;
  double psi = 0.0;
  if (u > 0.0 && u < v) psi = 0.5 * (1.0 - std::cos(2.0 * kPi * u / v));
  double phi = 0.0;
  if (std::abs(u - 0.5) < 0.5 * w) phi = 0.5 * (1.0 + std::cos(2.0 * kPi * (u - 0.5) / w));
  return flat_m_ * psi - 0.5 * phi;
}

double MapPair::delta1(double t) const {
  return std::visit(
      overloaded{
          [&](const StandardFamily&) { return 0.5 * (t + 1.0); },
          [&](const QuadraticFamily& q) { return 0.5 * (t + 1.0) + q.c * (1.0 - t * t); },
          [&](const PolynomialFamily& p) { return horner(p.delta1, t); },
          [&](const PerturbedFlatFamily&) {
            const double base = 0.5 * (t + 1.0);
            if (t <= flat_a_ || t >= flat_a_ + flat_len_) return base;
            return base + flat_offset((t - flat_a_) / flat_len_);
          },
      },
      spec_);
}

double MapPair::delta2(double t) const {
  if (const auto* p = std::get_if<PolynomialFamily>(&spec_); p && p->quasi) {
    return horner(p->delta2, t);
  }
  if (std::holds_alternative<StandardFamily>(spec_)) return 0.5 * (t - 1.0);
  return t - delta1(t);
}

double MapPair::ddelta1(double t) const {
  return std::visit(
      overloaded{
          [&](const StandardFamily&) { return 0.5; },
          [&](const QuadraticFamily& q) { return 0.5 - 2.0 * q.c * t; },
          [&](const PolynomialFamily& p) { return horner_derivative(p.delta1, t); },
          [&](const PerturbedFlatFamily&) {
            if (t <= flat_a_ || t >= flat_a_ + flat_len_) return 0.5;
            return 0.5 + flat_offset_slope((t - flat_a_) / flat_len_);
          },
      },
      spec_);
}

double MapPair::ddelta2(double t) const {
  if (const auto* p = std::get_if<PolynomialFamily>(&spec_); p && p->quasi) {
    return horner_derivative(p->delta2, t);
  }
  if (std::holds_alternative<StandardFamily>(spec_)) return 0.5;
  return 1.0 - ddelta1(t);
}

double MapPair::flat_join_deviation() const {
  if (!std::holds_alternative<PerturbedFlatFamily>(spec_)) return 0.0;
  return std::max({std::abs(flat_offset(0.0)), std::abs(flat_offset(1.0)),
                   std::abs(flat_offset_slope(0.0)), std::abs(flat_offset_slope(1.0))});
}

std::string_view to_string(Mode m) { return m == Mode::kFull ? "full" : "quasi"; }

std::string_view to_string(Classification c) {
  switch (c) {
    case Classification::kRegular: return "regular";
    case Classification::kQuasiRegular: return "quasi-regular";
    case Classification::kGuided: return "guided";
    case Classification::kInvalid: return "invalid";
  }
  return "invalid";
}

void SetApprox::add(Interval iv, double grid_step) {
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    auto& cur = intervals[i];
    if (iv.lo <= cur.hi && iv.hi >= cur.lo) {
      cur.lo = std::min(cur.lo, iv.lo);
      cur.hi = std::max(cur.hi, iv.hi);
      singleton[i] = cur.width() <= 2.0 * grid_step;
      return;
    }
  }
  auto pos = std::lower_bound(intervals.begin(), intervals.end(), iv,
                              [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  const auto idx = pos - intervals.begin();
  intervals.insert(pos, iv);
  singleton.insert(singleton.begin() + idx, iv.width() <= 2.0 * grid_step);
}

std::pair<SetApprox, SetApprox> guiding_sets(const MapPair& pair, double flat_tol,
                                             std::size_t grid) {
  if (!(flat_tol > 0.0)) throw Error(ErrorCode::kPrecondition, "flat_tol must be positive");
  const auto nodes = uniform_grid(grid);
  const double step = 2.0 / static_cast<double>(grid - 1);
  std::array<SetApprox, 2> sets;
  for (int branch = 1; branch <= 2; ++branch) {
    auto& set = sets[branch - 1];
    bool in_run = false;
    double run_start = 0.0;
    double run_end = 0.0;
    for (double t : nodes) {
      if (pair.ddelta(branch, t) <= flat_tol) {
        if (!in_run) run_start = t;
        in_run = true;
        run_end = t;
      } else if (in_run) {
        set.add({run_start, run_end}, step);
        in_run = false;
      }
    }
    if (in_run) set.add({run_start, run_end}, step);
  }
  if (auto lambda = pair.flat_point()) sets[0].add({*lambda, *lambda}, step);
  return {std::move(sets[0]), std::move(sets[1])};
}

Classification classify(const ValidationReport& r) {
  const bool core = r.derivative_nonneg_ok && r.boundary_ok && r.range_ok;
  if (!core) return Classification::kInvalid;
  if (r.flat_checks) {
    const auto& f = *r.flat_checks;
    if (!(f.single_zero && f.ddelta1_below_one && f.c1_join_ok)) {
      return Classification::kInvalid;
    }
  }
  const bool unguided = r.guiding_set_1.empty() && r.guiding_set_2.empty();
  if (!unguided) return Classification::kGuided;
  const bool additive = r.additivity_checked && r.additivity_ok;
  return additive ? Classification::kRegular : Classification::kQuasiRegular;
}

ValidationReport validate(const MapPair& pair, const ValidateOptions& opts) {
  if (opts.grid < 257) throw Error(ErrorCode::kPrecondition, "validation grid must be >= 257");
  ValidationReport r;
  r.family = describe(pair.spec());
  r.mode = opts.mode;
  r.grid = opts.grid;
  r.tol = opts.tol;
  r.flat_tol = opts.flat_tol;

  const auto nodes = uniform_grid(opts.grid);
  double add_dev = 0.0;
  double dsum_dev = 0.0;
  double min1 = std::numeric_limits<double>::infinity();
  double min2 = min1;
  double max1 = -min1;
  double max2 = -min1;
  bool in_range = true;
  for (double t : nodes) {
    const double d1 = pair.delta1(t);
    const double d2 = pair.delta2(t);
    const double g1 = pair.ddelta1(t);
    const double g2 = pair.ddelta2(t);
    add_dev = std::max(add_dev, std::abs(d1 + d2 - t));
    dsum_dev = std::max(dsum_dev, std::abs(g1 + g2 - 1.0));
    min1 = std::min(min1, g1);
    min2 = std::min(min2, g2);
    max1 = std::max(max1, g1);
    max2 = std::max(max2, g2);
    in_range = in_range && d1 >= -1.0 && d1 <= 1.0 && d2 >= -1.0 && d2 <= 1.0;
  }

  r.additivity_checked = opts.mode == Mode::kFull;
  r.additivity_max_dev = add_dev;
  r.derivative_sum_max_dev = dsum_dev;
  r.additivity_ok = r.additivity_checked && add_dev <= opts.tol && dsum_dev <= opts.tol;

  r.min_ddelta1 = min1;
  r.min_ddelta2 = min2;
  r.max_ddelta1 = max1;
  r.max_ddelta2 = max2;
  r.derivative_nonneg_ok = min1 >= -opts.tol && min2 >= -opts.tol;
  r.rho = std::max(max1, max2);
  r.range_ok = in_range;

  r.boundary = {BoundaryValue{"delta2(-1)", -1.0, pair.delta2(-1.0)},
                BoundaryValue{"delta2(1)", 0.0, pair.delta2(1.0)},
                BoundaryValue{"delta1(-1)", 0.0, pair.delta1(-1.0)},
                BoundaryValue{"delta1(1)", 1.0, pair.delta1(1.0)}};
  r.boundary_ok = std::all_of(r.boundary.begin(), r.boundary.end(), [&](const BoundaryValue& b) {
    return std::abs(b.actual - b.expected) <= opts.tol;
  });

  auto [gs1, gs2] = guiding_sets(pair, opts.flat_tol, opts.grid);
  r.guiding_set_1 = std::move(gs1);
  r.guiding_set_2 = std::move(gs2);

  if (auto lambda = pair.flat_point()) {
    FlatChecks f;
    f.flat_point = *lambda;
    f.jn = *pair.perturbation_interval();
    f.single_zero = r.guiding_set_1.intervals.size() == 1 && r.guiding_set_1.singleton[0] &&
                    r.guiding_set_1.intervals[0].contains(*lambda) &&
                    f.jn.contains_interior(*lambda);
    f.max_ddelta1 = max1;
    f.ddelta1_below_one = max1 < 1.0;
    f.join_deviation = pair.flat_join_deviation();
    f.c1_join_ok = f.join_deviation <= 1e-12;
    r.flat_checks = f;
  }

  r.classification = classify(r);
  return r;
}

}  // namespace pconf
