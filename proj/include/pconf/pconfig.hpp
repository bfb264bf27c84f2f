#pragma once

// P-configurations: pairs of maps (δ₁, δ₂) on [-1, 1] with δ₁' + δ₂' = 1,
// δᵢ' >= 0 and the boundary pattern δ₂(-1) = -1, δ₂(1) = δ₁(-1) = 0,
// δ₁(1) = 1. Quasi configurations drop the additivity condition.

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace pconf {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double width() const { return hi - lo; }
  bool contains(double t) const { return t >= lo && t <= hi; }
  bool contains_interior(double t) const { return t > lo && t < hi; }
};

/// Jₙ = [1 - 2⁻ⁿ, 1 - 2⁻ⁿ⁻¹].
Interval dyadic_interval(int n);

struct StandardFamily {};

/// δ₁(t) = (t+1)/2 + c(1 - t²), δ₂(t) = t - δ₁(t).
struct QuadraticFamily {
  double c = 0.0;
};

/// Coefficients in ascending powers of t. In full mode δ₂ is t - δ₁ and
/// delta2 must be empty; quasi mode requires both.
struct PolynomialFamily {
  std::vector<double> delta1;
  std::vector<double> delta2;
  bool quasi = false;
};

// Shape of the flat-point perturbation on Jₙ, in the local coordinate
// u ∈ [0, 1]: δ₁' = 1/2 - φ(u)/2 + m·ψ(u), where φ is a cos² bump of width
// phi_width centred at u = 1/2 (φ = 1 only at the centre) and ψ a cos² bump
// on [0, psi_width]. m = phi_width / (2·psi_width) restores ∫δ₁' and must be
// below 1/2 so that δ₁' stays below 1.
struct FlatShape {
  double phi_width = 0.125;
  double psi_width = 0.25;
};

struct PerturbedFlatFamily {
  int n = 1;
  FlatShape shape;
};

using FamilySpec = std::variant<StandardFamily, QuadraticFamily,
                                PolynomialFamily, PerturbedFlatFamily>;

std::string family_name(const FamilySpec& spec);
/// Short human-readable label, e.g. "quadratic(c=0.2)".
std::string describe(const FamilySpec& spec);

class MapPair {
 public:
  double delta1(double t) const;
  double delta2(double t) const;
  double ddelta1(double t) const;
  double ddelta2(double t) const;

  /// branch ∈ {1, 2}.
  double delta(int branch, double t) const {
    return branch == 1 ? delta1(t) : delta2(t);
  }
  double ddelta(int branch, double t) const {
    return branch == 1 ? ddelta1(t) : ddelta2(t);
  }

  const FamilySpec& spec() const { return spec_; }
  bool quasi() const;

  /// Analytic zero of δ₁' for perturbed_flat families.
  std::optional<double> flat_point() const;
  /// Jₙ for perturbed_flat families.
  std::optional<Interval> perturbation_interval() const;
  /// Value and derivative mismatch of the perturbation formula against the
  /// affine map at the two edges of Jₙ (zero for other families).
  double flat_join_deviation() const;

  friend MapPair build_family(const FamilySpec& spec);

 private:
  explicit MapPair(FamilySpec spec);

  // Offset of δ₁ from (t+1)/2 on Jₙ and its derivative, in local coordinate.
  double flat_offset(double u) const;
  double flat_offset_slope(double u) const;

  FamilySpec spec_;
  // perturbed_flat parameters
  double flat_a_ = 0.0;
  double flat_len_ = 0.0;
  double flat_m_ = 0.0;
};

/// Throws BadSpec on a malformed descriptor.
MapPair build_family(const FamilySpec& spec);

/// The affine model σ₁(t) = (t+1)/2, σ₂(t) = (t-1)/2.
MapPair standard_pair();

enum class Mode { kFull, kQuasi };
enum class Classification { kRegular, kQuasiRegular, kGuided, kInvalid };

std::string_view to_string(Mode m);
std::string_view to_string(Classification c);

struct SetApprox {
  std::vector<Interval> intervals;
  /// Per interval: width <= 2 grid steps.
  std::vector<bool> singleton;

  bool empty() const { return intervals.empty(); }
  void add(Interval iv, double grid_step);
};

struct BoundaryValue {
  std::string name;
  double expected = 0.0;
  double actual = 0.0;
};

struct FlatChecks {
  double flat_point = 0.0;
  Interval jn;
  bool single_zero = false;
  double max_ddelta1 = 0.0;
  bool ddelta1_below_one = false;
  double join_deviation = 0.0;
  bool c1_join_ok = false;
};

struct ValidateOptions {
  Mode mode = Mode::kFull;
  std::size_t grid = 4097;
  double tol = 1e-12;
  double flat_tol = 1e-8;
};

struct ValidationReport {
  std::string family;
  Mode mode = Mode::kFull;
  std::size_t grid = 0;
  double tol = 0.0;
  double flat_tol = 0.0;

  bool additivity_checked = false;
  bool additivity_ok = false;
  double additivity_max_dev = 0.0;      // |δ₁ + δ₂ - t|
  double derivative_sum_max_dev = 0.0;  // |δ₁' + δ₂' - 1|

  bool derivative_nonneg_ok = false;
  double min_ddelta1 = 0.0;
  double min_ddelta2 = 0.0;
  double max_ddelta1 = 0.0;
  double max_ddelta2 = 0.0;

  bool boundary_ok = false;
  std::array<BoundaryValue, 4> boundary;

  bool range_ok = false;  // δᵢ([-1, 1]) ⊆ [-1, 1] on the grid

  double rho = 0.0;
  SetApprox guiding_set_1;
  SetApprox guiding_set_2;
  std::optional<FlatChecks> flat_checks;

  Classification classification = Classification::kInvalid;
};

/// Throws Precondition if grid < 257. Invalid configurations are reported
/// through the classification, never thrown.
ValidationReport validate(const MapPair& pair, const ValidateOptions& opts = {});

/// Maximal runs of grid points with δᵢ' <= flat_tol, plus the analytic flat
/// point of perturbed_flat families.
std::pair<SetApprox, SetApprox> guiding_sets(const MapPair& pair,
                                             double flat_tol = 1e-8,
                                             std::size_t grid = 4097);

Classification classify(const ValidationReport& report);

}  // namespace pconf
