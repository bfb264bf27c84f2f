#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "pconf/conjugacy.hpp"
#include "pconf/error.hpp"

using namespace pconf;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected pconf::Error");
  return ErrorCode::kPrecondition;
}

const MapPair& quad02() {
  static const MapPair p = build_family(QuadraticFamily{0.2});
  return p;
}

const Conjugation& quad02_solution() {
  static const Conjugation c = conjugate_to_standard(quad02());
  return c;
}

}  // namespace

TEST_CASE("bisect_increasing") {
  auto cube = [](double x) { return x * x * x; };
  CHECK(bisect_increasing(cube, 0.125, -1.0, 1.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(bisect_increasing(cube, -2.0, -1.0, 1.0) == -1.0);
  CHECK(bisect_increasing(cube, 1.0, -1.0, 1.0) == 1.0);
}

TEST_CASE("branch inverse agrees with the closed form") {
  BranchInverse f(quad02());
  testing::QuadraticInverse inv{0.2L};
  for (double z = -1.0; z <= 1.0; z += 1.0 / 64) {
    const double expected = static_cast<double>(z <= 0 ? inv.inv2(z) : inv.inv1(z));
    CHECK(std::abs(f(z) - expected) <= 1e-12);
  }
  CHECK(f(0.0) == 1.0);
  CHECK(BranchInverse::sign(0.0) == -1.0);
  CHECK(BranchInverse::sign(1e-300) == 1.0);

  CHECK(code_of([] { BranchInverse b(build_family(PolynomialFamily{.delta1 = {0.45, 0.5}})); }) ==
        ErrorCode::kInvalidPair);
  // δ₂ decreasing near -1
  CHECK(code_of([] { BranchInverse b(build_family(QuadraticFamily{0.3})); }) ==
        ErrorCode::kBranchNotInvertible);
}

TEST_CASE("orbit nodes and solver grid") {
  auto nodes = orbit_nodes(standard_pair(), 3);
  CHECK(nodes.size() == 17);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    CHECK(nodes[i] == doctest::Approx(-1.0 + 0.125 * static_cast<double>(i)));
  }
  auto g = solver_grid(quad02(), 4097, GridKind::kDynamic);
  CHECK(std::is_sorted(g.begin(), g.end()));
  CHECK(std::adjacent_find(g.begin(), g.end()) == g.end());
  CHECK(std::binary_search(g.begin(), g.end(), 0.0));
  CHECK(std::binary_search(g.begin(), g.end(), 0.7));
  CHECK(solver_grid(quad02(), 257, GridKind::kUniform).size() == 257);
  CHECK(code_of([&] { solver_grid(quad02(), 256, GridKind::kUniform); }) ==
        ErrorCode::kPrecondition);
}

TEST_CASE("apply_T") {
  SUBCASE("identity is fixed for the standard pair") {
    auto id = MonotoneFunction::identity(257);
    auto t = apply_T(id, standard_pair());
    CHECK(sup_distance(t, id) <= 1e-15);
  }
  SUBCASE("value at δ₁(0) for quadratic(0.2)") {
    auto id = MonotoneFunction::identity_on(solver_grid(quad02(), 257, GridKind::kDynamic));
    auto t = apply_T(id, quad02());
    CHECK(t.eval(0.7) == doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("rejects functions outside the space") {
    auto g = make_monotone({-1, 0, 1}, {-1, 0.1, 1});
    CHECK(code_of([&] { apply_T(g, quad02()); }) == ErrorCode::kNotInC);
    auto no_zero = make_monotone({-1, 0.5, 1}, {-1, 0.5, 1});
    CHECK(code_of([&] { apply_T(no_zero, quad02()); }) == ErrorCode::kNotInC);
  }
  SUBCASE("contraction and monotonicity on random inputs") {
    std::mt19937_64 rng(42);
    static const MapPair neg = build_family(QuadraticFamily{-0.2});
    static const MapPair flat = build_family(PerturbedFlatFamily{.n = 2});
    for (const MapPair* pair : {&quad02(), &neg, &flat}) {
      auto nodes = solver_grid(*pair, 257, GridKind::kUniform);
      const double slack = 2.0 / 256.0;
      for (int trial = 0; trial < 30; ++trial) {
        auto g1 = testing::random_admissible(nodes, rng);
        auto g2 = testing::random_admissible(nodes, rng);
        auto t1 = apply_T(g1, *pair);
        auto t2 = apply_T(g2, *pair);
        CHECK(sup_distance(t1, t2) <= 0.5 * sup_distance(g1, g2) + slack);
        const auto v = t1.values();
        for (std::size_t i = 1; i < v.size(); ++i) REQUIRE(v[i] >= v[i - 1]);
        CHECK(t1.eval(-1.0) == -1.0);
        CHECK(t1.eval(0.0) == 0.0);
        CHECK(t1.eval(1.0) == 1.0);
      }
    }
  }
}

TEST_CASE("conjugate_to_standard") {
  SUBCASE("standard gives the identity") {
    auto [h, log] = conjugate_to_standard(standard_pair());
    CHECK(sup_distance(h, MonotoneFunction::identity_on(h.nodes())) <= 1e-15);
  }
  SUBCASE("quadratic(0.2)") {
    const auto& [h, log] = quad02_solution();
    // exact up to the stopping tolerance
    CHECK(std::abs(h.eval(0.7) - 0.5) <= 1e-9);
    CHECK(h.eval(-1.0) == -1.0);
    CHECK(h.eval(0.0) == 0.0);
    CHECK(h.eval(1.0) == 1.0);
    CHECK(h.strictly_increasing());
    CHECK(log.residual <= log.tol);
    CHECK(log.strictly_increasing);
    // geometric rate 1/2 from d₀
    const double expected = std::ceil(std::log2(log.distances.front() / log.tol)) + 1;
    CHECK(std::abs(static_cast<double>(log.iterations) - expected) <= 2.0);
    for (double r : log.ratios) CHECK(r <= 0.5 + 1e-3);
    for (std::size_t i = 2; i < log.distances.size(); ++i) {
      CHECK(log.distances[i] <= log.distances[i - 1]);
    }
  }
  SUBCASE("matches the itinerary oracle at arbitrary points") {
    const auto& h = quad02_solution().h;
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 2000; ++i) {
      const double x = u(rng);
      worst = std::max(worst, std::abs(h.eval(x) - testing::itinerary_conjugation(0.2, x)));
    }
    // interpolation between orbit nodes; the uniform-grid error is ~3e-2
    CHECK(worst <= 2.0 * h.max_local_variation());
    const auto nodes = h.nodes();
    double at_nodes = 0.0;
    for (std::size_t i = 0; i < nodes.size(); i += 7) {
      at_nodes = std::max(at_nodes,
                          std::abs(h.values()[i] - testing::itinerary_conjugation(0.2, nodes[i])));
    }
    CHECK(at_nodes <= 1e-3);
  }
  SUBCASE("uniqueness from a different start") {
    auto start = make_monotone({-1, 0, 0.5, 1}, {-1, 0, 0.25, 1});
    auto other = conjugate_to_standard(quad02(), {.initial = start});
    CHECK(sup_distance(other.h, quad02_solution().h) <= 2e-10);
  }
  SUBCASE("MaxIterExceeded carries the partial log") {
    try {
      conjugate_to_standard(quad02(), {.max_iter = 5});
      FAIL("expected MaxIterExceeded");
    } catch (const MaxIterExceeded& e) {
      CHECK(e.code() == ErrorCode::kMaxIterExceeded);
      CHECK(e.log().iterations == 5);
      CHECK(e.log().distances.size() == 5);
    }
  }
  SUBCASE("uniform grid converges too") {
    auto [h, log] = conjugate_to_standard(quad02(), {.grid = 1025, .grid_kind = GridKind::kUniform});
    CHECK(log.nodes == 1025);
    CHECK(h.eval(0.0) == 0.0);
    CHECK(log.residual <= log.tol);
  }
  SUBCASE("flat-point family still converges") {
    auto [h, log] = conjugate_to_standard(build_family(PerturbedFlatFamily{.n = 2}));
    CHECK(log.residual <= log.tol);
    CHECK(h.eval(0.75) == doctest::Approx(0.75).epsilon(1e-9));
  }
}

TEST_CASE("conjugate between two pairs") {
  auto neg = build_family(QuadraticFamily{-0.2});
  SUBCASE("reverse direction is the node swap") {
    auto ab = conjugate(quad02(), neg).h;
    auto ba = conjugate(neg, quad02()).h;
    REQUIRE(ab.size() == ba.size());
    for (std::size_t i = 0; i < ab.size(); ++i) {
      CHECK(ab.nodes()[i] == ba.values()[i]);
      CHECK(ab.values()[i] == ba.nodes()[i]);
    }
  }
  SUBCASE("self conjugation is the identity") {
    auto c = conjugate(quad02(), quad02());
    CHECK(sup_distance(c.h, MonotoneFunction::identity_on(c.h.nodes())) <= 2e-10);
  }
  SUBCASE("value at δ₁(0)") {
    auto c = conjugate(quad02(), neg);
    CHECK(neg.delta1(0.0) == doctest::Approx(0.3));
    // the target's inverse is only Hölder ~0.15 at 1/2, so the stopping
    // tolerance of the source solve is amplified up to the node spacing
    CHECK(std::abs(c.h.eval(0.7) - 0.3) <= 2e-3);
    // h is only Hölder ~0.045 at ±1 (0.3 · 0.15); the worst residual sits in
    // the last cell before an endpoint
    CHECK(verify_conjugacy(c.h, quad02(), neg).max_residual <= 0.05);
  }
  SUBCASE("standard to quadratic inverts the forward conjugation") {
    auto c = conjugate(standard_pair(), quad02());
    const auto& h = quad02_solution().h;
    CHECK(std::abs(c.h.eval(0.5) - 0.7) <= 1e-6);
    double worst = 0.0;
    for (std::size_t i = 0; i < h.size(); i += 5) {
      worst = std::max(worst, std::abs(c.h.eval(h.values()[i]) - h.nodes()[i]));
    }
    CHECK(worst <= c.h.max_local_variation());
  }
}

TEST_CASE("orbit oracle") {
  auto o = orbit_oracle(quad02(), {.letters = {1}, .base = 0.0});
  CHECK(o.abscissa == doctest::Approx(0.7));
  CHECK(o.ordinate == 0.5);
  o = orbit_oracle(quad02(), {.letters = {1, 1}, .base = -1.0});
  CHECK(o.abscissa == doctest::Approx(0.7));
  CHECK(o.ordinate == 0.5);
  o = orbit_oracle(quad02(), {.letters = {}, .base = 1.0});
  CHECK(o.abscissa == 1.0);
  CHECK(o.ordinate == 1.0);
  // right to left: δ₂(δ₁(0))
  o = orbit_oracle(quad02(), {.letters = {2, 1}, .base = 0.0});
  CHECK(o.abscissa == doctest::Approx(quad02().delta2(0.7)));
  CHECK(o.ordinate == -0.25);

  const double bases[] = {-1.0, 1.0};
  CHECK(all_words(10, bases).size() == 2 * 2047);

  SUBCASE("oracle ordinates agree with the itinerary evaluator") {
    // abscissas carry rounding of ~1e-16 and h is only Hölder-0.3 near the
    // orbit of the endpoints, hence (1e-16)^0.3 ~ 1e-5
    const double base0[] = {0.0};
    for (const auto& w : all_words(6, base0)) {
      auto p = orbit_oracle(quad02(), w);
      CHECK(std::abs(p.ordinate - testing::itinerary_conjugation(0.2, p.abscissa)) <= 2e-5);
    }
  }
}

TEST_CASE("verify_conjugacy") {
  auto id = MonotoneFunction::identity(257);
  auto r = verify_conjugacy(id, standard_pair(), standard_pair());
  CHECK(r.max_residual == 0.0);
  r = verify_conjugacy(id, quad02(), standard_pair());
  CHECK(r.max_residual >= 0.19);
  r = verify_conjugacy(quad02_solution().h, quad02(), standard_pair());
  CHECK(r.max_residual <= 1e-3);
  CHECK(r.anchor_deviation[0] == 0.0);
  CHECK(r.anchor_deviation[1] == 0.0);
  CHECK(r.anchor_deviation[2] == 0.0);
  auto ru = verify_conjugacy(quad02_solution().h, quad02(), standard_pair(), 4097);
  CHECK(ru.max_residual <= 0.05);
}
