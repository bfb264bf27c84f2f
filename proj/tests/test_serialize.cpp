#include <sstream>

#include "doctest.h"
#include "pconf/error.hpp"
#include "pconf/serialize.hpp"

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

}  // namespace

TEST_CASE("family descriptors round trip") {
  const FamilySpec specs[] = {
      StandardFamily{},
      QuadraticFamily{0.2},
      PolynomialFamily{.delta1 = {0.5, 0.5}, .delta2 = {-0.5, 0.5}, .quasi = true},
      PerturbedFlatFamily{.n = 3, .shape = {.phi_width = 0.1, .psi_width = 0.2}},
  };
  for (const auto& spec : specs) {
    const auto j = family_to_json(spec);
    CHECK(family_to_json(family_from_json(j)) == j);
  }
  auto q = family_from_json(Json::parse(R"({"family":"quadratic","c":-0.2})"));
  CHECK(std::get<QuadraticFamily>(q).c == -0.2);
  auto p = family_from_json(Json::parse(R"({"family":"perturbed_flat","n":2})"));
  CHECK(std::get<PerturbedFlatFamily>(p).shape.phi_width == 0.125);
}

TEST_CASE("malformed descriptors") {
  CHECK(code_of([] { family_from_json(Json::parse(R"({"family":"cubic"})")); }) ==
        ErrorCode::kBadSpec);
  CHECK(code_of([] { family_from_json(Json::parse(R"({"family":"quadratic"})")); }) ==
        ErrorCode::kBadSpec);
  CHECK(code_of([] { family_from_json(Json::parse(R"({"family":"quadratic","c":"x"})")); }) ==
        ErrorCode::kBadSpec);
  CHECK(code_of([] { family_from_json(Json::parse("[1,2]")); }) == ErrorCode::kBadSpec);
  CHECK(code_of([] { load_family("/nonexistent/descriptor.json"); }) == ErrorCode::kBadSpec);
}

TEST_CASE("CSV round trip is exact") {
  auto h = conjugate_to_standard(build_family(QuadraticFamily{0.2}), {.grid = 257}).h;
  std::stringstream ss;
  write_csv(ss, h);
  CHECK(ss.str().rfind("t,value\n", 0) == 0);
  auto back = read_csv(ss);
  REQUIRE(back.size() == h.size());
  for (std::size_t i = 0; i < h.size(); ++i) {
    CHECK(back.nodes()[i] == h.nodes()[i]);
    CHECK(back.values()[i] == h.values()[i]);
  }
  std::stringstream bad("t,value\n-1,-1\nfoo,1\n");
  CHECK(code_of([&] { read_csv(bad); }) == ErrorCode::kBadSpec);
  std::stringstream decreasing("t,value\n-1,-1\n0,0.5\n1,0.2\n");
  CHECK(code_of([&] { read_csv(decreasing); }) == ErrorCode::kNonMonotoneInput);
}

TEST_CASE("convergence log JSON layout") {
  auto [h, log] = conjugate_to_standard(build_family(QuadraticFamily{0.2}), {.grid = 257});
  auto j = to_json(log);
  for (const char* key : {"iterations", "distances", "ratios", "residual", "grid", "tol"}) {
    CHECK(j.contains(key));
  }
  CHECK(j["iterations"] == log.iterations);
  CHECK(j["distances"].size() == log.distances.size());
  CHECK(j["grid"] == 257);
}

TEST_CASE("probe CSV") {
  auto id = MonotoneFunction::identity(257);
  auto p = difference_quotients(id, 1.0, 2, 4);
  std::ostringstream os;
  write_probe_csv(os, p);
  CHECK(os.str() == "k,step,quotient,ratio\n2,0.25,1,\n3,0.125,1,1\n4,0.0625,1,1\n");
}

TEST_CASE("format_double keeps 17 digits") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(1.0) == "1");
}
