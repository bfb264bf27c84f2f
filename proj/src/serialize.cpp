#include "pconf/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "pconf/error.hpp"

namespace pconf {
namespace {

template <typename T>
T field(const Json& j, const char* key) {
  if (!j.contains(key)) throw Error(ErrorCode::kBadSpec, std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception&) {
    throw Error(ErrorCode::kBadSpec, std::string("field '") + key + "' has the wrong type");
  }
}

Json boundary_json(const std::array<BoundaryValue, 4>& values) {
  Json out = Json::array();
  for (const auto& b : values) {
    out.push_back({{"name", b.name}, {"expected", b.expected}, {"actual", b.actual}});
  }
  return out;
}

Json interval_json(const Interval& iv) { return Json::array({iv.lo, iv.hi}); }

}  // namespace

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

FamilySpec family_from_json(const Json& j) {
  if (!j.is_object()) throw Error(ErrorCode::kBadSpec, "descriptor must be a JSON object");
  const auto name = field<std::string>(j, "family");
  if (name == "standard") return StandardFamily{};
  if (name == "quadratic") return QuadraticFamily{field<double>(j, "c")};
  if (name == "polynomial") {
    PolynomialFamily p;
    p.delta1 = field<std::vector<double>>(j, "delta1");
    const auto mode = j.contains("mode") ? field<std::string>(j, "mode") : std::string("full");
    if (mode != "full" && mode != "quasi") throw Error(ErrorCode::kBadSpec, "mode must be full or quasi");
    p.quasi = mode == "quasi";
    if (j.contains("delta2")) p.delta2 = field<std::vector<double>>(j, "delta2");
    return p;
  }
  if (name == "perturbed_flat") {
    PerturbedFlatFamily f;
    f.n = field<int>(j, "n");
    if (j.contains("shape")) {
      const auto& s = j.at("shape");
      if (!s.is_object()) throw Error(ErrorCode::kBadSpec, "shape must be an object");
      if (s.contains("phi_width")) f.shape.phi_width = field<double>(s, "phi_width");
      if (s.contains("psi_width")) f.shape.psi_width = field<double>(s, "psi_width");
    }
    return f;
  }
  throw Error(ErrorCode::kBadSpec, "unknown family '" + name + "'");
}

Json family_to_json(const FamilySpec& spec) {
  Json j;
  j["family"] = family_name(spec);
  if (const auto* q = std::get_if<QuadraticFamily>(&spec)) j["c"] = q->c;
  if (const auto* p = std::get_if<PolynomialFamily>(&spec)) {
    j["delta1"] = p->delta1;
    j["mode"] = p->quasi ? "quasi" : "full";
    if (p->quasi) j["delta2"] = p->delta2;
  }
  if (const auto* f = std::get_if<PerturbedFlatFamily>(&spec)) {
    j["n"] = f->n;
    j["shape"] = {{"phi_width", f->shape.phi_width}, {"psi_width", f->shape.psi_width}};
  }
  return j;
}

FamilySpec load_family(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kBadSpec, "cannot open " + path.string());
  Json j;
  try {
    in >> j;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kBadSpec, path.string() + ": " + e.what());
  }
  return family_from_json(j);
}

Json to_json(const SetApprox& s) {
  Json out = Json::array();
  for (std::size_t i = 0; i < s.intervals.size(); ++i) {
    out.push_back({{"interval", interval_json(s.intervals[i])}, {"singleton", bool(s.singleton[i])}});
  }
  return out;
}

Json to_json(const ValidationReport& r) {
  Json j;
  j["family"] = r.family;
  j["mode"] = to_string(r.mode);
  j["grid"] = r.grid;
  j["tol"] = r.tol;
  j["flat_tol"] = r.flat_tol;
  j["additivity"] = {{"checked", r.additivity_checked},
                     {"ok", r.additivity_ok},
                     {"max_deviation", r.additivity_max_dev},
                     {"derivative_sum_max_deviation", r.derivative_sum_max_dev}};
  j["derivative_nonneg"] = {{"ok", r.derivative_nonneg_ok},
                            {"min_ddelta1", r.min_ddelta1},
                            {"min_ddelta2", r.min_ddelta2},
                            {"max_ddelta1", r.max_ddelta1},
                            {"max_ddelta2", r.max_ddelta2}};
  j["boundary"] = {{"ok", r.boundary_ok}, {"values", boundary_json(r.boundary)}};
  j["range_ok"] = r.range_ok;
  j["rho"] = r.rho;
  j["guiding_set_1"] = to_json(r.guiding_set_1);
  j["guiding_set_2"] = to_json(r.guiding_set_2);
  if (r.flat_checks) {
    const auto& f = *r.flat_checks;
    j["flat_checks"] = {{"flat_point", f.flat_point},
                        {"interval", interval_json(f.jn)},
                        {"single_zero", f.single_zero},
                        {"max_ddelta1", f.max_ddelta1},
                        {"ddelta1_below_one", f.ddelta1_below_one},
                        {"join_deviation", f.join_deviation},
                        {"c1_join_ok", f.c1_join_ok}};
  }
  j["classification"] = to_string(r.classification);
  return j;
}

Json to_json(const ConvergenceLog& log) {
  return {{"iterations", log.iterations},
          {"distances", log.distances},
          {"ratios", log.ratios},
          {"residual", log.residual},
          {"grid", log.grid},
          {"tol", log.tol},
          {"nodes", log.nodes},
          {"max_local_variation", log.max_local_variation},
          {"strictly_increasing", log.strictly_increasing}};
}

Json to_json(const ConjugacyResidual& r) {
  return {{"max_residual", r.max_residual},
          {"branch1", r.branch1},
          {"branch2", r.branch2},
          {"anchor_deviation", r.anchor_deviation}};
}

Json to_json(const SolutionCertificate& c) {
  return {{"source", c.source},
          {"target", c.target},
          {"fe_residual", c.fe_residual},
          {"fe_bound", c.fe_bound},
          {"conjugacy_residual", c.conjugacy_residual},
          {"interpolation_slack", c.interpolation_slack},
          {"nonlinearity_gap", c.nonlinearity_gap},
          {"degenerate", c.degenerate},
          {"warnings", c.warnings},
          {"nodes", c.solution.size()},
          {"convergence", to_json(c.log)}};
}

Json to_json(const InducedVerification& v) {
  return {{"additivity_max_deviation", v.additivity_max_dev},
          {"boundary", boundary_json(v.boundary)},
          {"boundary_max_deviation", v.boundary_max_dev},
          {"strictly_increasing", v.strictly_increasing},
          {"differentiability_claimed", v.differentiability_claimed}};
}

Json to_json(const QuotientProbe& p) {
  return {{"t0", p.t0},
          {"k_min", p.k_min},
          {"k_max", p.k_max},
          {"steps", p.steps},
          {"quotients", p.quotients},
          {"ratios", p.ratios},
          {"holder_exponent", p.holder_exponent}};
}

Json to_json(const ExperimentReport& r) {
  Json rows = Json::array();
  for (const auto& d : r.dyadic) {
    rows.push_back({{"m", d.m},
                    {"point", d.point},
                    {"value", d.value},
                    {"deviation", d.deviation},
                    {"orbit_matches_standard", d.orbit_matches_standard},
                    {"below_resolution", d.below_resolution}});
  }
  return {{"n", r.n},
          {"k", r.k},
          {"grid", r.grid},
          {"J_n", interval_json(r.jn)},
          {"J_k", interval_json(r.jk)},
          {"lambda", r.lambda},
          {"omega", r.omega},
          {"lambda_in_interior", r.lambda_in_interior},
          {"omega_in_interior", r.omega_in_interior},
          {"dyadic_tol", r.dyadic_tol},
          {"dyadic_ok", r.dyadic_ok},
          {"dyadic", rows},
          {"h_of_lambda", r.h_of_lambda},
          {"h_maps_J_n_to_J_n", r.h_maps_jn_to_jn},
          {"h_injective", r.h_injective},
          {"conjugacy_residual", r.residual},
          {"non_isomorphic", r.non_isomorphic},
          {"verdict", r.verdict}};
}

void write_csv(std::ostream& os, const SampledFunction& f) {
  os << "t,value\n";
  const auto t = f.nodes();
  const auto v = f.values();
  for (std::size_t i = 0; i < t.size(); ++i) {
    os << format_double(t[i]) << ',' << format_double(v[i]) << '\n';
  }
}

MonotoneFunction read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("t,value", 0) != 0) {
    throw Error(ErrorCode::kBadSpec, "CSV must start with header 't,value'");
  }
  std::vector<double> nodes;
  std::vector<double> values;
  std::size_t row = 1;
  while (std::getline(is, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    double t = 0.0;
    double v = 0.0;
    if (std::sscanf(line.c_str(), "%lf,%lf", &t, &v) != 2) {
      throw Error(ErrorCode::kBadSpec, "malformed CSV row " + std::to_string(row));
    }
    nodes.push_back(t);
    values.push_back(v);
  }
  return MonotoneFunction(std::move(nodes), std::move(values));
}

void write_probe_csv(std::ostream& os, const QuotientProbe& p) {
  os << "k,step,quotient,ratio\n";
  for (std::size_t i = 0; i < p.ks.size(); ++i) {
    os << p.ks[i] << ',' << format_double(p.steps[i]) << ',' << format_double(p.quotients[i]) << ',';
    if (i > 0) os << format_double(p.ratios[i - 1]);
    os << '\n';
  }
}

}  // namespace pconf
