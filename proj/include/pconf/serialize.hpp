#pragma once

// File formats: family descriptors and reports as JSON, sampled functions
// and quotient tables as CSV with 17 significant digits.

#include <filesystem>
#include <iosfwd>
#include <string>

#include "json.hpp"
#include "pconf/analysis.hpp"
#include "pconf/cauchy.hpp"
#include "pconf/conjugacy.hpp"
#include "pconf/funcspace.hpp"
#include "pconf/pconfig.hpp"

namespace pconf {

using Json = nlohmann::json;

/// "%.17g".
std::string format_double(double x);

/// Throws BadSpec on an unknown family or missing/ill-typed fields.
FamilySpec family_from_json(const Json& j);
Json family_to_json(const FamilySpec& spec);
/// Throws BadSpec when the file is missing or not valid JSON.
FamilySpec load_family(const std::filesystem::path& path);

Json to_json(const SetApprox& s);
Json to_json(const ValidationReport& r);
Json to_json(const ConvergenceLog& log);
Json to_json(const ConjugacyResidual& r);
Json to_json(const SolutionCertificate& c);
Json to_json(const InducedVerification& v);
Json to_json(const QuotientProbe& p);
Json to_json(const ExperimentReport& r);

/// Header `t,value`, one row per node.
void write_csv(std::ostream& os, const SampledFunction& f);
/// Reads the format above; throws BadSpec on malformed rows and the
/// MonotoneFunction errors on invalid data.
MonotoneFunction read_csv(std::istream& is);

/// Header `k,step,quotient,ratio`; the first row has an empty ratio.
void write_probe_csv(std::ostream& os, const QuotientProbe& p);

}  // namespace pconf
