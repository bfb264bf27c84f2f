#include "pconf/cli.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "pconf/analysis.hpp"
#include "pconf/cauchy.hpp"
#include "pconf/conjugacy.hpp"
#include "pconf/error.hpp"
#include "pconf/serialize.hpp"

namespace pconf {
namespace {

namespace fs = std::filesystem;

constexpr int kOk = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

struct RunConfig {
  std::string config;
  std::string target;
  std::size_t grid = 4097;
  double tol = 1e-10;
  std::size_t max_iter = 200;
  std::string out = ".";
  double t0 = 1.0;
  std::string scales = "4:10";
  int n = 2;
  int k = 3;
  int m_max = 8;
  bool allow_degenerate = false;
  bool uniform_grid = false;
  std::string h_csv;
  std::string mode;
};

// A usage problem detected after parsing; maps to exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check_config(const RunConfig& c) {
  if (c.grid < 257) throw UsageError("--grid must be >= 257");
  if (!(c.tol > 0.0 && c.tol < 1.0)) throw UsageError("--tol must lie in (0, 1)");
}

FamilySpec parse_family_arg(const std::string& arg) {
  if (arg == "standard") return StandardFamily{};
  auto suffix_number = [&](std::string_view prefix) -> std::optional<std::string> {
    if (arg.rfind(prefix, 0) != 0) return std::nullopt;
    return arg.substr(prefix.size());
  };
  if (auto c = suffix_number("quadratic:")) {
    try {
      std::size_t used = 0;
      const double value = std::stod(*c, &used);
      if (used != c->size()) throw std::invalid_argument(*c);
      return QuadraticFamily{value};
    } catch (const std::exception&) {
      throw Error(ErrorCode::kBadSpec, "bad quadratic coefficient in '" + arg + "'");
    }
  }
  if (auto n = suffix_number("perturbed_flat:")) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(n->data(), n->data() + n->size(), value);
    if (ec != std::errc() || ptr != n->data() + n->size()) {
      throw Error(ErrorCode::kBadSpec, "bad perturbation index in '" + arg + "'");
    }
    return PerturbedFlatFamily{value, {}};
  }
  return load_family(arg);
}

std::pair<int, int> parse_scales(const std::string& s) {
  const auto colon = s.find(':');
  if (colon == std::string::npos) throw UsageError("--scales expects kmin:kmax");
  try {
    return {std::stoi(s.substr(0, colon)), std::stoi(s.substr(colon + 1))};
  } catch (const std::exception&) {
    throw UsageError("--scales expects integers kmin:kmax");
  }
}

SolverOptions solver_options(const RunConfig& c) {
  SolverOptions o;
  o.grid = c.grid;
  o.tol = c.tol;
  o.max_iter = c.max_iter;
  o.grid_kind = c.uniform_grid ? GridKind::kUniform : GridKind::kDynamic;
  return o;
}

fs::path out_dir(const RunConfig& c) {
  fs::path dir(c.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw UsageError("cannot create output directory " + c.out);
  return dir;
}

// Write to a sibling temporary, then rename over the destination.
void write_atomic(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw UsageError("cannot write " + tmp.string());
    os << content;
    if (!os) throw UsageError("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw UsageError("cannot rename onto " + path.string());
}

void write_json(const fs::path& path, const Json& j) { write_atomic(path, j.dump(2) + "\n"); }

void write_function(const fs::path& path, const SampledFunction& f) {
  std::ostringstream os;
  write_csv(os, f);
  write_atomic(path, os.str());
}

std::string function_plot_script(const std::string& csv, const std::string& title) {
  return "set datafile separator ','\n"
         "set key top left\n"
         "set xrange [-1:1]\nset yrange [-1:1]\n"
         "set title '" + title + "'\n"
         "plot '" + csv + "' using 1:2 skip 1 with lines title 'h', x with lines dt 2 title 'identity'\n";
}

int cmd_validate(const RunConfig& c, std::ostream& out) {
  const auto pair = build_family(parse_family_arg(c.config));
  ValidateOptions opts;
  opts.grid = c.grid;
  if (c.mode == "quasi" || (c.mode.empty() && pair.quasi())) opts.mode = Mode::kQuasi;
  else if (!c.mode.empty() && c.mode != "full") throw UsageError("--mode must be full or quasi");
  const auto report = validate(pair, opts);
  const auto dir = out_dir(c);
  write_json(dir / "validation.json", to_json(report));
  out << report.family << ": " << to_string(report.classification) << " (rho = "
      << format_double(report.rho) << ")\n";
  return report.classification == Classification::kInvalid ? kFail : kOk;
}

bool log_ok(const ConvergenceLog& log, double tol) {
  if (log.residual > 10.0 * tol) return false;
  for (double r : log.ratios) {
    if (r > 0.5 + 1e-3) return false;
  }
  return true;
}

int cmd_conjugate(const RunConfig& c, std::ostream& out) {
  const auto source = build_family(parse_family_arg(c.config));
  const auto dir = out_dir(c);
  const auto opts = solver_options(c);
  try {
    bool ok;
    if (c.target.empty() || c.target == "standard") {
      auto res = conjugate_to_standard(source, opts);
      write_function(dir / "h.csv", res.h);
      write_json(dir / "log.json", to_json(res.log));
      ok = log_ok(res.log, c.tol);
      out << "converged in " << res.log.iterations << " iterations, residual "
          << format_double(res.log.residual) << "\n";
    } else {
      const auto target = build_family(parse_family_arg(c.target));
      auto res = conjugate(source, target, opts);
      write_function(dir / "h.csv", res.h);
      write_json(dir / "log.json", to_json(res.source_log));
      write_json(dir / "target_log.json", to_json(res.target_log));
      write_json(dir / "residual.json", to_json(verify_conjugacy(res.h, source, target)));
      ok = log_ok(res.source_log, c.tol) && log_ok(res.target_log, c.tol);
      out << "converged in " << res.source_log.iterations << " + " << res.target_log.iterations
          << " iterations\n";
    }
    write_atomic(dir / "plot.gp", function_plot_script("h.csv", "conjugation"));
    return ok ? kOk : kFail;
  } catch (const MaxIterExceeded& e) {
    write_json(dir / "log.json", to_json(e.log()));
    throw;
  }
}

int cmd_solve_fe(const RunConfig& c, std::ostream& out) {
  const auto pair = build_family(parse_family_arg(c.config));
  SolveOptions opts;
  opts.solver = solver_options(c);
  if (!c.target.empty()) opts.target = parse_family_arg(c.target);
  const auto cert = solve_nonlinear(pair, opts);
  const auto dir = out_dir(c);
  write_function(dir / "solution.csv", cert.solution);
  write_json(dir / "certificate.json", to_json(cert));
  write_atomic(dir / "plot.gp", function_plot_script("solution.csv", "solution"));
  for (const auto& w : cert.warnings) out << "warning: " << w << "\n";
  out << "fe_residual " << format_double(cert.fe_residual) << " (bound "
      << format_double(cert.fe_bound) << "), nonlinearity gap "
      << format_double(cert.nonlinearity_gap) << "\n";
  if (cert.degenerate) return c.allow_degenerate ? kOk : kFail;
  return cert.fe_residual <= cert.fe_bound && cert.nonlinearity_gap > 0.0 ? kOk : kFail;
}

int cmd_probe(const RunConfig& c, std::ostream& out) {
  const auto [k_min, k_max] = parse_scales(c.scales);
  std::optional<MonotoneFunction> h;
  if (!c.h_csv.empty()) {
    std::ifstream in(c.h_csv);
    if (!in) throw UsageError("cannot open " + c.h_csv);
    h = read_csv(in);
  } else if (!c.config.empty()) {
    const auto source = build_family(parse_family_arg(c.config));
    if (c.target.empty() || c.target == "standard") {
      h = conjugate_to_standard(source, solver_options(c)).h;
    } else {
      h = conjugate(source, build_family(parse_family_arg(c.target)), solver_options(c)).h;
    }
  } else {
    throw UsageError("probe needs --h-csv <file> or --config <descriptor>");
  }
  const auto probe = difference_quotients(*h, c.t0, k_min, k_max);
  const auto dir = out_dir(c);
  write_json(dir / "probe.json", to_json(probe));
  std::ostringstream csv;
  write_probe_csv(csv, probe);
  write_atomic(dir / "probe.csv", csv.str());
  write_atomic(dir / "probe.gp",
               "set datafile separator ','\nset logscale xy\nset xlabel 'step'\n"
               "set ylabel 'difference quotient'\n"
               "plot 'probe.csv' using 2:3 skip 1 with linespoints title 'quotient'\n");
  out << "holder exponent " << format_double(probe.holder_exponent) << "\n";
  return kOk;
}

int cmd_nonregular(const RunConfig& c, std::ostream& out) {
  ExperimentOptions opts;
  opts.n = c.n;
  opts.k = c.k;
  opts.m_max = c.m_max;
  opts.solver = solver_options(c);
  const auto dir = out_dir(c);
  try {
    const auto report = nonregular_experiment(opts);
    write_json(dir / "experiment.json", to_json(report));
    out << "lambda " << format_double(report.lambda) << ", omega " << format_double(report.omega)
        << ": " << report.verdict << "\n";
    return report.non_isomorphic ? kOk : kFail;
  } catch (const DyadicCheckFailure& e) {
    write_json(dir / "experiment.json", to_json(e.report()));
    throw;
  }
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kBadSpec:
    case ErrorCode::kPrecondition:
    case ErrorCode::kScaleBelowGrid:
    case ErrorCode::kBadDomain:
    case ErrorCode::kNonMonotoneInput:
      return kUsage;
    default:
      return kFail;
  }
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"P-configuration conjugacy and Cauchy-type functional equation toolkit"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--grid", cfg.grid, "grid size (odd, >= 257)");
    sub->add_option("--tol", cfg.tol, "fixed-point tolerance");
    sub->add_option("--max-iter", cfg.max_iter, "iteration cap");
    sub->add_option("--out", cfg.out, "output directory");
    sub->add_flag("--uniform-grid", cfg.uniform_grid, "solve on uniform nodes only");
  };

  auto* validate_cmd = app.add_subcommand("validate", "check the axioms and classify a pair");
  validate_cmd->add_option("--config", cfg.config, "family descriptor")->required();
  validate_cmd->add_option("--mode", cfg.mode, "full or quasi");
  add_common(validate_cmd);

  auto* conj_cmd = app.add_subcommand("conjugate", "compute the conjugation to a target");
  conj_cmd->add_option("--config", cfg.config, "source descriptor")->required();
  conj_cmd->add_option("--target", cfg.target, "path | standard | quadratic:c");
  add_common(conj_cmd);

  auto* solve_cmd = app.add_subcommand("solve-fe", "nonlinear solution of the functional equation");
  solve_cmd->add_option("--config", cfg.config, "pair descriptor")->required();
  solve_cmd->add_option("--target", cfg.target, "path | standard | quadratic:c");
  solve_cmd->add_flag("--allow-degenerate", cfg.allow_degenerate, "accept the linear solution");
  add_common(solve_cmd);

  auto* probe_cmd = app.add_subcommand("probe", "difference quotients at an endpoint");
  probe_cmd->add_option("--config", cfg.config, "compute h for this descriptor");
  probe_cmd->add_option("--target", cfg.target, "path | standard | quadratic:c");
  probe_cmd->add_option("--h-csv", cfg.h_csv, "read h from CSV (t,value)");
  probe_cmd->add_option("--t0", cfg.t0, "-1 or 1");
  probe_cmd->add_option("--scales", cfg.scales, "kmin:kmax");
  add_common(probe_cmd);

  auto* exp_cmd = app.add_subcommand("nonregular", "flat-point non-isomorphism experiment");
  exp_cmd->add_option("--n", cfg.n, "perturbation index of the source");
  exp_cmd->add_option("--k", cfg.k, "perturbation index of the target");
  exp_cmd->add_option("--m-max", cfg.m_max, "largest dyadic index checked");
  add_common(exp_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    check_config(cfg);
    if (validate_cmd->parsed()) return cmd_validate(cfg, out);
    if (conj_cmd->parsed()) return cmd_conjugate(cfg, out);
    if (solve_cmd->parsed()) return cmd_solve_fe(cfg, out);
    if (probe_cmd->parsed()) return cmd_probe(cfg, out);
    if (exp_cmd->parsed()) return cmd_nonregular(cfg, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFail;
  }
  return kUsage;
}

}  // namespace pconf
