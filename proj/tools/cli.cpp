#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <memory>
#include <optional>
#include <ostream>

#include <CLI11.hpp>
#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include "documents.hpp"
#include "qmeasure/errors.hpp"
#include "qmeasure/polytope.hpp"
#include "qmeasure/spjqm.hpp"

namespace qmeasure::cli {

namespace {

struct Options {
  std::string input;
  std::string output;
  double tol = 0.0;  // 0: the command's default
  int max_iters = SpjqmOptions{}.max_iters;
  std::uint64_t seed = SumRuleOptions{}.seed;
  std::uint64_t budget = SumRuleOptions{}.budget;
  int k_max = 3;
};

std::shared_ptr<spdlog::logger> make_logger(std::ostream& err) {
  auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err);
  auto logger = std::make_shared<spdlog::logger>("qmeasure", sink);
  logger->set_pattern("[%l] %v");
  logger->set_level(spdlog::level::warn);
  if (const char* env = std::getenv("QMEASURE_LOG"); env != nullptr && *env != '\0')
    logger->set_level(spdlog::level::from_str(env));
  return logger;
}

double tol_or(const Options& o, double fallback) { return o.tol > 0.0 ? o.tol : fallback; }

SumRuleOptions sum_rule_options(const Options& o) {
  SumRuleOptions s;
  s.tol = tol_or(o, s.tol);
  s.budget = o.budget;
  s.seed = o.seed;
  return s;
}

json sum_rule_to_json(int k, const SumRuleReport& r, int n) {
  json tuple = json::array();
  for (Subset s : r.worst_tuple) tuple.push_back(subset_to_json(s, n));
  return {{"k", k},
          {"holds", r.holds},
          {"exhaustive", r.exhaustive},
          {"tuples_tested", r.tuples_tested},
          {"max_abs_interference", r.max_abs_interference},
          {"worst_tuple", std::move(tuple)}};
}

// Level classification with the per-k evidence; the level agrees with
// classify_level() by construction.
json level_report(const SetFunction& f, int k_max, const SumRuleOptions& opts) {
  if (k_max < 1) throw InputError("--k-max must be at least 1");
  json checks = json::array();
  json level = nullptr;
  const int upper = std::min(k_max, kMaxHistories - 1);
  for (int k = 1; k <= upper; ++k) {
    const SumRuleReport r = check_sum_rule(f, k, opts);
    checks.push_back(sum_rule_to_json(k, r, f.space().size()));
    if (r.holds) {
      level = k;
      break;
    }
  }
  return {{"level", level}, {"k_max", k_max}, {"checks", std::move(checks)}};
}

double table_residual(const ExperimentTables& a, const ExperimentTables& b) {
  double worst = 0.0;
  for (std::size_t e = 0; e < 4; ++e)
    for (std::size_t c = 0; c < 4; ++c) worst = std::max(worst, std::abs(a[e].p[c] - b[e].p[c]));
  return worst;
}

json label_json(const std::optional<std::string>& label) {
  return label ? json(*label) : json(nullptr);
}

int cmd_check_box(const Options& o, std::ostream& out, spdlog::logger& log) {
  const BehaviorDocument doc = parse_behavior_document(read_json_file(o.input));
  const InequalityReport r = inequality_report(doc.behavior);
  log.info("CHSH max {:.6f}, arcsine form max {:.6f}", r.max_chsh(), r.max_tsirelson2());
  json report = {{"label", label_json(doc.label)},
                 {"coords", coords_to_json(doc.behavior)},
                 {"tables", tables_to_json(tables_from_behavior(doc.behavior))},
                 {"chsh_values", r.chsh_values},
                 {"max_chsh", r.max_chsh()},
                 {"chshb_ok", r.chshb_ok},
                 {"tsirelson1_ok", r.tsirelson1_ok},
                 {"tsirelson2_lhs", r.tsirelson2_lhs},
                 {"max_tsirelson2", r.max_tsirelson2()},
                 {"tsirelson2_ok", r.tsirelson2_ok},
                 {"oqmc_exists", r.oqmc_exists()}};
  out << report.dump(2) << '\n';
  return kExitOk;
}

json marginals_report(const DecoherenceFunctional& d) {
  if (d.size() != kJointHistories) return nullptr;
  Marginals m;
  try {
    m = marginals_from_D(d);
  } catch (const PositivityError& e) {
    return {{"error", e.what()}};
  }
  json report = {{"decoherence_residual", m.decoherence_residual},
                 {"decoherent", m.decoherence_residual <= kDecoherenceTol},
                 {"tables", tables_to_json(m.tables)},
                 {"behavior", nullptr}};
  if (m.decoherence_residual <= kDecoherenceTol) {
    try {
      report["behavior"] = coords_to_json(behavior_from_probabilities(m.tables));
    } catch (const InputError& e) {
      report["behavior_error"] = e.what();
    }
  }
  return report;
}

int cmd_check_dfn(const Options& o, std::ostream& out, spdlog::logger& log) {
  const DecoherenceDocument doc = parse_decoherence_document(read_json_file(o.input));
  const DecoherenceFunctional& d = doc.functional;
  const PositivityReport pos = positivity_report(d);
  const double min_eig = min_eigenvalue(d.entries());
  const double positivity_tol = tol_or(o, 1e-12);
  log.info("{} histories, min measure {:.3e}, min eigenvalue {:.3e}", d.size(), pos.min_measure, min_eig);

  json report = {{"label", label_json(doc.label)},
                 {"size", d.size()},
                 {"hermitian", true},
                 {"normalization", d.entries().sum().real()},
                 {"positive", pos.min_measure >= -positivity_tol},
                 {"min_measure", pos.min_measure},
                 {"min_measure_subset", subset_to_json(pos.argmin, d.size())},
                 {"strongly_positive", min_eig >= -tol_or(o, kStrongPositivityTol)},
                 {"min_eigenvalue", min_eig},
                 {"level", level_report(quadratic_form_table(d), o.k_max, sum_rule_options(o))},
                 {"marginals", marginals_report(d)}};
  out << report.dump(2) << '\n';
  return kExitOk;
}

int cmd_construct_jqm(const Options& o, std::ostream& out, spdlog::logger& log) {
  const BehaviorDocument doc = parse_behavior_document(read_json_file(o.input));
  const Decomposition dec = decompose(doc.behavior);
  const DecoherenceFunctional d = construct_joint_measure(dec);

  const PositivityReport pos = positivity_report(d);
  const Marginals m = marginals_from_D(d);
  const double marginal_residual = table_residual(m.tables, tables_from_behavior(doc.behavior));
  const double min_eig = min_eigenvalue(d.entries());
  json validation = {{"positive", pos.min_measure >= -1e-12},
                     {"min_measure", pos.min_measure},
                     {"strongly_positive", min_eig >= -kStrongPositivityTol},
                     {"min_eigenvalue", min_eig},
                     {"marginal_residual", marginal_residual},
                     {"decoherence_residual", m.decoherence_residual},
                     {"level", level_report(quadratic_form_table(d), o.k_max, sum_rule_options(o))["level"]}};
  if (pos.min_measure < -1e-12 || marginal_residual > 1e-9 || m.decoherence_residual > 1e-9)
    throw ValidationError("constructed functional failed validation: " + validation.dump());

  json document = decoherence_to_json(d, doc.label);
  document["source"] = coords_to_json(doc.behavior);
  document["validation"] = validation;
  if (o.output.empty()) {
    out << document.dump(2) << '\n';
  } else {
    write_json_file(o.output, document);
    log.info("wrote {}", o.output);
    out << json{{"output", o.output}, {"validation", validation}}.dump(2) << '\n';
  }
  return kExitOk;
}

int cmd_decompose(const Options& o, std::ostream& out, spdlog::logger&) {
  const BehaviorDocument doc = parse_behavior_document(read_json_file(o.input));
  const Decomposition dec = decompose(doc.behavior, tol_or(o, 1e-10));
  json weights = json::object();
  json support = json::array();
  double pr_weight = 0.0;
  for (const Vertex& v : vertex_catalog()) {
    const double w = dec.weights[static_cast<std::size_t>(v.index)];
    weights[v.id()] = w;
    if (w > 0.0) support.push_back(v.id());
    if (!v.is_local()) pr_weight += w;
  }
  json report = {{"label", label_json(doc.label)},
                 {"weights", std::move(weights)},
                 {"support", std::move(support)},
                 {"pr_weight", pr_weight},
                 {"recombination_residual", dec.recombination_residual}};
  out << report.dump(2) << '\n';
  return kExitOk;
}

int cmd_solve_spjqm(const Options& o, std::ostream& out, spdlog::logger& log) {
  const BehaviorDocument doc = parse_behavior_document(read_json_file(o.input));
  SpjqmOptions opts;
  opts.tol = tol_or(o, opts.tol);
  opts.max_iters = o.max_iters;
  if (opts.max_iters < 0) throw InputError("--max-iters must be non-negative");
  const FeasibilityOutcome r = solve_spjqm(doc.behavior, opts);
  log.info("{} after {} iterations", to_string(r.status), r.iterations);

  json checkpoints = json::array();
  for (const auto& c : r.checkpoints)
    checkpoints.push_back({{"iteration", c.iteration},
                           {"psd_violation", c.psd_violation},
                           {"affine_violation", c.affine_violation},
                           {"gap", c.gap}});
  json report = {{"label", label_json(doc.label)},
                 {"status", to_string(r.status)},
                 {"iterations", r.iterations},
                 {"tol", opts.tol},
                 {"psd_violation", r.psd_violation},
                 {"affine_violation", r.affine_violation},
                 {"checkpoints", std::move(checkpoints)},
                 {"violated_inequality", nullptr},
                 {"certificate", nullptr}};
  if (r.violated_inequality)
    report["violated_inequality"] = {{"placement", r.violated_inequality->placement},
                                     {"description", r.violated_inequality->description},
                                     {"lhs", r.violated_inequality->lhs}};
  if (r.status == FeasibilityStatus::feasible) {
    if (!r.certificate || !verify_certificate(*r.certificate, doc.behavior, opts.tol))
      throw InternalError("solver reported feasible without a verifiable certificate");
    json cert = decoherence_to_json(*r.certificate, doc.label);
    if (o.output.empty()) {
      report["certificate"] = std::move(cert);
    } else {
      write_json_file(o.output, cert);
      log.info("wrote certificate to {}", o.output);
      report["certificate"] = o.output;
    }
  }
  out << report.dump(2) << '\n';
  switch (r.status) {
    case FeasibilityStatus::feasible:
      return kExitOk;
    case FeasibilityStatus::infeasible:
      return kExitInfeasible;
    case FeasibilityStatus::undetermined:
      return kExitUndetermined;
  }
  return kExitInternal;
}

int cmd_classify_level(const Options& o, std::ostream& out, spdlog::logger&) {
  const SetFunction f = parse_set_function_document(read_json_file(o.input));
  json report = level_report(f, o.k_max, sum_rule_options(o));
  report["n"] = f.space().size();
  out << report.dump(2) << '\n';
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  auto logger = make_logger(err);
  Options o;

  CLI::App app{"Joint quantal measures for two-party, two-setting boxes", "qmeasure"};
  app.require_subcommand(1);
  app.fallthrough();

  auto input = [&](CLI::App* sub, const char* what) {
    sub->add_option("input", o.input, what)->required();
  };
  auto tol = [&](CLI::App* sub) { sub->add_option("--tol", o.tol, "Numerical tolerance")->check(CLI::PositiveNumber); };
  auto sum_rule = [&](CLI::App* sub) {
    sub->add_option("--k-max", o.k_max, "Highest level tested")->capture_default_str();
    sub->add_option("--budget", o.budget, "Tuple budget before sampling")->capture_default_str();
    sub->add_option("--seed", o.seed, "Sampling seed")->capture_default_str();
  };

  auto* check_box = app.add_subcommand("check-box", "Inequality report for a behavior");
  input(check_box, "Behavior document");

  auto* check_dfn = app.add_subcommand("check-dfn", "Property report for a decoherence functional");
  input(check_dfn, "Decoherence document");
  tol(check_dfn);
  sum_rule(check_dfn);

  auto* construct = app.add_subcommand("construct-jqm", "Joint quantal measure from the vertex decomposition");
  input(construct, "Behavior document");
  construct->add_option("-o,--output", o.output, "Write the decoherence document here");
  sum_rule(construct);

  auto* decompose_cmd = app.add_subcommand("decompose", "Weights on the 24 no-signalling vertices");
  input(decompose_cmd, "Behavior document");
  tol(decompose_cmd);

  auto* solve = app.add_subcommand("solve-spjqm", "Strongly positive joint quantal measure search");
  input(solve, "Behavior document");
  tol(solve);
  solve->add_option("--max-iters", o.max_iters, "Projection iterations")->capture_default_str();
  solve->add_option("-o,--output", o.output, "Write the certificate here when feasible");

  auto* classify = app.add_subcommand("classify-level", "Sum-rule level of a measure or decoherence functional");
  input(classify, "Measure or decoherence document");
  tol(classify);
  sum_rule(classify);

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalidInput;
  }

  try {
    if (check_box->parsed()) return cmd_check_box(o, out, *logger);
    if (check_dfn->parsed()) return cmd_check_dfn(o, out, *logger);
    if (construct->parsed()) return cmd_construct_jqm(o, out, *logger);
    if (decompose_cmd->parsed()) return cmd_decompose(o, out, *logger);
    if (solve->parsed()) return cmd_solve_spjqm(o, out, *logger);
    if (classify->parsed()) return cmd_classify_level(o, out, *logger);
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalidInput;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitInternal;
}

}  // namespace qmeasure::cli
