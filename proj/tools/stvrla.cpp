#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include "stvrla/audit_sim.hpp"
#include "stvrla/batch_check.hpp"
#include "stvrla/election_io.hpp"
#include "stvrla/errors.hpp"
#include "stvrla/frw_planner.hpp"
#include "stvrla/general_planner.hpp"
#include "stvrla/report.hpp"
#include "stvrla/tabulator.hpp"

using namespace stvrla;

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kInfeasible = 2;

struct Options {
  std::string input;
  std::string plan;
  std::string json_path;
  std::string planner = "frw";
  bool batch_first = false;
  bool strict_ties = false;
  double risk_limit = 0.10;
  double error_rate = 0.002;
  double alpha_d = 100.0;
  double eps_floor = 0.001;
  std::string mode = "comparison";
  std::string delta = "0.05";
  std::size_t trials = 500;
  std::uint64_t seed = 42;
};

AuditParams audit_params(const Options& o) {
  AuditParams p;
  p.risk_limit = o.risk_limit;
  p.error_rate = o.error_rate;
  p.shrink_d = o.alpha_d;
  p.eps_floor = o.eps_floor;
  if (o.mode == "comparison") {
    p.mode = AuditMode::Comparison;
  } else if (o.mode == "polling") {
    p.mode = AuditMode::Polling;
  } else {
    throw InvalidParameter("--mode must be comparison or polling");
  }
  validate(p);
  return p;
}

class Run {
 public:
  Run(const Options& o, std::string command) : options_(o) {
    bytes_ = read_file(o.input);
    election_ = parse_election(bytes_, detect_format(o.input, bytes_));
    manifest_.input_sha256 = sha256_hex(bytes_);
    manifest_.command = std::move(command);
    manifest_.timestamp = utc_timestamp();
    manifest_.parameters = {{"risk_limit", std::to_string(o.risk_limit)},
                            {"error_rate", std::to_string(o.error_rate)},
                            {"alpha_d", std::to_string(o.alpha_d)},
                            {"eps_floor", std::to_string(o.eps_floor)},
                            {"mode", o.mode},
                            {"batch_first", o.batch_first ? "true" : "false"}};
  }

  const Election& election() const { return election_; }
  RunManifest& manifest() { return manifest_; }

  // Writes `doc` (with the manifest) to --json; tables go to stdout unless
  // the JSON itself does.
  void emit(json doc, const std::string& table) {
    doc["manifest"] = manifest_json(manifest_);
    if (options_.json_path.empty()) {
      std::cout << table;
      return;
    }
    if (options_.json_path == "-") {
      std::cout << doc.dump(2) << '\n';
      return;
    }
    std::ofstream out(options_.json_path);
    if (!out) throw ParseError("cannot write " + options_.json_path);
    out << doc.dump(2) << '\n';
    std::cout << table;
  }

 private:
  const Options& options_;
  std::string bytes_;
  Election election_;
  RunManifest manifest_;
};

TabulationTrace count(const Election& e, const Options& o) {
  TabulationOptions t;
  t.batch_first = o.batch_first;
  t.strict_ties = o.strict_ties;
  return tabulate(e, t);
}

json names(const Election& e, std::span<const CandidateId> ids) {
  json out = json::array();
  for (auto c : ids) out.push_back(e.name_of(c));
  return out;
}

json plain_assertions(const Election& e, const std::vector<CostedAssertion>& list) {
  json out = json::array();
  for (const auto& a : list) out.push_back(assertion_json(e, a.assertion));
  return out;
}

json costed_assertions(const Election& e, const std::vector<CostedAssertion>& list) {
  json out = json::array();
  for (const auto& a : list) out.push_back(costed_json(e, a));
  return out;
}

// The batch-check part of a composed plan, when --batch-first removed anyone.
std::optional<BatchCheckPlan> batch_part(const Election& e, const TabulationTrace& trace, const AuditParams& p) {
  if (trace.batch_eliminated().empty()) return std::nullopt;
  return plan_batch_check(e, p);
}

int cmd_tabulate(const Options& o) {
  Run run(o, "tabulate");
  const auto trace = count(run.election(), o);
  run.emit(json{{"trace", trace_json(run.election(), trace)}}, trace_table(run.election(), trace));
  return kOk;
}

int cmd_batch_check(const Options& o) {
  Run run(o, "batch-check");
  const auto params = audit_params(o);
  const auto plan = plan_batch_check(run.election(), params);
  std::ostringstream table;
  table << "Top:";
  for (auto c : plan.top) table << ' ' << run.election().name_of(c);
  table << (plan.top_tie ? " (tie broken by id)" : "") << "\nBatch:";
  for (auto c : plan.batch) table << ' ' << run.election().name_of(c);
  table << '\n' << assertions_table(run.election(), plan.assertions, plan.overall_asn);
  if (!plan.feasible) table << "Batch elimination cannot be verified with AG assertions.\n";
  run.emit(batch_plan_json(run.election(), plan), table.str());
  return plan.feasible ? kOk : kInfeasible;
}

struct Composed {
  json doc;
  std::string table;
  bool feasible = true;
};

Composed compose_frw(Run& run, const Options& o) {
  const auto params = audit_params(o);
  FrwConfig config;
  config.delta = parse_rational(o.delta);
  config.params = params;
  run.manifest().parameters["delta"] = o.delta;
  const auto& e = run.election();
  const auto trace = count(e, o);
  const auto batch = batch_part(e, trace, params);
  const auto plan = plan_frw(e, trace, config);

  Composed c;
  c.doc = frw_plan_json(e, plan);
  c.doc["planner"] = "frw";
  c.doc["excluded"] = names(e, trace.batch_eliminated());
  c.doc["batch_assertions"] = json::array();
  std::int64_t combined = plan.overall_asn;
  std::ostringstream table;
  table << "First winner " << e.name_of(plan.w1) << " (transfer value " << to_decimal_string(plan.reported_tv, 4)
        << "), second winner " << e.name_of(plan.w2) << '\n';
  c.feasible = plan.kind != PlanKind::Infeasible;
  if (batch) {
    c.doc["batch_check"] = batch_plan_json(e, *batch);
    c.doc["batch_check"].erase("assertions");
    c.doc["batch_assertions"] = costed_assertions(e, batch->assertions);
    combined = std::max(combined, batch->overall_asn);
    c.feasible = c.feasible && batch->feasible;
    table << "Batch elimination\n" << assertions_table(e, batch->assertions, batch->overall_asn);
    table << "Election of " << e.name_of(plan.w1) << " and " << e.name_of(plan.w2) << '\n';
  }
  table << assertions_table(e, plan.assertions, plan.overall_asn);
  if (batch) table << "Combined cost: " << (feasible(combined) ? std::to_string(combined) : "inf") << '\n';
  if (!c.feasible) table << "No audit could be formed.\n";
  c.doc["combined_asn"] = asn_json(combined);
  c.table = table.str();
  return c;
}

Composed compose_general(Run& run, const Options& o) {
  const auto params = audit_params(o);
  const auto& e = run.election();
  const auto trace = count(e, o);
  const auto batch = batch_part(e, trace, params);
  const auto report = plan_general(e, trace, params);

  Composed c;
  c.doc = general_report_json(e, report);
  c.doc["planner"] = "general";
  c.doc["excluded"] = names(e, trace.batch_eliminated());
  c.doc["batch_assertions"] = json::array();
  std::int64_t combined = report.overall_asn;
  std::ostringstream table;
  if (batch) {
    c.doc["batch_check"] = batch_plan_json(e, *batch);
    c.doc["batch_check"].erase("assertions");
    c.doc["batch_assertions"] = costed_assertions(e, batch->assertions);
    combined = std::max(combined, batch->overall_asn);
    c.feasible = batch->feasible;
    table << "Batch elimination\n" << assertions_table(e, batch->assertions, batch->overall_asn);
  }
  table << general_summary(e, report);
  if (batch) table << "Combined cost: " << (feasible(combined) ? std::to_string(combined) : "inf") << '\n';
  c.doc["combined_asn"] = asn_json(combined);
  c.table = table.str();
  return c;
}

int cmd_plan_frw(const Options& o) {
  Run run(o, "plan-frw");
  auto c = compose_frw(run, o);
  run.emit(std::move(c.doc), c.table);
  return c.feasible ? kOk : kInfeasible;
}

int cmd_plan_general(const Options& o) {
  Run run(o, "plan-general");
  auto c = compose_general(run, o);
  run.emit(std::move(c.doc), c.table);
  return c.feasible ? kOk : kInfeasible;
}

int cmd_export(const Options& o) {
  Run run(o, "export-assertions");
  const auto& e = run.election();
  json doc{{"planner", o.planner}, {"excluded", json::array()}, {"batch_assertions", json::array()}};
  bool ok = true;
  if (o.planner == "batch") {
    const auto plan = plan_batch_check(e, audit_params(o));
    doc["batch_assertions"] = plain_assertions(e, plan.assertions);
    doc["assertions"] = json::array();
    ok = plan.feasible;
  } else if (o.planner == "frw" || o.planner == "general") {
    auto c = o.planner == "frw" ? compose_frw(run, o) : compose_general(run, o);
    doc["excluded"] = c.doc["excluded"];
    for (const char* key : {"assertions", "batch_assertions"}) {
      json list = json::array();
      for (auto a : c.doc[key]) {
        for (const char* k : {"holds", "lhs", "rhs", "margin", "asn"}) a.erase(k);
        list.push_back(a);
      }
      doc[key] = list;
    }
    ok = c.feasible;
  } else {
    throw InvalidParameter("--planner must be frw, general or batch");
  }
  std::ostringstream table;
  table << doc["batch_assertions"].size() + doc["assertions"].size() << " assertions\n";
  run.emit(std::move(doc), table.str());
  return ok ? kOk : kInfeasible;
}

int cmd_simulate(const Options& o) {
  Run run(o, "simulate");
  const auto params = audit_params(o);
  const auto plan_bytes = read_file(o.plan);
  json plan_doc;
  try {
    plan_doc = json::parse(plan_bytes);
  } catch (const json::exception& ex) {
    throw ParseError(std::string("plan file: ") + ex.what());
  }
  const auto plan = plan_from_json(run.election(), plan_doc).for_simulation();
  run.manifest().parameters["trials"] = std::to_string(o.trials);
  run.manifest().parameters["seed"] = std::to_string(o.seed);
  run.manifest().parameters["plan_sha256"] = sha256_hex(plan_bytes);
  const auto population = identical_population(run.election());
  ErrorModel errors{params.mode == AuditMode::Comparison ? o.error_rate : 0.0};
  const auto report = simulate_audit(run.election(), population, plan, params, o.trials, o.seed, errors);
  run.emit(sim_json(report), sim_summary(report));
  return kOk;
}

void add_params(CLI::App* sub, Options& o) {
  sub->add_option("--risk-limit", o.risk_limit, "Risk limit alpha")->envname("STVRLA_RISK_LIMIT");
  sub->add_option("--error-rate", o.error_rate, "Expected one-vote overstatements per ballot")
      ->envname("STVRLA_ERROR_RATE");
  sub->add_option("--alpha-d", o.alpha_d, "ALPHA shrink-trunc weight d")->envname("STVRLA_ALPHA_D");
  sub->add_option("--eps", o.eps_floor, "ALPHA estimator floor, as a fraction of the bound")->envname("STVRLA_EPS");
  sub->add_option("--mode", o.mode, "comparison or polling")->envname("STVRLA_MODE");
}

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("election", o.input, "Election file (canonical JSON or BLT)")->required();
  sub->add_option("--json", o.json_path, "Write JSON output to this path (- for stdout)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Risk-limiting audit planning for two-seat STV elections"};
  app.require_subcommand(1);
  Options o;

  auto* tab = app.add_subcommand("tabulate", "Count an election");
  add_common(tab, o);
  tab->add_flag("--batch-first", o.batch_first, "Apply batch elimination before the count");
  tab->add_flag("--strict-ties", o.strict_ties, "Fail instead of breaking ties by candidate order");

  auto* batch = app.add_subcommand("batch-check", "Assertions verifying a batch elimination");
  add_common(batch, o);
  add_params(batch, o);

  auto* frw = app.add_subcommand("plan-frw", "Audit plan for elections with a first-round winner");
  add_common(frw, o);
  add_params(frw, o);
  frw->add_option("--delta", o.delta, "Transfer-value bound step")->envname("STVRLA_DELTA");
  frw->add_flag("--batch-first", o.batch_first, "Verify batch elimination first");

  auto* general = app.add_subcommand("plan-general", "Full or partial audit by the general method");
  add_common(general, o);
  add_params(general, o);
  general->add_flag("--batch-first", o.batch_first, "Verify batch elimination first");

  auto* exp = app.add_subcommand("export-assertions", "Write a plan's assertions for later simulation");
  add_common(exp, o);
  add_params(exp, o);
  exp->add_option("--planner", o.planner, "frw, general or batch");
  exp->add_option("--delta", o.delta, "Transfer-value bound step")->envname("STVRLA_DELTA");
  exp->add_flag("--batch-first", o.batch_first, "Verify batch elimination first");

  auto* sim = app.add_subcommand("simulate", "Monte Carlo audits of a plan against the election");
  add_common(sim, o);
  sim->add_option("plan", o.plan, "Plan JSON (from plan-frw, plan-general or export-assertions)")->required();
  add_params(sim, o);
  sim->add_option("--trials", o.trials, "Number of simulated audits")->envname("STVRLA_TRIALS");
  sim->add_option("--seed", o.seed, "Random seed")->envname("STVRLA_SEED");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (tab->parsed()) return cmd_tabulate(o);
    if (batch->parsed()) return cmd_batch_check(o);
    if (frw->parsed()) return cmd_plan_frw(o);
    if (general->parsed()) return cmd_plan_general(o);
    if (exp->parsed()) return cmd_export(o);
    if (sim->parsed()) return cmd_simulate(o);
  } catch (const FirstRoundWinnerCriterion& e) {
    std::cerr << "error: first-round-winner criterion not met: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  std::cerr << app.help();
  return kUsage;
}
