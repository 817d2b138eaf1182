#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "stvrla/audit_sim.hpp"
#include "stvrla/batch_check.hpp"
#include "stvrla/frw_planner.hpp"
#include "stvrla/general_planner.hpp"
#include "stvrla/tabulator.hpp"

namespace stvrla {

using nlohmann::json;

inline constexpr const char* kToolVersion = "0.1.0";

// {"value": "0.222197", "exact": "2000/9001"}
json rational_json(const Rational& r, int digits = 6);

// ASNs print as integers; an infeasible ASN is null.
json asn_json(std::int64_t asn);

json trace_json(const Election& election, const TabulationTrace& trace);
json assertion_json(const Election& election, const Assertion& a);
json costed_json(const Election& election, const CostedAssertion& a);
json batch_plan_json(const Election& election, const BatchCheckPlan& plan);
json frw_plan_json(const Election& election, const AuditPlan& plan);
json general_report_json(const Election& election, const PartialAuditReport& report);
json sim_json(const SimReport& report);

/// Inverse of assertion_json: candidates by name, bounds as exact fractions.
/// Throws ParseError on malformed entries or unknown names.
Assertion assertion_from_json(const Election& election, const json& j);

/// Assertions of an exported plan document. Entries of "assertions" apply to
/// the ballots with the "excluded" candidates struck out; entries of
/// "batch_assertions" apply to the ballots as cast.
struct PlanDocument {
  std::vector<Assertion> assertions;
  std::vector<CandidateId> excluded;
  std::vector<Assertion> batch_assertions;

  std::vector<SimAssertion> for_simulation() const;
};
PlanDocument plan_from_json(const Election& election, const json& j);

struct RunManifest {
  std::string version = kToolVersion;
  std::string input_sha256;
  std::string command;
  std::map<std::string, std::string> parameters;
  std::string timestamp;  // UTC, ISO 8601
};

std::string sha256_hex(std::string_view bytes);
std::string utc_timestamp();
json manifest_json(const RunManifest& manifest);

std::string trace_table(const Election& election, const TabulationTrace& trace);
std::string assertions_table(const Election& election, const std::vector<CostedAssertion>& assertions,
                             std::int64_t total);
std::string general_summary(const Election& election, const PartialAuditReport& report);
std::string sim_summary(const SimReport& report);

}  // namespace stvrla
