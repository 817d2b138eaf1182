#include "stvrla/report.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <iomanip>
#include <sstream>

#include "stvrla/errors.hpp"

namespace stvrla {

json rational_json(const Rational& r, int digits) {
  return json{{"value", to_decimal_string(r, digits)}, {"exact", to_fraction_string(r)}};
}

json asn_json(std::int64_t asn) { return feasible(asn) ? json(asn) : json(nullptr); }

namespace {

json names_json(const Election& e, std::span<const CandidateId> ids) {
  json out = json::array();
  for (auto c : ids) out.push_back(e.name_of(c));
  return out;
}

json set_json(const Election& e, const CandidateSet& s) { return names_json(e, s.members()); }

json bounds_json(std::span<const Rational> v) {
  json out = json::array();
  for (const auto& r : v) out.push_back(rational_json(r));
  return out;
}

json assertion_list(const Election& e, const std::vector<CostedAssertion>& list) {
  json out = json::array();
  for (const auto& a : list) out.push_back(costed_json(e, a));
  return out;
}

Rational bound_from(const json& j) {
  if (j.is_object() && j.contains("exact")) return parse_rational(j.at("exact").get<std::string>());
  if (j.is_string()) return parse_rational(j.get<std::string>());
  throw ParseError("bound must be an object with an \"exact\" field or a string");
}

std::vector<CandidateId> ids_from(const Election& e, const json& j) {
  std::vector<CandidateId> out;
  for (const auto& n : j) out.push_back(e.id_of(n.get<std::string>()));
  return out;
}

std::vector<Rational> bounds_from(const json& j) {
  std::vector<Rational> out;
  for (const auto& b : j) out.push_back(bound_from(b));
  return out;
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

std::string asn_text(std::int64_t asn) { return feasible(asn) ? std::to_string(asn) : "inf"; }

}  // namespace

// Every entry carries the same keys; unary assertions have a null loser and
// put their single bound in tau_upper (UT) or tau_lower (LT*).
json assertion_json(const Election& e, const Assertion& a) {
  json j{{"type", type_name(a)},      {"description", describe(a, e)}, {"winner", e.name_of(subject_of(a))},
         {"loser", nullptr},          {"already_elected", json::array()}, {"tau_lower", json::array()},
         {"tau_upper", json::array()}, {"g_star", json::array()},          {"o_star", json::array()}};
  if (const auto* x = std::get_if<UT>(&a)) {
    j["tau_upper"].push_back(rational_json(x->upper));
  } else if (const auto* x = std::get_if<LTStar>(&a)) {
    j["tau_lower"].push_back(rational_json(x->lower));
  } else if (const auto* x = std::get_if<AGStar>(&a)) {
    j["loser"] = e.name_of(x->loser);
    j["already_elected"] = names_json(e, x->elected);
    j["tau_lower"] = bounds_json(x->lower);
    j["tau_upper"] = bounds_json(x->upper);
  } else if (const auto* x = std::get_if<NLStar>(&a)) {
    j["loser"] = e.name_of(x->loser);
    j["already_elected"] = names_json(e, x->elected);
    j["tau_lower"] = bounds_json(x->lower);
    j["tau_upper"] = bounds_json(x->upper);
    j["g_star"] = names_json(e, x->g_star);
    j["o_star"] = names_json(e, x->o_star);
    j["nl_compat"] = x->compat;
  }
  return j;
}

json costed_json(const Election& e, const CostedAssertion& a) {
  json j = assertion_json(e, a.assertion);
  j["holds"] = a.check.holds;
  j["lhs"] = rational_json(a.check.lhs);
  j["rhs"] = rational_json(a.check.rhs);
  j["margin"] = a.margin;
  j["asn"] = asn_json(a.asn);
  return j;
}

Assertion assertion_from_json(const Election& e, const json& j) {
  try {
    const auto type = j.at("type").get<std::string>();
    const auto winner = e.id_of(j.at("winner").get<std::string>());
    const auto elected = ids_from(e, j.value("already_elected", json::array()));
    const auto lower = bounds_from(j.value("tau_lower", json::array()));
    const auto upper = bounds_from(j.value("tau_upper", json::array()));
    auto single = [](const std::vector<Rational>& v, const char* what) {
      if (v.size() != 1) throw ParseError(std::string("expected exactly one ") + what + " bound");
      return v.front();
    };
    Assertion a;
    if (type == "IQ") {
      a = IQ{winner};
    } else if (type == "UT") {
      a = UT{winner, single(upper, "tau_upper")};
    } else if (type == "LT*") {
      a = LTStar{winner, single(lower, "tau_lower")};
    } else if (type == "AG" || type == "AG*") {
      a = AGStar{winner, e.id_of(j.at("loser").get<std::string>()), elected, lower, upper};
    } else if (type == "NL" || type == "NL*") {
      a = NLStar{winner,
                 e.id_of(j.at("loser").get<std::string>()),
                 elected,
                 lower,
                 upper,
                 ids_from(e, j.value("g_star", json::array())),
                 ids_from(e, j.value("o_star", json::array())),
                 j.value("nl_compat", type == "NL")};
    } else {
      throw ParseError("unknown assertion type \"" + type + "\"");
    }
    validate(a);
    return a;
  } catch (const json::exception& ex) {
    throw ParseError(std::string("malformed assertion: ") + ex.what());
  } catch (const InvalidParameter& ex) {
    throw ParseError(std::string("invalid assertion: ") + ex.what());
  }
}

PlanDocument plan_from_json(const Election& e, const json& j) {
  if (!j.is_object() || !j.contains("assertions") || !j.at("assertions").is_array()) {
    throw ParseError("plan document needs an \"assertions\" array");
  }
  PlanDocument doc;
  for (const auto& a : j.at("assertions")) doc.assertions.push_back(assertion_from_json(e, a));
  if (j.contains("excluded")) doc.excluded = ids_from(e, j.at("excluded"));
  if (j.contains("batch_assertions")) {
    for (const auto& a : j.at("batch_assertions")) doc.batch_assertions.push_back(assertion_from_json(e, a));
  }
  return doc;
}

std::vector<SimAssertion> PlanDocument::for_simulation() const {
  std::vector<SimAssertion> out;
  for (const auto& a : batch_assertions) out.push_back({a, {}});
  const CandidateSet struck(excluded);
  for (const auto& a : assertions) out.push_back({a, struck});
  return out;
}

json trace_json(const Election& e, const TabulationTrace& trace) {
  json first = json::object();
  for (std::size_t i = 0; i < trace.first_pref_tallies.size(); ++i) first[e.candidates[i]] = trace.first_pref_tallies[i];
  json rounds = json::array();
  for (const auto& r : trace.rounds) {
    json tallies = json::object();
    for (std::size_t i = 0; i < r.tallies.size(); ++i) tallies[e.candidates[i]] = rational_json(r.tallies[i]);
    json round{{"index", r.index},
               {"action", to_string(r.action.kind)},
               {"subjects", names_json(e, r.action.subjects)},
               {"tie_broken", r.action.tie_broken},
               {"tallies", tallies},
               {"exhausted", rational_json(r.exhausted)}};
    if (r.action.transfer_value) round["transfer_value"] = rational_json(*r.action.transfer_value);
    rounds.push_back(round);
  }
  return json{{"election", e.name},
              {"seats", e.seats},
              {"quota", trace.quota},
              {"total_valid", trace.total_valid},
              {"winners", names_json(e, trace.winners)},
              {"first_preferences", first},
              {"rounds", rounds},
              {"tie_broken", trace.tie_broken()}};
}

json batch_plan_json(const Election& e, const BatchCheckPlan& plan) {
  return json{{"top", names_json(e, plan.top)},
              {"batch", names_json(e, plan.batch)},
              {"top_tie", plan.top_tie},
              {"feasible", plan.feasible},
              {"overall_asn", asn_json(plan.overall_asn)},
              {"assertions", assertion_list(e, plan.assertions)}};
}

json frw_plan_json(const Election& e, const AuditPlan& plan) {
  json search = json::array();
  for (const auto& it : plan.search) {
    search.push_back(json{{"lower", rational_json(it.lower)},
                          {"upper", rational_json(it.upper)},
                          {"asn", asn_json(it.asn)},
                          {"improved", it.improved}});
  }
  json accepted = json::array();
  for (auto a : plan.accepted_asns) accepted.push_back(a);
  return json{{"kind", to_string(plan.kind)},
              {"first_winner", e.name_of(plan.w1)},
              {"second_winner", e.name_of(plan.w2)},
              {"reported_transfer_value", rational_json(plan.reported_tv)},
              {"lower", rational_json(plan.lower)},
              {"upper", rational_json(plan.upper)},
              {"overall_asn", asn_json(plan.overall_asn)},
              {"assertions", assertion_list(e, plan.assertions)},
              {"search", search},
              {"accepted_asns", accepted}};
}

json general_report_json(const Election& e, const PartialAuditReport& r) {
  json remaining = json::array();
  for (const auto& [a, b] : r.remaining_pairs) remaining.push_back(json::array({e.name_of(a), e.name_of(b)}));
  return json{{"kind", to_string(r.kind)},
              {"definite_winners", set_json(e, r.definite_winners)},
              {"definite_losers", set_json(e, r.definite_losers)},
              {"potential_winners", set_json(e, r.potential_winners)},
              {"remaining_pairs", remaining},
              {"stage2_asn", asn_json(r.stage2_asn)},
              {"stage3_asn", asn_json(r.stage3_asn)},
              {"overall_asn", asn_json(r.overall_asn)},
              {"stats",
               {{"ag_count", r.ag_count},
                {"stage2_definite_losers", r.stage2_losers},
                {"pairs_considered", r.pairs_considered},
                {"stage2_asn_initial", asn_json(r.stage2_asn_initial)},
                {"stage3_asn_initial", asn_json(r.stage3_asn_initial)},
                {"reduced", names_json(e, r.reduced)},
                {"batch_excluded", names_json(e, r.batch_excluded)}}},
              {"assertions", assertion_list(e, r.assertions)}};
}

json sim_json(const SimReport& r) {
  json per = json::array();
  for (const auto& a : r.per_assertion) {
    per.push_back(json{{"description", a.description},
                       {"certified_rate", a.certified_rate},
                       {"mean_sample", a.mean_sample}});
  }
  return json{{"trials", r.trials},
              {"seed", r.seed},
              {"population", r.population},
              {"completion_rate", r.completion_rate},
              {"mean_sample", r.mean_sample},
              {"p90_sample", r.p90_sample},
              {"per_assertion", per}};
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

json manifest_json(const RunManifest& m) {
  return json{{"tool", "stvrla"},
              {"version", m.version},
              {"input_sha256", m.input_sha256},
              {"command", m.command},
              {"parameters", m.parameters},
              {"timestamp", m.timestamp}};
}

std::string trace_table(const Election& e, const TabulationTrace& trace) {
  std::ostringstream os;
  os << "Quota " << trace.quota << ", " << trace.total_valid << " valid ballots\n";
  std::size_t width = 10;
  for (const auto& n : e.candidates) width = std::max(width, n.size() + 2);
  os << pad("Round", 7);
  for (const auto& n : e.candidates) os << pad(n, width);
  os << "Action\n";
  for (const auto& r : trace.rounds) {
    os << pad(std::to_string(r.index), 7);
    for (const auto& t : r.tallies) os << pad(to_decimal_string(t, 3), width);
    os << to_string(r.action.kind);
    for (auto c : r.action.subjects) os << ' ' << e.name_of(c);
    if (r.action.transfer_value) {
      os << " (tv " << to_fraction_string(*r.action.transfer_value) << " = "
         << to_decimal_string(*r.action.transfer_value, 4) << ")";
    }
    if (r.action.tie_broken) os << " [tie broken by id]";
    os << '\n';
  }
  os << "Winners:";
  for (auto c : trace.winners) os << ' ' << e.name_of(c);
  os << '\n';
  return os.str();
}

std::string assertions_table(const Election& e, const std::vector<CostedAssertion>& assertions,
                             std::int64_t total) {
  std::vector<std::string> desc;
  std::size_t width = 9;
  for (const auto& a : assertions) {
    desc.push_back(describe(a.assertion, e));
    width = std::max(width, desc.back().size() + 2);
  }
  std::ostringstream os;
  os << pad("Assertion", width) << pad("Margin", 10) << "ASN\n";
  for (std::size_t i = 0; i < assertions.size(); ++i) {
    std::ostringstream m;
    m << std::fixed << std::setprecision(4) << assertions[i].margin;
    os << pad(desc[i], width) << pad(m.str(), 10) << asn_text(assertions[i].asn) << '\n';
  }
  os << pad("Total cost:", width + 10) << asn_text(total) << '\n';
  return os.str();
}

std::string general_summary(const Election& e, const PartialAuditReport& r) {
  auto list = [&](const CandidateSet& s) {
    std::string out;
    for (auto c : s.members()) out += (out.empty() ? "" : ", ") + e.name_of(c);
    return out.empty() ? std::string("-") : out;
  };
  std::ostringstream os;
  os << "Audit: " << to_string(r.kind) << '\n';
  os << "Definite winners:  " << list(r.definite_winners) << '\n';
  os << "Potential winners: " << list(r.potential_winners) << '\n';
  os << "Definite losers:   " << list(r.definite_losers) << '\n';
  os << "AG assertions formed: " << r.ag_count << ", stage 2 losers: " << r.stage2_losers
     << ", pairs considered: " << r.pairs_considered << '\n';
  os << "Stage 2 ASN " << asn_text(r.stage2_asn_initial) << " -> " << asn_text(r.stage2_asn) << ", stage 3 ASN "
     << asn_text(r.stage3_asn_initial) << " -> " << asn_text(r.stage3_asn) << '\n';
  if (!r.remaining_pairs.empty()) {
    os << "Pairs not ruled out:";
    for (const auto& [a, b] : r.remaining_pairs) os << " (" << e.name_of(a) << ", " << e.name_of(b) << ')';
    os << '\n';
  }
  os << assertions_table(e, r.assertions, r.overall_asn);
  return os.str();
}

std::string sim_summary(const SimReport& r) {
  std::ostringstream os;
  os << r.trials << " trials (seed " << r.seed << "), population " << r.population << '\n';
  os << "Completed: " << std::fixed << std::setprecision(3) << r.completion_rate << ", mean sample "
     << std::setprecision(1) << r.mean_sample << ", 90th percentile " << r.p90_sample << '\n';
  for (const auto& a : r.per_assertion) {
    os << "  " << a.description << ": certified " << std::setprecision(3) << a.certified_rate << ", mean "
       << std::setprecision(1) << a.mean_sample << '\n';
  }
  return os.str();
}

}  // namespace stvrla
