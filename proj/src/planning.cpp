#include "stvrla/planning.hpp"

#include <algorithm>

namespace stvrla {

const char* to_string(PlanKind kind) {
  switch (kind) {
    case PlanKind::FullRLA: return "full";
    case PlanKind::PartialRLA: return "partial";
    case PlanKind::Infeasible: return "infeasible";
  }
  return "?";
}

CostedAssertion cost_assertion(const Election& election, Assertion assertion, const AuditParams& params) {
  CostedAssertion out;
  out.check = evaluate(election, assertion);
  const auto assorter = to_assorter(assertion, election);
  out.margin = to_double(assorter.margin);
  if (out.check.holds) {
    if (auto asn = estimate_asn(assorter, params)) out.asn = *asn;
  }
  out.assertion = std::move(assertion);
  return out;
}

std::int64_t max_asn(std::span<const CostedAssertion> assertions) {
  std::int64_t m = 0;
  for (const auto& a : assertions) m = std::max(m, a.asn);
  return m;
}

namespace {

struct Helper {
  const CostedAssertion* ag = nullptr;
  bool for_loser = false;  // g in G* (true) or o in O* (false)
  CandidateId who;
};

bool contains(std::span<const CandidateId> v, CandidateId c) {
  return std::find(v.begin(), v.end(), c) != v.end();
}

}  // namespace

std::optional<NlFormation> form_nl(const Election& election, const NLStar& base,
                                   std::span<const CostedAssertion> g_helpers,
                                   std::span<const CostedAssertion> o_helpers, const AuditParams& params) {
  std::vector<Helper> helpers;
  auto usable = [&](CandidateId c) {
    return c != base.winner && c != base.loser && !contains(base.elected, c);
  };
  for (const auto& h : g_helpers) {
    const auto& ag = std::get<AGStar>(h.assertion);
    if (h.check.holds && ag.loser == base.loser && usable(ag.winner)) helpers.push_back({&h, true, ag.winner});
  }
  for (const auto& h : o_helpers) {
    const auto& ag = std::get<AGStar>(h.assertion);
    if (h.check.holds && ag.winner == base.winner && usable(ag.loser)) helpers.push_back({&h, false, ag.loser});
  }
  std::stable_sort(helpers.begin(), helpers.end(),
                   [](const Helper& a, const Helper& b) { return a.ag->asn < b.ag->asn; });

  auto with_helpers = [&](const std::vector<std::size_t>& chosen) {
    NLStar nl = base;
    nl.g_star.clear();
    nl.o_star.clear();
    for (auto i : chosen) (helpers[i].for_loser ? nl.g_star : nl.o_star).push_back(helpers[i].who);
    std::sort(nl.g_star.begin(), nl.g_star.end());
    std::sort(nl.o_star.begin(), nl.o_star.end());
    return nl;
  };
  auto build = [&](const std::vector<std::size_t>& chosen) {
    return cost_assertion(election, with_helpers(chosen), params);
  };

  // Helpers only ever raise t2min_w and lower t2max_l, so if the NL fails
  // with all of them it fails with any subset.
  std::vector<std::size_t> all(helpers.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  if (!eval_nlstar(election, with_helpers(all)).holds) return std::nullopt;
  auto nl_asn = [](const CostedAssertion& c) { return c.check.holds ? c.asn : kInfeasibleAsn; };
  auto total_cost = [&](const CostedAssertion& nl, const std::vector<std::size_t>& chosen) {
    std::int64_t m = nl_asn(nl);
    for (auto i : chosen) m = std::max(m, helpers[i].ag->asn);
    return m;
  };

  std::vector<std::size_t> chosen;
  CostedAssertion current = build(chosen);
  for (std::size_t i = 0; i < helpers.size(); ++i) {
    if (!(nl_asn(current) > helpers[i].ag->asn)) continue;
    auto trial = chosen;
    trial.push_back(i);
    auto candidate = build(trial);
    if (nl_asn(candidate) < nl_asn(current)) {
      chosen = std::move(trial);
      current = std::move(candidate);
    }
  }

  // Some NLs only hold with several helpers at once: start from all of them
  // and drop the ones that do not pay for themselves.
  if (!feasible(nl_asn(current)) && !helpers.empty()) {
    auto full = build(all);
    if (full.check.holds && (!current.check.holds || total_cost(full, all) < total_cost(current, chosen))) {
      chosen = all;
      current = std::move(full);
      for (std::size_t k = helpers.size(); k-- > 0;) {
        std::vector<std::size_t> trial;
        for (auto i : chosen) {
          if (i != k) trial.push_back(i);
        }
        auto candidate = build(trial);
        if (candidate.check.holds && total_cost(candidate, trial) <= total_cost(current, chosen)) {
          chosen = std::move(trial);
          current = std::move(candidate);
        }
      }
    }
  }

  if (!current.check.holds) return std::nullopt;
  NlFormation out;
  out.cost = total_cost(current, chosen);
  out.nl = std::move(current);
  for (auto i : chosen) out.helpers.push_back(*helpers[i].ag);
  return out;
}

}  // namespace stvrla
