#include "stvrla/general_planner.hpp"

#include <algorithm>
#include <set>

#include "stvrla/errors.hpp"

namespace stvrla {

CandidatePair make_pair_sorted(CandidateId a, CandidateId b) { return a < b ? CandidatePair{a, b} : CandidatePair{b, a}; }

namespace {

CandidateSet resolve(const CandidateSet& active, const Election& election) {
  return active.empty() ? CandidateSet::all(election.candidate_count()) : active;
}

std::int64_t max_cost(const std::vector<PairRuling>& rulings) {
  std::int64_t m = 0;
  for (const auto& r : rulings) m = std::max(m, r.formation.cost);
  return m;
}

}  // namespace

AgMap stage1_all_ags(const Election& election, const AuditParams& params, const CandidateSet& active) {
  validate(params);
  AgMap out;
  const auto pool = resolve(active, election).members();
  for (auto w : pool) {
    for (auto l : pool) {
      if (w == l) continue;
      auto costed = cost_assertion(election, make_ag(w, l), params);
      if (costed.check.holds && feasible(costed.asn)) out.emplace(std::pair{w, l}, std::move(costed));
    }
  }
  return out;
}

Stage2Result stage2_definite_losers(const AgMap& ags, const Election& election, const CandidateSet& active) {
  Stage2Result out;
  const auto pool = resolve(active, election);
  std::map<CandidateId, std::vector<const CostedAssertion*>> dominators;
  for (const auto& [key, costed] : ags) {
    if (pool.contains(key.first) && pool.contains(key.second)) dominators[key.second].push_back(&costed);
  }
  for (auto& [loser, list] : dominators) {
    if (list.size() < 2) continue;
    // Map order already sorts by dominator id, so stable_sort breaks ASN ties by id.
    std::stable_sort(list.begin(), list.end(),
                     [](const CostedAssertion* a, const CostedAssertion* b) { return a->asn < b->asn; });
    out.definite_losers.insert(loser);
    out.assertions[loser] = {*list[0], *list[1]};
    out.cost[loser] = std::max(list[0]->asn, list[1]->asn);
    out.asn = std::max(out.asn, out.cost[loser]);
  }
  return out;
}

Stage3Result stage3_rule_out(const Election& election, const std::vector<CandidatePair>& pairs, const AgMap& ags,
                             const AuditParams& params, const CandidateSet& active) {
  validate(params);
  Stage3Result out;
  const auto pool = resolve(active, election).members();
  for (const auto& pair : pairs) {
    std::optional<PairRuling> best;
    for (const auto& [seated, loser] : {pair, std::pair{pair.second, pair.first}}) {
      std::vector<CostedAssertion> g_helpers;
      for (const auto& [key, costed] : ags) {
        if (key.second == loser) g_helpers.push_back(costed);
      }
      // c' may be any other candidate; it need not be a potential winner.
      for (auto other : pool) {
        if (other == seated || other == loser) continue;
        std::vector<CostedAssertion> o_helpers;
        for (const auto& [key, costed] : ags) {
          if (key.first == other) o_helpers.push_back(costed);
        }
        auto formed = form_nl(election, make_nl_compat(other, loser, {seated}, {}, {}), g_helpers, o_helpers, params);
        if (!formed || !feasible(formed->cost)) continue;
        if (!best || formed->cost < best->formation.cost) best = PairRuling{pair, seated, std::move(*formed)};
      }
    }
    if (best) {
      out.asn = std::max(out.asn, best->formation.cost);
      out.ruled_out.push_back(std::move(*best));
    } else {
      out.remaining.push_back(pair);
    }
  }
  return out;
}

Stage3Result stage3_rule_out_pairs(const Election& election, const CandidateSet& definite_losers, const AgMap& ags,
                                   const std::vector<CandidateId>& winners, const AuditParams& params,
                                   const CandidateSet& active) {
  const auto pool = resolve(active, election).members();
  const CandidatePair reported = winners.size() == 2 ? make_pair_sorted(winners[0], winners[1])
                                                     : CandidatePair{CandidateId{~0U}, CandidateId{~0U}};
  std::vector<CandidatePair> pairs;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (definite_losers.contains(pool[i])) continue;
    for (std::size_t j = i + 1; j < pool.size(); ++j) {
      if (definite_losers.contains(pool[j])) continue;
      const CandidatePair p{pool[i], pool[j]};
      if (p != reported) pairs.push_back(p);
    }
  }
  return stage3_rule_out(election, pairs, ags, params, active);
}

std::int64_t GeneralState::stage2_asn() const {
  std::int64_t m = 0;
  for (const auto& [c, cost] : stage2.cost) m = std::max(m, cost);
  return m;
}

std::int64_t GeneralState::stage3_asn() const { return max_cost(stage3.ruled_out); }

GeneralState stage4_reduce(const Election& election, GeneralState state, const AgMap& ags,
                           const AuditParams& params) {
  // With fewer than two reported winners no pair is excluded.
  const CandidatePair reported = state.winners.size() == 2 ? make_pair_sorted(state.winners[0], state.winners[1])
                                                           : CandidatePair{CandidateId{~0U}, CandidateId{~0U}};
  const auto pool = resolve(state.active, election).members();
  while (state.stage2_asn() > state.stage3_asn() && !state.stage2.cost.empty()) {
    auto hardest = state.stage2.cost.begin();
    for (auto it = state.stage2.cost.begin(); it != state.stage2.cost.end(); ++it) {
      if (it->second > hardest->second) hardest = it;
    }
    const CandidateId d = hardest->first;
    const std::int64_t asn2 = hardest->second;

    std::vector<CandidatePair> pairs;
    for (auto c : pool) {
      if (c == d || state.stage2.definite_losers.contains(c)) continue;
      const auto p = make_pair_sorted(d, c);
      if (p != reported) pairs.push_back(p);
    }
    auto attempt = stage3_rule_out(election, pairs, ags, params, state.active);
    if (!attempt.remaining.empty() || attempt.asn >= asn2) break;

    state.stage2.definite_losers.erase(d);
    state.stage2.assertions.erase(d);
    state.stage2.cost.erase(d);
    state.stage2.asn = state.stage2_asn();
    for (auto& r : attempt.ruled_out) state.stage3.ruled_out.push_back(std::move(r));
    state.stage3.asn = state.stage3_asn();
    state.reduced.push_back(d);
  }
  return state;
}

PartialAuditReport stage5_summarize(const GeneralState& state, const Election& election) {
  PartialAuditReport out;
  const auto pool = resolve(state.active, election);
  out.remaining_pairs = state.stage3.remaining;
  out.kind = out.remaining_pairs.empty() ? PlanKind::FullRLA : PlanKind::PartialRLA;

  std::vector<CandidatePair> possible = out.remaining_pairs;
  if (state.winners.size() == 2) possible.push_back(make_pair_sorted(state.winners[0], state.winners[1]));
  auto in_pair = [](const CandidatePair& p, CandidateId c) { return p.first == c || p.second == c; };

  for (std::uint32_t i = 0; i < election.candidate_count(); ++i) {
    const CandidateId c{i};
    const bool everywhere =
        !possible.empty() && std::all_of(possible.begin(), possible.end(), [&](const auto& p) { return in_pair(p, c); });
    const bool anywhere = std::any_of(possible.begin(), possible.end(), [&](const auto& p) { return in_pair(p, c); });
    if (everywhere) out.definite_winners.insert(c);
    if (!pool.contains(c) || state.stage2.definite_losers.contains(c) || !anywhere) {
      out.definite_losers.insert(c);
    } else {
      out.potential_winners.insert(c);
    }
  }

  std::set<std::pair<CandidateId, CandidateId>> seen_ags;
  auto add_ag = [&](const CostedAssertion& a) {
    const auto& ag = std::get<AGStar>(a.assertion);
    if (seen_ags.emplace(ag.winner, ag.loser).second) out.assertions.push_back(a);
  };
  for (const auto& [c, list] : state.stage2.assertions) {
    for (const auto& a : list) add_ag(a);
  }
  for (const auto& r : state.stage3.ruled_out) {
    out.assertions.push_back(r.formation.nl);
    for (const auto& h : r.formation.helpers) add_ag(h);
  }

  out.stage2_asn = state.stage2_asn();
  out.stage3_asn = state.stage3_asn();
  out.overall_asn = std::max(out.stage2_asn, out.stage3_asn);
  out.reduced = state.reduced;
  return out;
}

PartialAuditReport plan_general(const Election& election, const TabulationTrace& trace, const AuditParams& params) {
  validate(params);
  if (election.seats != 2) throw InvalidParameter("the general planner handles two-seat contests only");

  const auto batch = trace.batch_eliminated();
  const Election downstream = batch.empty() ? election : without_candidates(election, CandidateSet(batch));
  GeneralState state;
  state.active = CandidateSet::all(election.candidate_count());
  for (auto c : batch) state.active.erase(c);
  state.winners = trace.winners;

  const auto ags = stage1_all_ags(downstream, params, state.active);
  state.stage2 = stage2_definite_losers(ags, downstream, state.active);
  state.stage3 =
      stage3_rule_out_pairs(downstream, state.stage2.definite_losers, ags, state.winners, params, state.active);

  const std::size_t stage2_losers = state.stage2.definite_losers.size();
  const std::size_t pairs = state.stage3.ruled_out.size() + state.stage3.remaining.size();
  const std::int64_t s2 = state.stage2_asn();
  const std::int64_t s3 = state.stage3_asn();

  state = stage4_reduce(downstream, std::move(state), ags, params);
  auto report = stage5_summarize(state, downstream);
  report.ag_count = ags.size();
  report.stage2_losers = stage2_losers;
  report.pairs_considered = pairs;
  report.stage2_asn_initial = s2;
  report.stage3_asn_initial = s3;
  report.batch_excluded = batch;
  return report;
}

}  // namespace stvrla
