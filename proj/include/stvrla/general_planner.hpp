#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "stvrla/planning.hpp"
#include "stvrla/tabulator.hpp"

namespace stvrla {

/// Unordered candidate pair, stored with first < second.
using CandidatePair = std::pair<CandidateId, CandidateId>;

CandidatePair make_pair_sorted(CandidateId a, CandidateId b);

/// Holding, auditable AG(w, l) assertions keyed by (w, l).
using AgMap = std::map<std::pair<CandidateId, CandidateId>, CostedAssertion>;

/// Stage 1: AG(c, c') for every ordered pair of `active` candidates (all
/// candidates when `active` is empty).
AgMap stage1_all_ags(const Election& election, const AuditParams& params, const CandidateSet& active = {});

struct Stage2Result {
  CandidateSet definite_losers;
  // The two cheapest dominating AGs for each definite loser.
  std::map<CandidateId, std::vector<CostedAssertion>> assertions;
  // Per definite loser, the larger ASN of its two AGs.
  std::map<CandidateId, std::int64_t> cost;
  std::int64_t asn = 0;
};

/// Stage 2: candidates with at least two distinct AG dominators.
Stage2Result stage2_definite_losers(const AgMap& ags, const Election& election, const CandidateSet& active = {});

struct PairRuling {
  CandidatePair pair;
  CandidateId seated;  // the pair member assumed seated by the NL
  NlFormation formation;
};

struct Stage3Result {
  std::vector<PairRuling> ruled_out;
  std::vector<CandidatePair> remaining;
  std::int64_t asn = 0;  // max cost over ruled-out pairs
};

/// Rules out each listed pair with the cheapest NL(c', c2, [c1], G, O) or
/// NL(c', c1, [c2], G, O) that can be formed, c' ranging over the active
/// candidates outside the pair.
Stage3Result stage3_rule_out(const Election& election, const std::vector<CandidatePair>& pairs, const AgMap& ags,
                             const AuditParams& params, const CandidateSet& active = {});

/// Stage 3 over every pair of active non-definite-losers except the reported
/// winning pair.
Stage3Result stage3_rule_out_pairs(const Election& election, const CandidateSet& definite_losers, const AgMap& ags,
                                   const std::vector<CandidateId>& winners, const AuditParams& params,
                                   const CandidateSet& active = {});

struct GeneralState {
  CandidateSet active;
  std::vector<CandidateId> winners;
  Stage2Result stage2;
  Stage3Result stage3;
  // Definite losers moved to NL-based ruling by stage 4, in order.
  std::vector<CandidateId> reduced;

  std::int64_t stage2_asn() const;
  std::int64_t stage3_asn() const;
};

/// Stage 4: while stage 2 is the more expensive, try to replace the costliest
/// definite loser's AGs with NLs ruling out every pair it could win in.
GeneralState stage4_reduce(const Election& election, GeneralState state, const AgMap& ags,
                           const AuditParams& params);

struct PartialAuditReport {
  CandidateSet definite_losers;
  CandidateSet definite_winners;
  CandidateSet potential_winners;
  std::vector<CandidatePair> remaining_pairs;
  std::vector<CostedAssertion> assertions;
  std::int64_t stage2_asn = 0;
  std::int64_t stage3_asn = 0;
  std::int64_t overall_asn = 0;
  PlanKind kind = PlanKind::PartialRLA;

  // Search statistics.
  std::size_t ag_count = 0;
  std::size_t stage2_losers = 0;
  std::size_t pairs_considered = 0;
  std::int64_t stage2_asn_initial = 0;
  std::int64_t stage3_asn_initial = 0;
  std::vector<CandidateId> reduced;
  std::vector<CandidateId> batch_excluded;
};

/// Stage 5. Definite winners are the candidates common to the reported
/// winning pair and every remaining pair, so they are always reported winners.
PartialAuditReport stage5_summarize(const GeneralState& state, const Election& election);

/// Stages 1-5 for a two-seat contest. Candidates batch-eliminated in `trace`
/// are excluded and counted as definite losers.
PartialAuditReport plan_general(const Election& election, const TabulationTrace& trace,
                                const AuditParams& params = {});

}  // namespace stvrla
