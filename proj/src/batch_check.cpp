#include "stvrla/batch_check.hpp"

#include <algorithm>

namespace stvrla {

BatchCheckPlan plan_batch_check(const Election& election, const AuditParams& params, BatchThreshold threshold) {
  validate(params);
  BatchCheckPlan plan;
  plan.top = top_candidates(election);
  plan.batch = batch_eliminate(election, threshold).members();

  const auto fp = first_preference_tallies(election);
  if (!plan.top.empty() && election.candidate_count() > plan.top.size()) {
    const auto last = fp[plan.top.back().index];
    for (std::uint32_t i = 0; i < election.candidate_count(); ++i) {
      const CandidateId c{i};
      if (fp[i] == last && std::find(plan.top.begin(), plan.top.end(), c) == plan.top.end()) plan.top_tie = true;
    }
  }

  for (auto t : plan.top) {
    for (auto c : plan.batch) {
      auto costed = cost_assertion(election, make_ag(t, c), params);
      if (!costed.check.holds || !feasible(costed.asn)) plan.feasible = false;
      plan.assertions.push_back(std::move(costed));
    }
  }
  plan.overall_asn = plan.feasible ? max_asn(plan.assertions) : kInfeasibleAsn;
  return plan;
}

}  // namespace stvrla
