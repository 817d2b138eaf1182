#pragma once

#include <cstdint>
#include <vector>

#include "stvrla/planning.hpp"
#include "stvrla/tabulator.hpp"

namespace stvrla {

struct BatchCheckPlan {
  std::vector<CandidateId> top;    // highest first-preference tallies, best first
  std::vector<CandidateId> batch;  // candidates removed by batch elimination
  std::vector<CostedAssertion> assertions;  // AG(t, c) for every t in top, c in batch
  bool feasible = true;
  std::int64_t overall_asn = 0;
  // The seats-th and (seats+1)-th first-preference tallies are equal, so the
  // top set was chosen by candidate id.
  bool top_tie = false;
};

/// AG(t, c) for every top candidate t and batch-eliminated candidate c. The
/// plan is feasible when all of them hold with a finite sample size.
BatchCheckPlan plan_batch_check(const Election& election, const AuditParams& params = {},
                                BatchThreshold threshold = BatchThreshold::StrictLess);

}  // namespace stvrla
