#pragma once

#include <cstdint>
#include <vector>

#include "stvrla/planning.hpp"
#include "stvrla/tabulator.hpp"

namespace stvrla {

struct FrwConfig {
  Rational delta{1, 20};
  AuditParams params;
};

void validate(const FrwConfig& config);

// One evaluated (lower, upper) bound pair of the search.
struct FrwIteration {
  Rational lower;
  Rational upper;
  std::int64_t asn = kInfeasibleAsn;
  bool improved = false;
};

struct AuditPlan {
  std::vector<CostedAssertion> assertions;
  std::int64_t overall_asn = kInfeasibleAsn;
  PlanKind kind = PlanKind::Infeasible;
  CandidateId w1;
  CandidateId w2;
  Rational reported_tv;
  Rational lower;  // chosen bounds on w1's transfer value
  Rational upper;
  std::vector<FrwIteration> search;
  // Plan cost after each accepted outer iteration, in order.
  std::vector<std::int64_t> accepted_asns;
};

/// True iff the first action after any batch elimination elects a candidate.
bool frw_criterion(const TabulationTrace& trace);

/// Assertions for a two-seat election whose first winner has a quota on first
/// preferences (after any batch elimination recorded in `trace`). Searches
/// lower bounds 0, tau/2, tau/2 + delta, ... and, for each, upper bounds
/// tau + delta, tau + 2 delta, ... below 2/3, keeping strict improvements.
///
/// Throws FirstRoundWinnerCriterion when the trace does not start with an
/// election, InvalidParameter when the contest is not for two seats.
AuditPlan plan_frw(const Election& election, const TabulationTrace& trace, const FrwConfig& config = {});

}  // namespace stvrla
