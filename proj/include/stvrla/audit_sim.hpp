#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "stvrla/assertions.hpp"
#include "stvrla/risk.hpp"

namespace stvrla {

/// A paper ballot paired with its cast vote record.
struct CvrPair {
  Ranking reported;
  Ranking actual;
  std::int64_t count = 0;
};

/// Every ballot recorded correctly.
std::vector<CvrPair> identical_population(const Election& election);

/// A plan assertion and the candidates struck from the ballots before it is
/// scored (batch-eliminated candidates for assertions about the later count).
struct SimAssertion {
  Assertion assertion;
  CandidateSet excluded;
};

struct ErrorModel {
  // Chance that a drawn ballot shows a one-vote overstatement for an assertion
  // (comparison audits only).
  double overstatement_rate = 0.0;
};

struct AssertionSimStats {
  std::string description;
  double certified_rate = 0.0;
  double mean_sample = 0.0;
};

struct SimReport {
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::int64_t population = 0;
  double completion_rate = 0.0;  // trials in which every assertion reached the risk limit
  double mean_sample = 0.0;      // a trial that does not complete counts the whole population
  std::int64_t p90_sample = 0;
  std::vector<AssertionSimStats> per_assertion;
};

/// Runs `trials` audits of `plan`, each drawing ballots without replacement
/// from `population` until every assertion's test reaches the risk limit.
/// Assorters (and so the comparison margins) come from `reported`.
/// Deterministic for a given seed. Throws InvalidParameter for zero trials or
/// an empty population.
SimReport simulate_audit(const Election& reported, std::span<const CvrPair> population,
                         std::span<const SimAssertion> plan, const AuditParams& params, std::size_t trials,
                         std::uint64_t seed, const ErrorModel& errors = {});
SimReport simulate_audit(const Election& reported, std::span<const CvrPair> population,
                         std::span<const Assertion> plan, const AuditParams& params, std::size_t trials,
                         std::uint64_t seed, const ErrorModel& errors = {});

/// Same, with the reported records matching the ballots exactly.
SimReport simulate_audit(const Election& truth, std::span<const Assertion> plan, const AuditParams& params,
                         std::size_t trials, std::uint64_t seed, const ErrorModel& errors = {});

}  // namespace stvrla
