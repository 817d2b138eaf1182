#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "stvrla/ballot.hpp"
#include "stvrla/rational.hpp"

namespace stvrla {

enum class ActionKind { BatchEliminate, Eliminate, Elect, ElectRemaining };

const char* to_string(ActionKind kind);

struct RoundAction {
  ActionKind kind = ActionKind::Eliminate;
  std::vector<CandidateId> subjects;
  std::optional<Rational> transfer_value;  // set only for Elect
  bool tie_broken = false;                 // lowest id chosen among equal candidates
};

/// One round of the count. `tallies` are taken at the start of the round:
/// standing candidates hold their pile, elected candidates retain the quota,
/// eliminated candidates hold zero. `exhausted` is cumulative.
struct RoundRecord {
  int index = 0;
  std::vector<Rational> tallies;
  RoundAction action;
  Rational exhausted;
};

struct TabulationTrace {
  std::vector<RoundRecord> rounds;
  std::vector<CandidateId> winners;
  std::vector<std::int64_t> first_pref_tallies;
  std::int64_t quota = 0;
  std::int64_t total_valid = 0;

  // Transfer value applied when `c` was elected with a surplus.
  std::optional<Rational> transfer_value_of(CandidateId c) const;
  // The candidate's tally at the start of the last round in which it was
  // still standing.
  std::optional<Rational> last_standing_tally(CandidateId c) const;
  // Candidates removed by the batch-elimination pre-step (empty if none).
  std::vector<CandidateId> batch_eliminated() const;
  // First action after any batch elimination.
  const RoundAction* first_regular_action() const;
  bool tie_broken() const;
};

// Comparison used when deciding batch elimination against the N-th highest
// first-preference tally.
enum class BatchThreshold { StrictLess, LessOrEqual };

struct TabulationOptions {
  bool batch_first = false;
  bool strict_ties = false;  // throw TieError instead of breaking ties by id
  BatchThreshold batch_threshold = BatchThreshold::StrictLess;
};

/// (tally - quota) / tally. Requires tally >= quota > 0.
Rational transfer_value(const Rational& tally, std::int64_t quota);

/// Number of ballots on which `c` is ranked at all.
std::int64_t mention_count(const Election& election, CandidateId c);

/// The `seats` candidates with the highest first-preference tallies, ties to
/// the lower id. Ordered by tally, highest first.
std::vector<CandidateId> top_candidates(const Election& election);

/// Candidates outside the top set whose mention count cannot reach the
/// smallest first-preference tally inside it.
CandidateSet batch_eliminate(const Election& election,
                             BatchThreshold threshold = BatchThreshold::StrictLess);

/// US-style STV count in exact arithmetic. Throws InvalidParameter when there
/// are fewer candidates than seats, TieError in strict mode.
TabulationTrace tabulate(const Election& election, const TabulationOptions& options = {});

}  // namespace stvrla
