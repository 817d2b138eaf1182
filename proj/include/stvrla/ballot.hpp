#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace stvrla {

/// Dense 0-based index into an election's candidate name table.
struct CandidateId {
  std::uint32_t index = 0;

  friend constexpr auto operator<=>(CandidateId, CandidateId) = default;
};

/// Preference order, most preferred first. No duplicates; need not be complete.
using Ranking = std::vector<CandidateId>;

/// Set of candidates backed by a growable bitset.
class CandidateSet {
 public:
  CandidateSet() = default;
  CandidateSet(std::initializer_list<CandidateId> ids);
  explicit CandidateSet(std::span<const CandidateId> ids);

  // Every candidate 0..count-1.
  static CandidateSet all(std::size_t count);

  bool contains(CandidateId c) const {
    const std::size_t w = c.index / 64;
    return w < words_.size() && ((words_[w] >> (c.index % 64)) & 1U) != 0;
  }
  void insert(CandidateId c);
  void erase(CandidateId c);
  std::size_t size() const;
  bool empty() const { return size() == 0; }

  // Members in increasing id order.
  std::vector<CandidateId> members() const;

  friend bool operator==(const CandidateSet& a, const CandidateSet& b);

 private:
  std::vector<std::uint64_t> words_;
};

struct BallotGroup {
  Ranking ranking;
  std::int64_t count = 0;

  friend bool operator==(const BallotGroup&, const BallotGroup&) = default;
};

/// An STV contest: candidates, the ballot multiset, seats and quota.
///
/// Construct through make_election so that identical rankings are merged and
/// the quota is filled in.
struct Election {
  std::string name;
  std::vector<std::string> candidates;
  std::vector<BallotGroup> ballots;
  int seats = 1;
  std::int64_t quota = 0;
  std::int64_t total_valid = 0;
  bool quota_overridden = false;

  std::size_t candidate_count() const { return candidates.size(); }
  const std::string& name_of(CandidateId c) const { return candidates.at(c.index); }
  std::optional<CandidateId> find(std::string_view candidate_name) const;
  // Throws ParseError when the name is unknown.
  CandidateId id_of(std::string_view candidate_name) const;

  friend bool operator==(const Election&, const Election&) = default;
};

/// floor(total_valid / (seats + 1)) + 1. Throws InvalidParameter for seats < 1.
std::int64_t droop_quota(std::int64_t total_valid, int seats);

/// Largest subsequence of `ranking` made of members of `keep`.
Ranking project(std::span<const CandidateId> ranking, const CandidateSet& keep);

std::optional<CandidateId> first_preference(std::span<const CandidateId> ranking);

/// Builds a canonical election. Rankings are validated (known ids, no
/// duplicates), groups with identical rankings are merged in first-seen order,
/// and the quota is the Droop quota unless `quota_override` is given.
Election make_election(std::string name, std::vector<std::string> candidates,
                       std::vector<BallotGroup> ballots, int seats,
                       std::optional<std::int64_t> quota_override = std::nullopt);

/// t_{c,1} for every candidate.
std::vector<std::int64_t> first_preference_tallies(const Election& election);

/// The election with `removed` struck from every ranking. Candidate ids, the
/// ballot total and the quota are unchanged, so ballots of a removed candidate
/// move to their next preference at full value.
Election without_candidates(const Election& election, const CandidateSet& removed);

}  // namespace stvrla
