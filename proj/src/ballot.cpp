#include "stvrla/ballot.hpp"

#include <algorithm>
#include <bit>
#include <map>

#include "stvrla/errors.hpp"

namespace stvrla {

CandidateSet::CandidateSet(std::initializer_list<CandidateId> ids) {
  for (auto c : ids) insert(c);
}

CandidateSet::CandidateSet(std::span<const CandidateId> ids) {
  for (auto c : ids) insert(c);
}

CandidateSet CandidateSet::all(std::size_t count) {
  CandidateSet s;
  for (std::size_t i = 0; i < count; ++i) s.insert(CandidateId{static_cast<std::uint32_t>(i)});
  return s;
}

void CandidateSet::insert(CandidateId c) {
  const std::size_t w = c.index / 64;
  if (w >= words_.size()) words_.resize(w + 1, 0);
  words_[w] |= std::uint64_t{1} << (c.index % 64);
}

void CandidateSet::erase(CandidateId c) {
  const std::size_t w = c.index / 64;
  if (w < words_.size()) words_[w] &= ~(std::uint64_t{1} << (c.index % 64));
}

std::size_t CandidateSet::size() const {
  std::size_t n = 0;
  for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

std::vector<CandidateId> CandidateSet::members() const {
  std::vector<CandidateId> out;
  for (std::size_t w = 0; w < words_.size(); ++w) {
    for (std::uint32_t b = 0; b < 64; ++b) {
      if ((words_[w] >> b) & 1U) out.push_back(CandidateId{static_cast<std::uint32_t>(w * 64 + b)});
    }
  }
  return out;
}

bool operator==(const CandidateSet& a, const CandidateSet& b) {
  const std::size_t n = std::max(a.words_.size(), b.words_.size());
  for (std::size_t i = 0; i < n; ++i) {
    const auto wa = i < a.words_.size() ? a.words_[i] : 0;
    const auto wb = i < b.words_.size() ? b.words_[i] : 0;
    if (wa != wb) return false;
  }
  return true;
}

std::optional<CandidateId> Election::find(std::string_view candidate_name) const {
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (candidates[i] == candidate_name) return CandidateId{static_cast<std::uint32_t>(i)};
  }
  return std::nullopt;
}

CandidateId Election::id_of(std::string_view candidate_name) const {
  if (auto c = find(candidate_name)) return *c;
  throw ParseError("unknown candidate '" + std::string(candidate_name) + "'");
}

std::int64_t droop_quota(std::int64_t total_valid, int seats) {
  if (seats < 1) throw InvalidParameter("seats must be at least 1");
  if (total_valid < 0) throw InvalidParameter("total ballot count must be non-negative");
  return total_valid / (seats + 1) + 1;
}

Ranking project(std::span<const CandidateId> ranking, const CandidateSet& keep) {
  Ranking out;
  out.reserve(ranking.size());
  for (auto c : ranking) {
    if (keep.contains(c)) out.push_back(c);
  }
  return out;
}

std::optional<CandidateId> first_preference(std::span<const CandidateId> ranking) {
  if (ranking.empty()) return std::nullopt;
  return ranking.front();
}

Election make_election(std::string name, std::vector<std::string> candidates,
                       std::vector<BallotGroup> ballots, int seats,
                       std::optional<std::int64_t> quota_override) {
  if (seats < 1) throw InvalidParameter("seats must be at least 1");
  {
    std::vector<std::string> sorted = candidates;
    std::sort(sorted.begin(), sorted.end());
    auto dup = std::adjacent_find(sorted.begin(), sorted.end());
    if (dup != sorted.end()) throw ParseError("duplicate candidate name '" + *dup + "'");
  }

  Election e;
  e.name = std::move(name);
  e.candidates = std::move(candidates);
  e.seats = seats;

  std::map<Ranking, std::size_t> index;
  for (std::size_t b = 0; b < ballots.size(); ++b) {
    auto& group = ballots[b];
    if (group.count <= 0) {
      throw ParseError("ballot " + std::to_string(b) + " has non-positive count " +
                       std::to_string(group.count));
    }
    CandidateSet seen;
    for (auto c : group.ranking) {
      if (c.index >= e.candidates.size()) {
        throw ParseError("ballot " + std::to_string(b) + " references unknown candidate id " +
                         std::to_string(c.index));
      }
      if (seen.contains(c)) {
        throw ParseError("ballot " + std::to_string(b) + " ranks candidate '" +
                         e.candidates[c.index] + "' more than once");
      }
      seen.insert(c);
    }
    e.total_valid += group.count;
    auto [it, fresh] = index.try_emplace(group.ranking, e.ballots.size());
    if (fresh) {
      e.ballots.push_back(std::move(group));
    } else {
      e.ballots[it->second].count += group.count;
    }
  }

  if (quota_override) {
    if (*quota_override <= 0) throw ParseError("quota must be positive");
    e.quota = *quota_override;
    e.quota_overridden = true;
  } else {
    e.quota = droop_quota(e.total_valid, seats);
  }
  return e;
}

std::vector<std::int64_t> first_preference_tallies(const Election& election) {
  std::vector<std::int64_t> t(election.candidate_count(), 0);
  for (const auto& g : election.ballots) {
    if (!g.ranking.empty()) t[g.ranking.front().index] += g.count;
  }
  return t;
}

Election without_candidates(const Election& election, const CandidateSet& removed) {
  CandidateSet keep = CandidateSet::all(election.candidate_count());
  for (auto c : removed.members()) keep.erase(c);

  std::vector<BallotGroup> groups;
  groups.reserve(election.ballots.size());
  for (const auto& g : election.ballots) groups.push_back({project(g.ranking, keep), g.count});

  Election out = make_election(election.name, election.candidates, std::move(groups),
                               election.seats, election.quota);
  out.quota_overridden = election.quota_overridden;
  return out;
}

}  // namespace stvrla
