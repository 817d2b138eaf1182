#include "stvrla/tabulator.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>

#include "stvrla/errors.hpp"

namespace stvrla {

const char* to_string(ActionKind kind) {
  switch (kind) {
    case ActionKind::BatchEliminate: return "batch-eliminate";
    case ActionKind::Eliminate: return "eliminate";
    case ActionKind::Elect: return "elect";
    case ActionKind::ElectRemaining: return "elect-remaining";
  }
  return "?";
}

std::optional<Rational> TabulationTrace::transfer_value_of(CandidateId c) const {
  for (const auto& r : rounds) {
    if (r.action.kind == ActionKind::Elect && r.action.subjects.front() == c) return r.action.transfer_value;
  }
  return std::nullopt;
}

std::optional<Rational> TabulationTrace::last_standing_tally(CandidateId c) const {
  std::optional<Rational> last;
  for (const auto& r : rounds) {
    if (r.action.kind == ActionKind::BatchEliminate) continue;
    bool gone = false;
    for (const auto& earlier : rounds) {
      if (earlier.index >= r.index) break;
      const auto& s = earlier.action.subjects;
      if (std::find(s.begin(), s.end(), c) != s.end()) gone = true;
    }
    if (!gone) last = r.tallies[c.index];
  }
  return last;
}

std::vector<CandidateId> TabulationTrace::batch_eliminated() const {
  if (!rounds.empty() && rounds.front().action.kind == ActionKind::BatchEliminate) {
    return rounds.front().action.subjects;
  }
  return {};
}

const RoundAction* TabulationTrace::first_regular_action() const {
  for (const auto& r : rounds) {
    if (r.action.kind != ActionKind::BatchEliminate) return &r.action;
  }
  return nullptr;
}

bool TabulationTrace::tie_broken() const {
  return std::any_of(rounds.begin(), rounds.end(), [](const auto& r) { return r.action.tie_broken; });
}

Rational transfer_value(const Rational& tally, std::int64_t quota) {
  if (quota <= 0) throw InvalidParameter("quota must be positive");
  const Rational q = make_rational(quota);
  if (tally < q) throw InvalidParameter("transfer value needs a tally of at least the quota");
  Rational tv = (tally - q) / tally;
  tv.canonicalize();
  return tv;
}

std::int64_t mention_count(const Election& election, CandidateId c) {
  std::int64_t n = 0;
  for (const auto& g : election.ballots) {
    if (std::find(g.ranking.begin(), g.ranking.end(), c) != g.ranking.end()) n += g.count;
  }
  return n;
}

std::vector<CandidateId> top_candidates(const Election& election) {
  const auto fp = first_preference_tallies(election);
  std::vector<CandidateId> order(election.candidate_count());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = CandidateId{static_cast<std::uint32_t>(i)};
  std::stable_sort(order.begin(), order.end(),
                   [&](CandidateId a, CandidateId b) { return fp[a.index] > fp[b.index]; });
  order.resize(std::min<std::size_t>(order.size(), static_cast<std::size_t>(election.seats)));
  return order;
}

CandidateSet batch_eliminate(const Election& election, BatchThreshold threshold) {
  CandidateSet out;
  const auto top = top_candidates(election);
  if (top.empty()) return out;
  const auto fp = first_preference_tallies(election);
  std::int64_t bar = fp[top.front().index];
  for (auto c : top) bar = std::min(bar, fp[c.index]);
  const CandidateSet top_set(top);

  for (std::size_t i = 0; i < election.candidate_count(); ++i) {
    const CandidateId c{static_cast<std::uint32_t>(i)};
    if (top_set.contains(c)) continue;
    const auto mentions = mention_count(election, c);
    const bool out_of_reach =
        threshold == BatchThreshold::StrictLess ? mentions < bar : mentions <= bar;
    if (out_of_reach) out.insert(c);
  }
  return out;
}

namespace {

enum class Status { Standing, Elected, Eliminated };

// A ballot group sitting in some candidate's pile at a given value.
struct Parcel {
  std::size_t group = 0;
  std::size_t position = 0;  // index in the ranking of the current holder
  Rational value;
};

class Count {
 public:
  Count(const Election& e, const TabulationOptions& opts)
      : election_(e),
        opts_(opts),
        status_(e.candidate_count(), Status::Standing),
        tally_(e.candidate_count()),
        piles_(e.candidate_count()),
        quota_(make_rational(e.quota)) {}

  TabulationTrace run() {
    trace_.quota = election_.quota;
    trace_.total_valid = election_.total_valid;
    trace_.first_pref_tallies = first_preference_tallies(election_);

    CandidateSet batch;
    if (opts_.batch_first) {
      batch = batch_eliminate(election_, opts_.batch_threshold);
      if (!batch.empty()) {
        std::vector<Rational> fp;
        for (auto t : trace_.first_pref_tallies) fp.push_back(make_rational(t));
        Rational empty_ballots;
        for (const auto& g : election_.ballots) {
          if (g.ranking.empty()) empty_ballots += g.count;
        }
        RoundAction a{ActionKind::BatchEliminate, batch.members(), std::nullopt, false};
        trace_.rounds.push_back({1, std::move(fp), std::move(a), empty_ballots});
        for (auto c : batch.members()) status_[c.index] = Status::Eliminated;
      }
    }

    // Initial distribution. Batch-eliminated candidates are skipped, so their
    // ballots land with the next surviving preference at full value.
    for (std::size_t g = 0; g < election_.ballots.size(); ++g) {
      place(Parcel{g, 0, Rational(1)}, /*from_start=*/true, [&](CandidateId c) {
        return status_[c.index] == Status::Standing;
      });
    }
#ifndef NDEBUG
    for (auto c : batch.members()) assert(piles_[c.index].empty());
#endif

    const auto seats = static_cast<std::size_t>(election_.seats);
    while (trace_.winners.size() < seats) {
      const auto standing = standing_candidates();
      const auto remaining = seats - trace_.winners.size();
      if (standing.size() <= remaining) {
        elect_remaining(standing);
        break;
      }
      std::vector<CandidateId> over;
      for (auto c : standing) {
        if (tally_[c.index] >= quota_) over.push_back(c);
      }
      if (!over.empty()) {
        elect(over);
      } else {
        eliminate(standing);
      }
    }
    return std::move(trace_);
  }

 private:
  std::vector<CandidateId> standing_candidates() const {
    std::vector<CandidateId> out;
    for (std::size_t i = 0; i < status_.size(); ++i) {
      if (status_[i] == Status::Standing) out.push_back(CandidateId{static_cast<std::uint32_t>(i)});
    }
    return out;
  }

  void record(RoundAction action) {
    RoundRecord r;
    r.index = static_cast<int>(trace_.rounds.size()) + 1;
    r.tallies = tally_;
    r.action = std::move(action);
    r.exhausted = exhausted_;
    trace_.rounds.push_back(std::move(r));
  }

  // Moves a parcel to the next candidate accepted by `eligible`, searching
  // after its current position (or from the top of the ranking).
  template <typename Eligible>
  void place(Parcel p, bool from_start, Eligible&& eligible) {
    const auto& group = election_.ballots[p.group];
    std::size_t i = from_start ? 0 : p.position + 1;
    for (; i < group.ranking.size(); ++i) {
      if (eligible(group.ranking[i])) break;
    }
    const Rational amount = p.value * group.count;
    if (i >= group.ranking.size()) {
      exhausted_ += amount;
      return;
    }
    const auto to = group.ranking[i];
    p.position = i;
    tally_[to.index] += amount;
    piles_[to.index].push_back(std::move(p));
  }

  // Eligibility is frozen when a distribution starts: a candidate that
  // crosses the quota part-way through still receives the rest of it.
  void distribute(CandidateId from, const Rational& factor) {
    std::vector<bool> eligible(status_.size(), false);
    for (std::size_t i = 0; i < status_.size(); ++i) {
      eligible[i] = status_[i] == Status::Standing && tally_[i] < quota_;
    }
    eligible[from.index] = false;

    auto pile = std::move(piles_[from.index]);
    piles_[from.index].clear();
    for (auto& p : pile) {
      p.value *= factor;
      place(std::move(p), false, [&](CandidateId c) { return static_cast<bool>(eligible[c.index]); });
    }
  }

  void elect(const std::vector<CandidateId>& over) {
    // Largest surplus first; ties to the lower id.
    CandidateId pick = over.front();
    bool tie = false;
    for (auto c : over) {
      if (tally_[c.index] > tally_[pick.index]) {
        pick = c;
        tie = false;
      } else if (c != pick && tally_[c.index] == tally_[pick.index]) {
        tie = true;
      }
    }
    if (tie && opts_.strict_ties) {
      throw TieError("equal surpluses for '" + election_.name_of(pick) + "' and another candidate");
    }
    const Rational tv = transfer_value(tally_[pick.index], election_.quota);
    record(RoundAction{ActionKind::Elect, {pick}, tv, tie});
    status_[pick.index] = Status::Elected;
    trace_.winners.push_back(pick);
    distribute(pick, tv);
    tally_[pick.index] = quota_;
  }

  void eliminate(const std::vector<CandidateId>& standing) {
    CandidateId pick = standing.front();
    bool tie = false;
    for (auto c : standing) {
      if (tally_[c.index] < tally_[pick.index]) {
        pick = c;
        tie = false;
      } else if (c != pick && tally_[c.index] == tally_[pick.index]) {
        tie = true;
      }
    }
    if (tie && opts_.strict_ties) {
      throw TieError("equal lowest tallies for '" + election_.name_of(pick) + "' and another candidate");
    }
    record(RoundAction{ActionKind::Eliminate, {pick}, std::nullopt, tie});
    status_[pick.index] = Status::Eliminated;
    distribute(pick, Rational(1));
    tally_[pick.index] = 0;
  }

  void elect_remaining(std::vector<CandidateId> standing) {
    std::stable_sort(standing.begin(), standing.end(), [&](CandidateId a, CandidateId b) {
      return tally_[a.index] > tally_[b.index];
    });
    record(RoundAction{ActionKind::ElectRemaining, standing, std::nullopt, false});
    for (auto c : standing) {
      status_[c.index] = Status::Elected;
      trace_.winners.push_back(c);
    }
  }

  const Election& election_;
  const TabulationOptions& opts_;
  std::vector<Status> status_;
  std::vector<Rational> tally_;
  std::vector<std::vector<Parcel>> piles_;
  Rational exhausted_;
  Rational quota_;
  TabulationTrace trace_;
};

}  // namespace

TabulationTrace tabulate(const Election& election, const TabulationOptions& options) {
  if (election.candidate_count() < static_cast<std::size_t>(election.seats)) {
    throw InvalidParameter("fewer candidates than seats");
  }
  return Count(election, options).run();
}

}  // namespace stvrla
