#include <doctest.h>

#include <random>
#include <set>

#include "stvrla/general_planner.hpp"
#include "support.hpp"

using namespace stvrla;
using support::id;

namespace {

bool in_pair(const CandidatePair& p, CandidateId c) { return p.first == c || p.second == c; }

}  // namespace

TEST_SUITE("general_planner") {
  TEST_CASE("stage 1 matches brute force over ordered pairs") {
    const auto e = support::load("small.json");
    const auto ags = stage1_all_ags(e, {});
    const auto oe = support::to_oracle(e);
    std::set<std::pair<int, int>> want;
    for (int w = 0; w < 5; ++w) {
      for (int l = 0; l < 5; ++l) {
        if (w != l && oracle::check_ag(oe, w, l, {}, {}, {}).holds) want.emplace(w, l);
      }
    }
    std::set<std::pair<int, int>> got;
    for (const auto& [key, c] : ags) got.emplace(key.first.index, key.second.index);
    CHECK(got == want);
    CHECK(got.contains({0, 4}));
    CHECK(got.contains({2, 4}));
    CHECK(got.contains({0, 1}));
  }

  TEST_CASE("stage 1 on one candidate") {
    const auto e = make_election("one", {"a"}, {{{id(0)}, 3}}, 1);
    CHECK(stage1_all_ags(e, {}).empty());
  }

  TEST_CASE("stage 2") {
    const auto e = support::load("small.json");
    const auto s2 = stage2_definite_losers(stage1_all_ags(e, {}), e);
    CHECK(s2.definite_losers.contains(id(4)));
    for (const auto& [loser, list] : s2.assertions) {
      CHECK(list.size() == 2);
      CHECK(s2.cost.at(loser) == std::max(list[0].asn, list[1].asn));
    }
    CHECK(stage2_definite_losers({}, e).definite_losers.empty());
  }

  TEST_CASE("dominant pair gives a full audit") {
    const auto e = make_election("dom", {"a", "b", "c", "d"},
                                 {{{id(0)}, 40000}, {{id(1)}, 35000}, {{id(2), id(3)}, 15000}, {{id(3)}, 10000}}, 2);
    const auto t = tabulate(e);
    const auto report = plan_general(e, t);
    CHECK(report.kind == PlanKind::FullRLA);
    CHECK(report.remaining_pairs.empty());
    CHECK(report.pairs_considered == 0);
    CHECK(report.definite_winners == CandidateSet{id(0), id(1)});
    CHECK(report.potential_winners == CandidateSet{id(0), id(1)});
    CHECK(report.definite_losers == CandidateSet{id(2), id(3)});
  }

  TEST_CASE("small example gives a full audit") {
    const auto e = support::load("small.json");
    const auto report = plan_general(e, tabulate(e));
    CHECK(report.kind == PlanKind::FullRLA);
    CHECK(report.definite_winners == CandidateSet{id(0), id(2)});
    for (const auto& a : report.assertions) CHECK(a.check.holds);
  }

  TEST_CASE("partial audit when no first-round winner") {
    const auto e = support::load("no_frw.json");
    const auto t = tabulate(e);
    const auto report = plan_general(e, t);
    CHECK(report.kind == PlanKind::PartialRLA);
    for (auto w : t.winners) CHECK(report.potential_winners.contains(w));
    for (auto d : report.definite_winners.members()) {
      CHECK(std::find(t.winners.begin(), t.winners.end(), d) != t.winners.end());
    }
  }

  TEST_CASE("stage 5 set rules") {
    GeneralState s;
    s.active = CandidateSet::all(5);
    s.winners = {id(0), id(3)};
    s.stage3.remaining = {make_pair_sorted(id(0), id(1)), make_pair_sorted(id(0), id(2))};
    const auto e = make_election("five", {"a", "b", "c", "d", "e"}, {{{id(0)}, 1}}, 2);
    const auto r = stage5_summarize(s, e);
    CHECK(r.kind == PlanKind::PartialRLA);
    CHECK(r.definite_winners == CandidateSet{id(0)});
    CHECK(r.definite_losers == CandidateSet{id(4)});
    CHECK(r.potential_winners == CandidateSet{id(0), id(1), id(2), id(3)});

    GeneralState full;
    full.active = CandidateSet::all(5);
    full.winners = {id(0), id(3)};
    const auto f = stage5_summarize(full, e);
    CHECK(f.kind == PlanKind::FullRLA);
    CHECK(f.definite_winners == CandidateSet{id(0), id(3)});
    CHECK(f.potential_winners == CandidateSet{id(0), id(3)});
  }

  TEST_CASE("stage 4 leaves a cheap stage 2 alone") {
    const auto e = support::load("small.json");
    const auto ags = stage1_all_ags(e, {});
    GeneralState s;
    s.active = CandidateSet::all(5);
    s.winners = {id(0), id(2)};
    s.stage2 = stage2_definite_losers(ags, e);
    s.stage3 = stage3_rule_out_pairs(e, s.stage2.definite_losers, ags, s.winners, {});
    if (s.stage2_asn() <= s.stage3_asn()) {
      const auto after = stage4_reduce(e, s, ags, {});
      CHECK(after.reduced.empty());
      CHECK(after.stage2.definite_losers == s.stage2.definite_losers);
    }
  }

  TEST_CASE("stage 4 moves definite losers to pair rulings") {
    const auto e = support::load("reduction6.json");
    const auto r = plan_general(e, tabulate(e));
    REQUIRE_FALSE(r.reduced.empty());
    CHECK(r.overall_asn < std::max(r.stage2_asn_initial, r.stage3_asn_initial));
    CHECK(r.reduced.size() <= r.stage2_losers);
    CHECK(r.kind == PlanKind::FullRLA);
    for (auto d : r.reduced) CHECK(r.definite_losers.contains(d));
    for (const auto& a : r.assertions) CHECK(a.check.holds);
    CHECK(r.overall_asn == max_asn(r.assertions));
  }

  TEST_CASE("only the reported pair survives stage 2") {
    const auto e = make_election("dom", {"a", "b", "c"}, {{{id(0)}, 500}, {{id(1)}, 400}, {{id(2)}, 100}}, 2);
    const auto ags = stage1_all_ags(e, {});
    const auto s2 = stage2_definite_losers(ags, e);
    REQUIRE(s2.definite_losers == CandidateSet{id(2)});
    const auto s3 = stage3_rule_out_pairs(e, s2.definite_losers, ags, {id(0), id(1)}, {});
    CHECK(s3.ruled_out.empty());
    CHECK(s3.remaining.empty());
  }

  TEST_CASE("report invariants on random contests") {
    std::mt19937_64 rng(41);
    int reductions = 0;
    for (int trial = 0; trial < 150; ++trial) {
      const auto e = support::random_election(rng, {.max_candidates = 5, .max_types = 8, .max_count = 2000});
      const auto t = tabulate(e);
      const auto r = plan_general(e, t);
      const auto all = CandidateSet::all(e.candidate_count());
      for (auto c : all.members()) {
        CHECK(r.definite_losers.contains(c) != r.potential_winners.contains(c));
        if (r.definite_winners.contains(c)) {
          for (const auto& p : r.remaining_pairs) CHECK(in_pair(p, c));
        }
      }
      for (auto w : t.winners) CHECK(r.potential_winners.contains(w));
      for (const auto& a : r.assertions) CHECK(evaluate(e, a.assertion).holds);
      CHECK(r.overall_asn <= std::max(r.stage2_asn_initial, r.stage3_asn_initial));
      CHECK(r.kind == (r.remaining_pairs.empty() ? PlanKind::FullRLA : PlanKind::PartialRLA));
      reductions += !r.reduced.empty();
    }
    MESSAGE("stage-4 reductions seen: " << reductions);
  }
}
