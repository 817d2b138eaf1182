#include <doctest.h>

#include <random>

#include "stvrla/assertions.hpp"
#include "stvrla/errors.hpp"
#include "support.hpp"

using namespace stvrla;
using support::id;

namespace {

const Rational fifth{1, 5};
const Rational quarter{1, 4};

Election small() { return support::load("small.json"); }

}  // namespace

TEST_SUITE("assertion_engine") {
  TEST_CASE("IQ") {
    const auto e = small();
    const auto c1 = eval_iq(e, id(0));
    CHECK(c1.holds);
    CHECK(c1.lhs == 9001);
    const auto c3 = eval_iq(e, id(2));
    CHECK_FALSE(c3.holds);
    CHECK(c3.lhs == 5000);
    CHECK(c3.rhs == 7000);
  }

  TEST_CASE("UT and LT*") {
    const auto e = small();
    CHECK(eval_ut(e, id(0), quarter).holds);
    CHECK(eval_ut(e, id(0), quarter).lhs == Rational(28004, 3));
    CHECK_FALSE(eval_ut(e, id(0), fifth).holds);
    CHECK(eval_ut(e, id(0), fifth).lhs == Rational(35005, 4));
    CHECK(eval_ut(e, id(0), Rational(999, 1000)).holds);
    CHECK(eval_lt(e, id(0), fifth).holds);
    CHECK_FALSE(eval_lt(e, id(0), quarter).holds);
    CHECK(eval_lt(e, id(0), 0).holds);
  }

  TEST_CASE("AG* contributions") {
    const std::vector<CandidateId> W{id(0)};
    const std::vector<Rational> lo{fifth};
    const std::vector<Rational> up{quarter};
    CHECK(agstar_contrib_min(Ranking{id(0), id(2)}, id(2), W, lo) == fifth);
    CHECK(agstar_contrib_min(Ranking{id(2), id(3)}, id(2), std::vector<CandidateId>{id(1)}, lo) == 1);
    CHECK(agstar_contrib_max(Ranking{id(0), id(3)}, id(3), id(2), W, up) == quarter);
    CHECK(agstar_contrib_max(Ranking{id(1), id(2), id(3)}, id(3), id(2), W, up) == 0);
    CHECK(agstar_contrib_max(Ranking{}, id(3), id(2), W, up) == 0);
    CHECK(agstar_contrib_min(Ranking{}, id(2), W, lo) == 0);
  }

  TEST_CASE("AG* on the small example") {
    const auto e = small();
    const auto holds = eval_agstar(e, AGStar{id(2), id(3), {id(0)}, {fifth}, {quarter}});
    CHECK(holds.holds);
    CHECK(holds.lhs == Rational(33001, 5));
    CHECK(holds.rhs == 3950);
    const auto fails = eval_agstar(e, AGStar{id(2), id(1), {id(0)}, {fifth}, {quarter}});
    CHECK_FALSE(fails.holds);
    CHECK(fails.rhs == 7000);
    const auto plain = eval_agstar(e, make_ag(id(0), id(4)));
    CHECK(plain.holds);
    CHECK(plain.lhs == 9001);
    CHECK(plain.rhs == 50);
  }

  TEST_CASE("NL* on the small example") {
    const auto e = small();
    NLStar base{id(2), id(3), {id(0)}, {fifth}, {quarter}, {}, {}, false};
    const auto a = eval_nlstar(e, base);
    CHECK(a.holds);
    CHECK(a.lhs == Rational(33001, 5));
    CHECK(a.rhs == 3950);
    base.o_star = {id(1)};
    const auto b = eval_nlstar(e, base);
    CHECK(b.lhs == Rational(48001, 5));
    CHECK(b.holds);
    const auto c = eval_nlstar(e, NLStar{id(2), id(3), {}, {}, {}, {}, {}, false});
    CHECK(c.holds);
    CHECK(c.lhs == 5000);
    CHECK(c.rhs == 3950);
  }

  TEST_CASE("NL-compat encoding") {
    const auto nl = make_nl_compat(id(2), id(3), {id(0)}, {}, {});
    CHECK(nl.compat);
    CHECK(nl.lower == std::vector<Rational>{0});
    CHECK(nl.upper == std::vector<Rational>{Rational(2, 3)});
    CHECK(type_name(nl) == "NL");
    CHECK(type_name(make_ag(id(0), id(1))) == "AG");
  }

  TEST_CASE("structural validation") {
    CHECK_THROWS_AS(validate(make_ag(id(1), id(1))), InvalidParameter);
    CHECK_THROWS_AS(validate(AGStar{id(0), id(1), {id(0)}, {0}, {fifth}}), InvalidParameter);
    CHECK_THROWS_AS(validate(AGStar{id(0), id(1), {id(2)}, {quarter}, {fifth}}), InvalidParameter);
    CHECK_THROWS_AS(validate(AGStar{id(0), id(1), {id(2)}, {0}, {Rational(3, 4)}}), InvalidParameter);
    CHECK_THROWS_AS(validate(UT{id(0), 0}), InvalidParameter);
    CHECK_THROWS_AS(validate(NLStar{id(0), id(1), {}, {}, {}, {id(1)}, {}, false}), InvalidParameter);
    CHECK_NOTHROW(validate(NLStar{id(0), id(1), {id(2)}, {0}, {fifth}, {id(3)}, {id(4)}, false}));
  }

  TEST_CASE("assorter margins") {
    const auto e = small();
    const auto ag = to_assorter(make_ag(id(0), id(4)), e);
    CHECK(ag.mean == make_rational(9001 - 50 + 21001, 2 * 21001));
    CHECK(ag.margin == make_rational(9001 - 50, 21001));
    CHECK(ag.mean > Rational(1, 2));

    const auto iq = to_assorter(IQ{id(0)}, e);
    CHECK(iq.margin > 0);
    CHECK(to_assorter(UT{id(0), fifth}, e).mean < Rational(1, 2));
  }

  TEST_CASE("IQ flips when 2001 first preferences exhaust") {
    auto e = small();
    auto groups = e.ballots;
    groups[0].count -= 2001;
    groups.push_back({{}, 2001});
    const auto flipped = make_election("f", e.candidates, groups, 2);
    CHECK(flipped.quota == e.quota);
    CHECK_FALSE(eval_iq(flipped, id(0)).holds);
    CHECK(to_assorter(IQ{id(0)}, flipped).margin <= 0);
    groups.back().count = 2000;
    groups[0].count += 1;
    CHECK(eval_iq(make_election("g", e.candidates, groups, 2), id(0)).holds);
  }

  TEST_CASE("random assertions agree with the oracle and the assorter") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 1500; ++trial) {
      const auto e = support::random_election(rng);
      const auto oe = support::to_oracle(e);
      for (int k = 0; k < 4; ++k) {
        const auto a = support::random_assertion(rng, static_cast<std::uint32_t>(e.candidate_count()));
        const auto got = evaluate(e, a);
        const auto want = support::oracle_check(oe, a);
        CHECK(support::to_q(got.lhs) == want.lhs);
        CHECK(support::to_q(got.rhs) == want.rhs);
        CHECK(got.holds == want.holds);

        const auto spec = to_assorter(a, e);
        CHECK((spec.mean > Rational(1, 2)) == got.holds);
        CHECK(spec.margin == 2 * spec.mean - 1);
        for (const auto& [v, n] : spec.distribution) {
          CHECK(v >= 0);
          CHECK(v <= spec.upper);
        }
      }
    }
  }

  TEST_CASE("monotone in bounds and helper sets") {
    std::mt19937_64 rng(22);
    for (int trial = 0; trial < 500; ++trial) {
      const auto e = support::random_election(rng);
      if (e.candidate_count() < 4) continue;
      const auto base = NLStar{id(0), id(1), {id(2)}, {Rational(1, 10)}, {Rational(1, 2)}, {}, {}, false};
      const auto ref = eval_nlstar(e, base);

      auto higher_lower = base;
      higher_lower.lower[0] = Rational(3, 10);
      CHECK(eval_nlstar(e, higher_lower).lhs >= ref.lhs);
      auto lower_upper = base;
      lower_upper.upper[0] = Rational(2, 5);
      CHECK(eval_nlstar(e, lower_upper).rhs <= ref.rhs);
      auto more_g = base;
      more_g.g_star = {id(3)};
      CHECK(eval_nlstar(e, more_g).rhs <= ref.rhs);
      auto more_o = base;
      more_o.o_star = {id(3)};
      CHECK(eval_nlstar(e, more_o).lhs >= ref.lhs);

      const AGStar ag{id(0), id(1), {id(2)}, {Rational(1, 10)}, {Rational(1, 2)}};
      auto ag2 = ag;
      ag2.lower[0] = Rational(3, 10);
      ag2.upper[0] = Rational(2, 5);
      CHECK(eval_agstar(e, ag2).lhs >= eval_agstar(e, ag).lhs);
      CHECK(eval_agstar(e, ag2).rhs <= eval_agstar(e, ag).rhs);
    }
  }

  TEST_CASE("empty W reduces to plain AG") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 300; ++trial) {
      const auto e = support::random_election(rng);
      const auto r = eval_agstar(e, make_ag(id(0), id(1)));
      std::int64_t first = 0;
      std::int64_t most = 0;
      for (const auto& g : e.ballots) {
        if (!g.ranking.empty() && g.ranking[0] == id(0)) first += g.count;
        const auto pl = std::find(g.ranking.begin(), g.ranking.end(), id(1));
        const auto pw = std::find(g.ranking.begin(), g.ranking.end(), id(0));
        if (pl != g.ranking.end() && !(pw < pl)) most += g.count;
      }
      CHECK(r.lhs == first);
      CHECK(r.rhs == most);
    }
  }

  TEST_CASE("describe") {
    const auto e = small();
    CHECK(describe(make_ag(id(0), id(4)), e) == "AG(c1, c5)");
    CHECK(describe(IQ{id(0)}, e) == "IQ(c1)");
  }
}
