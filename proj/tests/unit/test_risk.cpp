#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "stvrla/errors.hpp"
#include "stvrla/risk.hpp"
#include "support.hpp"

using namespace stvrla;
using support::id;

namespace {

// AG(a, b) where `wins` ballots rank a only and `loses` rank b only.
Election two_way(std::int64_t wins, std::int64_t loses, std::int64_t blank = 0) {
  std::vector<BallotGroup> g;
  if (wins) g.push_back({{id(0)}, wins});
  if (loses) g.push_back({{id(1)}, loses});
  if (blank) g.push_back({{}, blank});
  return make_election("two", {"a", "b"}, g, 1);
}

}  // namespace

TEST_SUITE("risk_asn") {
  TEST_CASE("fixed-eta product with replacement") {
    AuditParams p;
    p.shrink_d = std::numeric_limits<double>::infinity();
    AlphaTest t(1.0, 0.75, std::nullopt, p);
    double last = 1;
    for (int i = 0; i < 5; ++i) last = t.push(1.0);
    CHECK(1.0 / last == doctest::Approx(7.59375).epsilon(1e-12));
    CHECK(last == doctest::Approx(0.1317).epsilon(1e-3));

    const auto T = oracle::alpha_statistics({1, 1, 1, 1, 1}, 1.0, 0.75, std::numeric_limits<double>::infinity(),
                                            0.001, 0);
    CHECK(T.back() == doctest::Approx(7.59375).epsilon(1e-12));
  }

  TEST_CASE("maximal evidence reaches a decision") {
    AuditParams p;
    std::vector<double> xs(200, 1.0);
    const auto r = alpha_test(xs, 1.0, 0.9, 10000, p);
    REQUIRE(r.decision_index.has_value());
    for (std::size_t i = 1; i < r.p_values.size(); ++i) {
      if (r.p_values[i - 1] > 0) CHECK(r.p_values[i] <= r.p_values[i - 1]);
    }
    CHECK(r.p_values[1] < r.p_values[0]);
  }

  TEST_CASE("null data never decides") {
    AuditParams p;
    std::vector<double> xs(2000, 0.5);
    const auto r = alpha_test(xs, 1.0, 0.6, std::nullopt, p);
    CHECK_FALSE(r.decision_index.has_value());
    for (double v : r.p_values) CHECK(v >= 1.0 - 1e-12);
  }

  TEST_CASE("draws outside the bound are rejected") {
    AuditParams p;
    AlphaTest t(1.0, 0.6, 10, p);
    CHECK_THROWS_AS(t.push(1.5), InvalidParameter);
    CHECK_THROWS_AS(t.push(-0.1), InvalidParameter);
    CHECK_THROWS_AS(AlphaTest(0.0, 0.5, 10, p), InvalidParameter);
  }

  TEST_CASE("matches the oracle statistic") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
      const double u = 0.5 + 2 * u01(rng);
      const double eta0 = 0.5 + (u - 0.5) * u01(rng) * 0.9 + 0.01;
      std::vector<double> xs;
      for (int i = 0; i < 60; ++i) xs.push_back(u * (u01(rng) < 0.7 ? u01(rng) * 0.3 + 0.6 : u01(rng)));
      AuditParams p;
      const std::int64_t n = 1000;
      AlphaTest t(u, eta0, n, p);
      const auto T = oracle::alpha_statistics(xs, u, eta0, p.shrink_d, p.eps_floor * u, n);
      for (std::size_t i = 0; i < xs.size(); ++i) {
        const double pv = t.push(xs[i]);
        CHECK(pv == doctest::Approx(std::min(1.0, 1.0 / T[i])).epsilon(1e-9));
      }
    }
  }

  TEST_CASE("margin one needs only a handful of ballots") {
    const auto e = two_way(5000, 0);
    const auto spec = to_assorter(make_ag(id(0), id(1)), e);
    CHECK(spec.margin == 1);
    AuditParams p;
    p.error_rate = 0.0;
    const auto asn = estimate_asn(spec, p);
    REQUIRE(asn.has_value());
    CHECK(*asn < 25);
    p.mode = AuditMode::Polling;
    REQUIRE(estimate_asn(spec, p).has_value());
    CHECK(*estimate_asn(spec, p) < 25);
  }

  TEST_CASE("no margin, no estimate") {
    const auto spec = to_assorter(make_ag(id(0), id(1)), two_way(500, 500));
    CHECK(spec.margin == 0);
    CHECK_FALSE(estimate_asn(spec, AuditParams{}).has_value());
    CHECK_FALSE(estimate_asn(to_assorter(make_ag(id(0), id(1)), two_way(400, 600)), AuditParams{}).has_value());
  }

  TEST_CASE("ASN ordering") {
    AuditParams base;
    std::optional<std::int64_t> prev;
    for (std::int64_t w : {5200, 5500, 6000, 7000, 8500}) {
      const auto spec = to_assorter(make_ag(id(0), id(1)), two_way(w, 10000 - w));
      const auto asn = estimate_asn(spec, base);
      REQUIRE(asn.has_value());
      if (prev) CHECK(*asn <= *prev);
      prev = asn;

      auto noisy = base;
      noisy.error_rate = 0.01;
      const auto worse = estimate_asn(spec, noisy);
      CHECK((!worse || *worse >= *asn));
      auto looser = base;
      looser.risk_limit = 0.2;
      CHECK(*estimate_asn(spec, looser) <= *asn);
    }
  }

  TEST_CASE("measure_risk") {
    const auto spec = to_assorter(make_ag(id(0), id(1)), two_way(6000, 4000));
    AuditParams p;
    CHECK(measure_risk(std::span<const std::pair<double, double>>{}, spec, p) == 1.0);

    const auto asn = *estimate_asn(spec, [] {
      AuditParams q;
      q.error_rate = 0;
      return q;
    }());
    std::vector<std::pair<double, double>> clean(static_cast<std::size_t>(asn), {1.0, 1.0});
    CHECK(measure_risk(clean, spec, p) <= p.risk_limit);

    std::vector<std::pair<double, double>> bad(300, {1.0, 0.0});
    CHECK(measure_risk(bad, spec, p) == 1.0);

    const std::vector<double> r{1.0, 1.0};
    const std::vector<double> a{1.0};
    CHECK_THROWS_AS(measure_risk(r, a, spec, p), InvalidParameter);
  }

  TEST_CASE("parameter validation") {
    AuditParams p;
    p.risk_limit = 0;
    CHECK_THROWS_AS(validate(p), InvalidParameter);
    p = {};
    p.error_rate = 1;
    CHECK_THROWS_AS(validate(p), InvalidParameter);
    p = {};
    p.shrink_d = 0;
    CHECK_THROWS_AS(validate(p), InvalidParameter);
  }

  TEST_CASE("comparison scale") {
    ComparisonScale s{1.0, 0.2};
    CHECK(s.error_free() == doctest::Approx(1.0 / 1.8));
    CHECK(s.upper() == doctest::Approx(2.0 / 1.8));
    CHECK(s.one_vote() == doctest::Approx(0.5 / 1.8));
    CHECK(s.value(1.0) == doctest::Approx(0.0));
  }
}
