#include "stvrla/frw_planner.hpp"

#include <algorithm>
#include <set>

#include "stvrla/errors.hpp"

namespace stvrla {

void validate(const FrwConfig& config) {
  if (sgn(config.delta) <= 0 || config.delta >= Rational(2, 3)) {
    throw InvalidParameter("delta must be in (0, 2/3)");
  }
  validate(config.params);
}

bool frw_criterion(const TabulationTrace& trace) {
  const auto* first = trace.first_regular_action();
  return first != nullptr && first->kind == ActionKind::Elect;
}

namespace {

struct Candidate {
  std::vector<CostedAssertion> assertions;
  std::int64_t asn = kInfeasibleAsn;
};

class FrwSearch {
 public:
  FrwSearch(const Election& election, CandidateId w1, CandidateId w2, std::vector<CandidateId> losers,
            const AuditParams& params)
      : election_(election), w1_(w1), w2_(w2), losers_(std::move(losers)), params_(params) {}

  // One bound pair, plus the redundancy post-pass.
  Candidate evaluate(const std::vector<CostedAssertion>& fixed, const Rational& lower, const Rational& upper) const {
    Candidate out;
    out.assertions = fixed;
    out.assertions.push_back(cost_assertion(election_, UT{w1_, upper}, params_));

    const std::vector<CandidateId> seated{w1_};
    const std::vector<Rational> lo{lower};
    const std::vector<Rational> up{upper};

    std::vector<CostedAssertion> ags;
    auto contenders = losers_;
    contenders.push_back(w2_);
    for (auto c : contenders) {
      for (auto l : losers_) {
        if (c == l) continue;
        auto costed = cost_assertion(election_, AGStar{c, l, seated, lo, up}, params_);
        if (costed.check.holds) ags.push_back(std::move(costed));
      }
    }
    std::vector<CostedAssertion> o_helpers;
    for (const auto& a : ags) {
      if (std::get<AGStar>(a.assertion).winner == w2_) o_helpers.push_back(a);
    }

    std::set<std::pair<CandidateId, CandidateId>> kept_ags;
    std::vector<CostedAssertion> nls;
    bool complete = true;
    for (auto l : losers_) {
      std::vector<CostedAssertion> g_helpers;
      for (const auto& a : ags) {
        const auto& ag = std::get<AGStar>(a.assertion);
        if (ag.loser == l && ag.winner != w2_) g_helpers.push_back(a);
      }
      NLStar base{w2_, l, seated, lo, up, {}, {}, false};
      auto formed = form_nl(election_, base, g_helpers, o_helpers, params_);
      if (!formed) {
        complete = false;
        continue;
      }
      nls.push_back(std::move(formed->nl));
      for (auto& h : formed->helpers) {
        const auto& ag = std::get<AGStar>(h.assertion);
        if (kept_ags.emplace(ag.winner, ag.loser).second) out.assertions.push_back(std::move(h));
      }
    }
    for (auto& nl : nls) {
      const auto& x = std::get<NLStar>(nl.assertion);
      if (!kept_ags.contains({x.winner, x.loser})) out.assertions.push_back(std::move(nl));
    }
    out.asn = complete ? max_asn(out.assertions) : kInfeasibleAsn;
    return out;
  }

 private:
  const Election& election_;
  CandidateId w1_;
  CandidateId w2_;
  std::vector<CandidateId> losers_;
  AuditParams params_;
};

// Largest admissible upper bound when tau + delta already reaches 2/3.
Rational clamped_upper(const Rational& tau) {
  const Rational two_thirds(2, 3);
  Rational r = two_thirds - Rational(1, 1000000);
  if (r <= tau) {
    r = (tau + two_thirds) / 2;
    r.canonicalize();
  }
  return r;
}

}  // namespace

AuditPlan plan_frw(const Election& election, const TabulationTrace& trace, const FrwConfig& config) {
  validate(config);
  if (election.seats != 2) throw InvalidParameter("the first-round-winner planner handles two-seat contests only");
  if (!frw_criterion(trace)) {
    throw FirstRoundWinnerCriterion("no candidate has a quota on first preferences");
  }
  if (trace.winners.size() != 2) throw InvalidParameter("trace must report two winners");

  AuditPlan plan;
  plan.w1 = trace.first_regular_action()->subjects.front();
  plan.w2 = trace.winners[0] == plan.w1 ? trace.winners[1] : trace.winners[0];
  plan.reported_tv = trace.transfer_value_of(plan.w1).value_or(Rational(0));

  const auto batch = trace.batch_eliminated();
  const Election downstream = batch.empty() ? election : without_candidates(election, CandidateSet(batch));
  std::vector<CandidateId> losers;
  for (std::uint32_t i = 0; i < election.candidate_count(); ++i) {
    const CandidateId c{i};
    if (c != plan.w1 && c != plan.w2 && std::find(batch.begin(), batch.end(), c) == batch.end()) {
      losers.push_back(c);
    }
  }

  const auto& params = config.params;
  const Rational& tau = plan.reported_tv;
  const Rational two_thirds(2, 3);
  const FrwSearch search(downstream, plan.w1, plan.w2, losers, params);
  const CostedAssertion iq = cost_assertion(downstream, IQ{plan.w1}, params);

  std::int64_t best = kInfeasibleAsn;
  Rational lower(0);
  bool first = true;
  while (first || lower < tau) {
    first = false;
    std::vector<CostedAssertion> fixed{iq};
    if (sgn(lower) > 0) fixed.push_back(cost_assertion(downstream, LTStar{plan.w1, lower}, params));

    Rational upper = tau + config.delta;
    bool clamped = false;
    if (upper >= two_thirds) {
      upper = clamped_upper(tau);
      clamped = true;
    }
    std::int64_t inner_best = best;
    Candidate inner_plan;
    Rational inner_upper;
    while (true) {
      auto candidate = search.evaluate(fixed, lower, upper);
      const bool improved = candidate.asn < inner_best;
      plan.search.push_back({lower, upper, candidate.asn, improved});
      if (!improved) break;
      inner_best = candidate.asn;
      inner_plan = std::move(candidate);
      inner_upper = upper;
      upper += config.delta;
      if (clamped || upper >= two_thirds) break;
    }

    const Rational next_lower = sgn(lower) > 0 ? Rational(lower + config.delta) : Rational(tau / 2);
    if (inner_best < best) {
      best = inner_best;
      plan.assertions = std::move(inner_plan.assertions);
      plan.lower = lower;
      plan.upper = inner_upper;
      plan.accepted_asns.push_back(best);
    } else if (feasible(best)) {
      break;
    }
    // With nothing feasible yet, a tighter lower bound may still help.
    lower = next_lower;
    lower.canonicalize();
  }

  plan.overall_asn = best;
  plan.kind = feasible(best) ? PlanKind::FullRLA : PlanKind::Infeasible;
  return plan;
}

}  // namespace stvrla
