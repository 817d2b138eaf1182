#include "stvrla/assertions.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "stvrla/errors.hpp"

namespace stvrla {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool in(std::span<const CandidateId> list, CandidateId c) {
  return std::find(list.begin(), list.end(), c) != list.end();
}

std::ptrdiff_t position(std::span<const CandidateId> ballot, CandidateId c) {
  const auto it = std::find(ballot.begin(), ballot.end(), c);
  return it == ballot.end() ? -1 : it - ballot.begin();
}

// Product of lower bounds for the seated candidates ahead of w, provided w is
// the first unseated candidate on the ballot; zero otherwise.
Rational reduced_value(std::span<const CandidateId> ballot, CandidateId w,
                       std::span<const CandidateId> elected, std::span<const Rational> lower) {
  Rational product(1);
  for (auto c : ballot) {
    const auto k = position(elected, c);
    if (k >= 0) {
      product *= lower[static_cast<std::size_t>(k)];
      continue;
    }
    return c == w ? product : Rational(0);
  }
  return Rational(0);
}

// max{upper_c : c seated and ranked ahead of position `before`}.
Rational max_upper_before(std::span<const CandidateId> ballot, std::ptrdiff_t before,
                          std::span<const CandidateId> elected, std::span<const Rational> upper) {
  Rational best(0);
  for (std::ptrdiff_t i = 0; i < before; ++i) {
    const auto k = position(elected, ballot[static_cast<std::size_t>(i)]);
    if (k >= 0 && upper[static_cast<std::size_t>(k)] > best) best = upper[static_cast<std::size_t>(k)];
  }
  return best;
}

Rational first_pref_tally(const Election& e, CandidateId c) {
  Rational t;
  for (const auto& g : e.ballots) {
    if (!g.ranking.empty() && g.ranking.front() == c) t += g.count;
  }
  return t;
}

// Q / (1 - tau)
Rational tally_for_transfer(std::int64_t quota, const Rational& tau) {
  Rational r = make_rational(quota) / (Rational(1) - tau);
  r.canonicalize();
  return r;
}

std::string names(const Election& e, std::span<const CandidateId> ids) {
  std::string s;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) s += ", ";
    s += e.name_of(ids[i]);
  }
  return s;
}

std::string decimals(std::span<const Rational> v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += to_decimal_string(v[i], 4);
  }
  return s;
}

void check_bounds(const std::vector<CandidateId>& elected, const std::vector<Rational>& lower,
                  const std::vector<Rational>& upper, CandidateId w, CandidateId l) {
  if (w == l) throw InvalidParameter("assertion winner and loser must differ");
  if (in(elected, w) || in(elected, l)) {
    throw InvalidParameter("assertion winner/loser cannot be in the seated list");
  }
  if (lower.size() != elected.size() || upper.size() != elected.size()) {
    throw InvalidParameter("transfer-value bound vectors must align with the seated list");
  }
  const Rational two_thirds(2, 3);
  for (std::size_t i = 0; i < elected.size(); ++i) {
    if (sgn(lower[i]) < 0 || lower[i] >= upper[i] || upper[i] > two_thirds) {
      throw InvalidParameter("transfer-value bounds must satisfy 0 <= lower < upper <= 2/3");
    }
  }
}

}  // namespace

AGStar make_ag(CandidateId winner, CandidateId loser) { return AGStar{winner, loser, {}, {}, {}}; }

NLStar make_nl_compat(CandidateId winner, CandidateId loser, std::vector<CandidateId> elected,
                      std::vector<CandidateId> g_star, std::vector<CandidateId> o_star) {
  NLStar nl;
  nl.winner = winner;
  nl.loser = loser;
  nl.lower.assign(elected.size(), Rational(0));
  nl.upper.assign(elected.size(), Rational(2, 3));
  nl.elected = std::move(elected);
  nl.g_star = std::move(g_star);
  nl.o_star = std::move(o_star);
  nl.compat = true;
  return nl;
}

std::string type_name(const Assertion& a) {
  return std::visit(overloaded{
                        [](const IQ&) -> std::string { return "IQ"; },
                        [](const UT&) -> std::string { return "UT"; },
                        [](const LTStar&) -> std::string { return "LT*"; },
                        [](const AGStar& x) -> std::string { return x.elected.empty() ? "AG" : "AG*"; },
                        [](const NLStar& x) -> std::string { return x.compat ? "NL" : "NL*"; },
                    },
                    a);
}

std::string describe(const Assertion& a, const Election& e) {
  return std::visit(
      overloaded{
          [&](const IQ& x) { return "IQ(" + e.name_of(x.candidate) + ")"; },
          [&](const UT& x) { return "UT(" + e.name_of(x.candidate) + ", " + to_decimal_string(x.upper, 4) + ")"; },
          [&](const LTStar& x) {
            return "LT*(" + e.name_of(x.candidate) + ", " + to_decimal_string(x.lower, 4) + ")";
          },
          [&](const AGStar& x) {
            if (x.elected.empty()) return "AG(" + e.name_of(x.winner) + ", " + e.name_of(x.loser) + ")";
            return "AG*(" + e.name_of(x.winner) + ", " + e.name_of(x.loser) + ", [" + names(e, x.elected) +
                   "], [" + decimals(x.lower) + "], [" + decimals(x.upper) + "])";
          },
          [&](const NLStar& x) {
            std::string s = (x.compat ? "NL(" : "NL*(") + e.name_of(x.winner) + ", " + e.name_of(x.loser) +
                            ", [" + names(e, x.elected) + "]";
            if (!x.compat) s += ", [" + decimals(x.lower) + "], [" + decimals(x.upper) + "]";
            s += ", G={" + names(e, x.g_star) + "}, O={" + names(e, x.o_star) + "})";
            return s;
          },
      },
      a);
}

CandidateId subject_of(const Assertion& a) {
  return std::visit(overloaded{
                        [](const IQ& x) { return x.candidate; },
                        [](const UT& x) { return x.candidate; },
                        [](const LTStar& x) { return x.candidate; },
                        [](const AGStar& x) { return x.winner; },
                        [](const NLStar& x) { return x.winner; },
                    },
                    a);
}

std::optional<CandidateId> loser_of(const Assertion& a) {
  if (const auto* ag = std::get_if<AGStar>(&a)) return ag->loser;
  if (const auto* nl = std::get_if<NLStar>(&a)) return nl->loser;
  return std::nullopt;
}

void validate(const Assertion& a) {
  std::visit(overloaded{
                 [](const IQ&) {},
                 [](const UT& x) {
                   if (sgn(x.upper) <= 0 || x.upper >= 1) throw InvalidParameter("UT bound must be in (0, 1)");
                 },
                 [](const LTStar& x) {
                   if (sgn(x.lower) < 0 || x.lower >= 1) throw InvalidParameter("LT* bound must be in [0, 1)");
                 },
                 [](const AGStar& x) { check_bounds(x.elected, x.lower, x.upper, x.winner, x.loser); },
                 [](const NLStar& x) {
                   check_bounds(x.elected, x.lower, x.upper, x.winner, x.loser);
                   if (in(x.g_star, x.loser) || in(x.g_star, x.winner)) {
                     throw InvalidParameter("G* may not contain the assertion's winner or loser");
                   }
                   if (in(x.o_star, x.winner) || in(x.o_star, x.loser)) {
                     throw InvalidParameter("O* may not contain the assertion's winner or loser");
                   }
                   for (auto c : x.elected) {
                     if (in(x.g_star, c) || in(x.o_star, c)) {
                       throw InvalidParameter("G*/O* may not contain seated candidates");
                     }
                   }
                 },
             },
             a);
}

AssertionCheck eval_iq(const Election& election, CandidateId c) {
  AssertionCheck r;
  r.lhs = first_pref_tally(election, c);
  r.rhs = make_rational(election.quota - 1);
  r.holds = r.lhs > r.rhs;
  return r;
}

AssertionCheck eval_ut(const Election& election, CandidateId c, const Rational& upper) {
  AssertionCheck r;
  r.lhs = tally_for_transfer(election.quota, upper);
  r.rhs = first_pref_tally(election, c);
  r.holds = r.lhs > r.rhs;
  return r;
}

AssertionCheck eval_lt(const Election& election, CandidateId c, const Rational& lower) {
  AssertionCheck r;
  r.lhs = first_pref_tally(election, c);
  r.rhs = tally_for_transfer(election.quota, lower);
  r.holds = r.lhs > r.rhs;
  return r;
}

Rational agstar_contrib_min(std::span<const CandidateId> ballot, CandidateId w,
                            std::span<const CandidateId> elected, std::span<const Rational> lower) {
  if (ballot.empty()) return Rational(0);
  if (ballot.front() == w) return Rational(1);
  return reduced_value(ballot, w, elected, lower);
}

Rational agstar_contrib_max(std::span<const CandidateId> ballot, CandidateId l, CandidateId w,
                            std::span<const CandidateId> elected, std::span<const Rational> upper) {
  const auto pl = position(ballot, l);
  if (pl < 0) return Rational(0);
  const auto pw = position(ballot, w);
  if (pw >= 0 && pw < pl) return Rational(0);
  if (in(elected, ballot.front())) return max_upper_before(ballot, pl, elected, upper);
  return Rational(1);
}

Rational nlstar_contrib_min(std::span<const CandidateId> ballot, CandidateId w,
                            std::span<const CandidateId> elected, std::span<const Rational> lower,
                            std::span<const CandidateId> o_star) {
  for (auto c : ballot) {
    if (in(o_star, c)) continue;
    if (c == w) return Rational(1);
    break;
  }
  return reduced_value(ballot, w, elected, lower);
}

Rational nlstar_contrib_max(std::span<const CandidateId> ballot, CandidateId l, CandidateId w,
                            std::span<const CandidateId> elected, std::span<const Rational> upper,
                            std::span<const CandidateId> g_star) {
  const auto pl = position(ballot, l);
  if (pl < 0) return Rational(0);
  const auto pw = position(ballot, w);
  if (pw >= 0 && pw < pl) return Rational(0);
  for (std::ptrdiff_t i = 0; i < pl; ++i) {
    if (in(g_star, ballot[static_cast<std::size_t>(i)])) return Rational(0);
  }
  if (in(elected, ballot.front())) return max_upper_before(ballot, pl, elected, upper);
  return Rational(1);
}

AssertionCheck eval_agstar(const Election& election, const AGStar& a) {
  AssertionCheck r;
  for (const auto& g : election.ballots) {
    r.lhs += agstar_contrib_min(g.ranking, a.winner, a.elected, a.lower) * g.count;
    r.rhs += agstar_contrib_max(g.ranking, a.loser, a.winner, a.elected, a.upper) * g.count;
  }
  r.holds = r.lhs > r.rhs;
  return r;
}

AssertionCheck eval_nlstar(const Election& election, const NLStar& a) {
  AssertionCheck r;
  for (const auto& g : election.ballots) {
    r.lhs += nlstar_contrib_min(g.ranking, a.winner, a.elected, a.lower, a.o_star) * g.count;
    r.rhs += nlstar_contrib_max(g.ranking, a.loser, a.winner, a.elected, a.upper, a.g_star) * g.count;
  }
  r.holds = r.lhs > r.rhs;
  return r;
}

AssertionCheck evaluate(const Election& election, const Assertion& a) {
  return std::visit(overloaded{
                        [&](const IQ& x) { return eval_iq(election, x.candidate); },
                        [&](const UT& x) { return eval_ut(election, x.candidate, x.upper); },
                        [&](const LTStar& x) { return eval_lt(election, x.candidate, x.lower); },
                        [&](const AGStar& x) { return eval_agstar(election, x); },
                        [&](const NLStar& x) { return eval_nlstar(election, x); },
                    },
                    a);
}

namespace {

// The assertion as "sum over ballots of d(b) > 0", plus the range of d over
// every possible ballot (not just the reported ones).
struct Difference {
  std::function<Rational(std::span<const CandidateId>)> d;
  Rational low;
  Rational high;
};

Difference difference_form(const Assertion& a, const Election& e) {
  const Rational ballots = make_rational(std::max<std::int64_t>(e.total_valid, 1));
  auto indicator_minus = [](CandidateId c, Rational theta) {
    return [c, theta](std::span<const CandidateId> b) -> Rational {
      return (!b.empty() && b.front() == c ? Rational(1) : Rational(0)) - theta;
    };
  };
  return std::visit(
      overloaded{
          [&](const IQ& x) {
            // t > Q - 1 encodes t >= Q for integer tallies.
            Rational theta = make_rational(e.quota - 1) / ballots;
            return Difference{indicator_minus(x.candidate, theta), -theta, Rational(1) - theta};
          },
          [&](const LTStar& x) {
            Rational theta = tally_for_transfer(e.quota, x.lower) / ballots;
            return Difference{indicator_minus(x.candidate, theta), -theta, Rational(1) - theta};
          },
          [&](const UT& x) {
            Rational theta = tally_for_transfer(e.quota, x.upper) / ballots;
            auto c = x.candidate;
            return Difference{[c, theta](std::span<const CandidateId> b) -> Rational {
                                return theta - (!b.empty() && b.front() == c ? Rational(1) : Rational(0));
                              },
                              theta - 1, theta};
          },
          [&](const AGStar& x) {
            return Difference{[x](std::span<const CandidateId> b) -> Rational {
                                return agstar_contrib_min(b, x.winner, x.elected, x.lower) -
                                       agstar_contrib_max(b, x.loser, x.winner, x.elected, x.upper);
                              },
                              Rational(-1), Rational(1)};
          },
          [&](const NLStar& x) {
            return Difference{[x](std::span<const CandidateId> b) -> Rational {
                                return nlstar_contrib_min(b, x.winner, x.elected, x.lower, x.o_star) -
                                       nlstar_contrib_max(b, x.loser, x.winner, x.elected, x.upper, x.g_star);
                              },
                              Rational(-1), Rational(1)};
          },
      },
      a);
}

}  // namespace

AssorterSpec to_assorter(const Assertion& a, const Election& election) {
  validate(a);
  auto diff = difference_form(a, election);

  Rational total;
  for (const auto& g : election.ballots) total += diff.d(g.ranking) * g.count;

  AssorterSpec spec;
  spec.population = election.total_valid;

  if (election.total_valid == 0 || sgn(diff.high) <= 0 || sgn(diff.low) >= 0) {
    // No ballot can push the sum one way: the answer is fixed by the sign of
    // the reported sum and the assorter is a constant.
    const bool holds = election.total_valid > 0 && sgn(diff.low) >= 0 && sgn(total) > 0;
    spec.degenerate = holds ? Degeneracy::AlwaysTrue : Degeneracy::AlwaysFalse;
    const Rational value = holds ? Rational(1) : Rational(0);
    spec.score = [value](std::span<const CandidateId>) { return value; };
    spec.upper = 1;
  } else {
    const Rational scale = -2 * diff.low;
    const Rational low = diff.low;
    spec.score = [d = std::move(diff.d), low, scale](std::span<const CandidateId> b) -> Rational {
      Rational s = (d(b) - low) / scale;
      s.canonicalize();
      return s;
    };
    spec.upper = (diff.high - diff.low) / scale;
    spec.upper.canonicalize();
  }

  std::map<Rational, std::int64_t> dist;
  Rational sum;
  for (const auto& g : election.ballots) {
    const Rational s = spec.score(g.ranking);
    dist[s] += g.count;
    sum += s * g.count;
  }
  spec.distribution.assign(dist.begin(), dist.end());
  spec.mean = election.total_valid > 0 ? Rational(sum / election.total_valid) : Rational(0);
  spec.mean.canonicalize();
  spec.margin = 2 * spec.mean - 1;
  spec.margin.canonicalize();
  return spec;
}

}  // namespace stvrla
