#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "stvrla/ballot.hpp"
#include "stvrla/rational.hpp"

namespace stvrla {

// Quota on first preferences: t_{c,1} >= Q.
struct IQ {
  CandidateId candidate;
};

// Transfer value of a first-round winner is below `upper`: t_{c,1} < Q/(1-upper).
struct UT {
  CandidateId candidate;
  Rational upper;
};

// Transfer value of a first-round winner is above `lower`: t_{c,1} > Q/(1-lower).
struct LTStar {
  CandidateId candidate;
  Rational lower;
};

// `winner` always out-polls `loser` while the candidates in `elected` have
// been seated with transfer values bounded by `lower`/`upper` (aligned with
// `elected`). An empty `elected` list is the plain AG assertion.
struct AGStar {
  CandidateId winner;
  CandidateId loser;
  std::vector<CandidateId> elected;
  std::vector<Rational> lower;
  std::vector<Rational> upper;
};

// `winner` never loses to `loser` in the same seated context, given that every
// g in g_star always beats `loser` and `winner` always beats every o in o_star.
// `compat` marks the encoding of the original NL assertion (lower 0, upper 2/3).
struct NLStar {
  CandidateId winner;
  CandidateId loser;
  std::vector<CandidateId> elected;
  std::vector<Rational> lower;
  std::vector<Rational> upper;
  std::vector<CandidateId> g_star;
  std::vector<CandidateId> o_star;
  bool compat = false;
};

using Assertion = std::variant<IQ, UT, LTStar, AGStar, NLStar>;

AGStar make_ag(CandidateId winner, CandidateId loser);

// Original NL(w, l, W, G, O): lower bounds 0, upper bounds 2/3.
NLStar make_nl_compat(CandidateId winner, CandidateId loser, std::vector<CandidateId> elected,
                      std::vector<CandidateId> g_star, std::vector<CandidateId> o_star);

// "IQ", "UT", "LT*", "AG", "AG*", "NL", "NL*".
std::string type_name(const Assertion& a);

// Human-readable form, e.g. "NL*(c3, c4, [c1], [0.2000], [0.2500], G={}, O={c2})".
std::string describe(const Assertion& a, const Election& election);

// Winner-side candidate (the subject for IQ/UT/LT*) and, for pairwise
// assertions, the loser.
CandidateId subject_of(const Assertion& a);
std::optional<CandidateId> loser_of(const Assertion& a);

// Throws InvalidParameter when the structural invariants do not hold
// (w != l, w,l not in W, 0 <= lower < upper <= 2/3, ...).
void validate(const Assertion& a);

/// Outcome of evaluating an assertion on a ballot set: holds iff lhs > rhs.
struct AssertionCheck {
  bool holds = false;
  Rational lhs;
  Rational rhs;
};

AssertionCheck eval_iq(const Election& election, CandidateId c);
AssertionCheck eval_ut(const Election& election, CandidateId c, const Rational& upper);
AssertionCheck eval_lt(const Election& election, CandidateId c, const Rational& lower);

// Per-ballot contributions to t1min_w and t1max_l.
Rational agstar_contrib_min(std::span<const CandidateId> ballot, CandidateId w,
                            std::span<const CandidateId> elected, std::span<const Rational> lower);
Rational agstar_contrib_max(std::span<const CandidateId> ballot, CandidateId l, CandidateId w,
                            std::span<const CandidateId> elected, std::span<const Rational> upper);

// Per-ballot contributions to t2min_w and t2max_l.
Rational nlstar_contrib_min(std::span<const CandidateId> ballot, CandidateId w,
                            std::span<const CandidateId> elected, std::span<const Rational> lower,
                            std::span<const CandidateId> o_star);
Rational nlstar_contrib_max(std::span<const CandidateId> ballot, CandidateId l, CandidateId w,
                            std::span<const CandidateId> elected, std::span<const Rational> upper,
                            std::span<const CandidateId> g_star);

AssertionCheck eval_agstar(const Election& election, const AGStar& a);
AssertionCheck eval_nlstar(const Election& election, const NLStar& a);

AssertionCheck evaluate(const Election& election, const Assertion& a);

enum class Degeneracy { None, AlwaysTrue, AlwaysFalse };

/// SHANGRLA-style assorter: a per-ballot score in [0, upper] whose mean over
/// the population exceeds 1/2 exactly when the source assertion holds.
struct AssorterSpec {
  std::function<Rational(std::span<const CandidateId>)> score;
  Rational upper;
  Rational mean;
  Rational margin;  // 2 * mean - 1
  std::int64_t population = 0;
  Degeneracy degenerate = Degeneracy::None;
  // Distinct score values and how many reported ballots take each.
  std::vector<std::pair<Rational, std::int64_t>> distribution;
};

AssorterSpec to_assorter(const Assertion& a, const Election& election);

}  // namespace stvrla
