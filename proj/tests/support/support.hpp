#pragma once

// Glue between production types and the oracle, plus random generators shared
// by the unit and acceptance tests.

#include <algorithm>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "oracle.hpp"
#include "stvrla/assertions.hpp"
#include "stvrla/election_io.hpp"

namespace support {

inline std::filesystem::path data_path(const std::string& name) {
  return std::filesystem::path(STVRLA_TEST_DATA) / name;
}

inline stvrla::Election load(const std::string& name) { return stvrla::load_election(data_path(name)); }

inline stvrla::CandidateId id(std::uint32_t i) { return stvrla::CandidateId{i}; }

inline oracle::Q to_q(const stvrla::Rational& r) {
  return oracle::Q(r.get_num().get_str()) / oracle::Q(r.get_den().get_str());
}

inline stvrla::Rational from_q(const oracle::Q& q) {
  return stvrla::Rational(numerator(q).str() + "/" + denominator(q).str());
}

inline std::vector<int> ints(const std::vector<stvrla::CandidateId>& v) {
  std::vector<int> out;
  for (auto c : v) out.push_back(static_cast<int>(c.index));
  return out;
}

inline std::vector<oracle::Q> qs(const std::vector<stvrla::Rational>& v) {
  std::vector<oracle::Q> out;
  for (const auto& r : v) out.push_back(to_q(r));
  return out;
}

inline oracle::Ballots to_oracle(const stvrla::Election& e) {
  oracle::Ballots out;
  out.candidates = static_cast<int>(e.candidate_count());
  out.seats = e.seats;
  out.quota = e.quota;
  for (const auto& g : e.ballots) out.groups.emplace_back(ints(g.ranking), g.count);
  return out;
}

// The oracle's verdict on a production assertion.
inline oracle::Check oracle_check(const oracle::Ballots& e, const stvrla::Assertion& a) {
  using namespace stvrla;
  if (const auto* x = std::get_if<IQ>(&a)) return oracle::check_iq(e, static_cast<int>(x->candidate.index));
  if (const auto* x = std::get_if<UT>(&a)) {
    return oracle::check_ut(e, static_cast<int>(x->candidate.index), to_q(x->upper));
  }
  if (const auto* x = std::get_if<LTStar>(&a)) {
    return oracle::check_lt(e, static_cast<int>(x->candidate.index), to_q(x->lower));
  }
  if (const auto* x = std::get_if<AGStar>(&a)) {
    return oracle::check_ag(e, static_cast<int>(x->winner.index), static_cast<int>(x->loser.index), ints(x->elected),
                            qs(x->lower), qs(x->upper));
  }
  const auto& n = std::get<NLStar>(a);
  return oracle::check_nl(e, static_cast<int>(n.winner.index), static_cast<int>(n.loser.index), ints(n.elected),
                          qs(n.lower), qs(n.upper), ints(n.g_star), ints(n.o_star));
}

struct RandomSpec {
  int max_candidates = 5;
  int max_types = 8;
  int max_count = 50;
  int seats = 2;
};

// Random election with 2..max_candidates candidates (at least `seats`).
inline stvrla::Election random_election(std::mt19937_64& rng, const RandomSpec& spec = {}) {
  std::uniform_int_distribution<int> ncand(std::max(2, spec.seats), spec.max_candidates);
  const int n = ncand(rng);
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back("c" + std::to_string(i + 1));
  std::uniform_int_distribution<int> ntypes(1, spec.max_types);
  std::uniform_int_distribution<int> count(1, spec.max_count);
  std::vector<stvrla::BallotGroup> groups;
  const int types = ntypes(rng);
  for (int t = 0; t < types; ++t) {
    std::vector<stvrla::CandidateId> perm;
    for (int i = 0; i < n; ++i) perm.push_back(id(static_cast<std::uint32_t>(i)));
    std::shuffle(perm.begin(), perm.end(), rng);
    std::uniform_int_distribution<int> len(1, n);
    perm.resize(static_cast<std::size_t>(len(rng)));
    groups.push_back({perm, count(rng)});
  }
  return stvrla::make_election("random", names, groups, spec.seats);
}

inline stvrla::Rational random_fraction(std::mt19937_64& rng, int den, int lo, int hi) {
  std::uniform_int_distribution<int> num(lo, hi);
  return stvrla::make_rational(num(rng), den);
}

// A structurally valid assertion of a random type over `n` candidates.
inline stvrla::Assertion random_assertion(std::mt19937_64& rng, std::uint32_t n) {
  using namespace stvrla;
  std::uniform_int_distribution<std::uint32_t> pick(0, n - 1);
  std::uniform_int_distribution<int> type(0, 5);
  const auto c = id(pick(rng));
  switch (type(rng)) {
    case 0: return IQ{c};
    case 1: return UT{c, random_fraction(rng, 60, 1, 40)};
    case 2: return LTStar{c, random_fraction(rng, 60, 0, 39)};
    default: break;
  }
  std::vector<CandidateId> order;
  for (std::uint32_t i = 0; i < n; ++i) order.push_back(id(i));
  std::shuffle(order.begin(), order.end(), rng);
  const auto w = order[0];
  const auto l = order[1];
  std::uniform_int_distribution<std::size_t> wsize(0, std::min<std::size_t>(2, n - 2));
  const std::size_t k = wsize(rng);
  std::vector<CandidateId> W(order.begin() + 2, order.begin() + 2 + static_cast<std::ptrdiff_t>(k));
  std::vector<Rational> lower;
  std::vector<Rational> upper;
  for (std::size_t i = 0; i < k; ++i) {
    lower.push_back(random_fraction(rng, 60, 0, 30));
    upper.push_back(lower.back() + random_fraction(rng, 60, 1, 10));
    if (upper.back() > Rational(2, 3)) upper.back() = Rational(2, 3);
  }
  const int t = type(rng);
  if (t % 2 == 0) return AGStar{w, l, W, lower, upper};
  std::vector<CandidateId> G;
  std::vector<CandidateId> O;
  std::bernoulli_distribution coin(0.5);
  for (std::uint32_t i = 0; i < n; ++i) {
    const auto x = id(i);
    if (x == w || x == l || std::find(W.begin(), W.end(), x) != W.end()) continue;
    if (coin(rng)) G.push_back(x);
    if (coin(rng)) O.push_back(x);
  }
  return NLStar{w, l, W, lower, upper, G, O, false};
}

}  // namespace support
