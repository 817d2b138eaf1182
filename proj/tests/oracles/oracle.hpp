#pragma once

// Slow, literal reference implementations for tests. Nothing here includes a
// production header; inputs are plain integer candidate indices.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace oracle {

using Q = boost::multiprecision::cpp_rational;
using Ballot = std::vector<int>;

struct Ballots {
  int candidates = 0;
  int seats = 1;
  std::int64_t quota = 0;
  std::vector<std::pair<Ballot, std::int64_t>> groups;
};

struct OracleResult {
  Q value;
  std::vector<int> winners;  // sorted
  std::string method;
};

struct Check {
  bool holds = false;
  Q lhs;
  Q rhs;
};

std::int64_t droop(std::int64_t total, int seats);

// Sum over every ballot of contrib(ballot) * count.
OracleResult oracle_tally(const Ballots& e, const std::function<Q(const Ballot&)>& contrib);

// Straight-line STV count. Throws std::invalid_argument above 8 candidates.
OracleResult oracle_winners(const Ballots& e, bool batch_first);

// Branch tables of the contribution functions, written out case by case.
Q ag_min(const Ballot& b, int w, const std::vector<int>& W, const std::vector<Q>& lower);
Q ag_max(const Ballot& b, int l, int w, const std::vector<int>& W, const std::vector<Q>& upper);
Q nl_min(const Ballot& b, int w, const std::vector<int>& W, const std::vector<Q>& lower, const std::vector<int>& O);
Q nl_max(const Ballot& b, int l, int w, const std::vector<int>& W, const std::vector<Q>& upper,
         const std::vector<int>& G);

Check check_iq(const Ballots& e, int c);
Check check_ut(const Ballots& e, int c, const Q& upper);
Check check_lt(const Ballots& e, int c, const Q& lower);
Check check_ag(const Ballots& e, int w, int l, const std::vector<int>& W, const std::vector<Q>& lower,
               const std::vector<Q>& upper);
Check check_nl(const Ballots& e, int w, int l, const std::vector<int>& W, const std::vector<Q>& lower,
               const std::vector<Q>& upper, const std::vector<int>& G, const std::vector<int>& O);

// ALPHA statistic after each draw, without replacement when population > 0.
// eta is frozen at eta0 when d is infinite.
std::vector<double> alpha_statistics(const std::vector<double>& xs, double u, double eta0, double d, double eps,
                                     std::int64_t population);

}  // namespace oracle
