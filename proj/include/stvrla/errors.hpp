#pragma once

#include <stdexcept>
#include <string>

namespace stvrla {

// Bad numeric parameter (seats = 0, risk limit outside (0,1), ...).
class InvalidParameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed ballot file or plan file.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised by the tabulator in strict mode when a tie has to be broken.
class TieError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The first-round-winner planner was handed an election where no candidate
// is seated in the first round.
class FirstRoundWinnerCriterion : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace stvrla
