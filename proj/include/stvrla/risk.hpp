#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "stvrla/assertions.hpp"

namespace stvrla {

enum class AuditMode { Comparison, Polling };

// Defaults: 10% risk limit, 2 one-vote overstatements per 1000 ballots,
// ALPHA with a shrink-trunc estimator of weight d = 100.
struct AuditParams {
  double risk_limit = 0.10;
  double error_rate = 0.002;
  double shrink_d = 100.0;    // may be +inf: the estimator stays at eta0
  double eps_floor = 0.001;   // as a fraction of the tested upper bound
  AuditMode mode = AuditMode::Comparison;
};

void validate(const AuditParams& params);

struct RiskTrajectory {
  std::vector<double> p_values;
  // Number of draws after which p <= risk limit first held.
  std::optional<std::size_t> decision_index;
};

/// ALPHA test of H0: population mean <= 1/2 for draws in [0, upper], without
/// replacement when `population` is set, with replacement otherwise.
class AlphaTest {
 public:
  AlphaTest(double upper, double eta0, std::optional<std::int64_t> population, const AuditParams& params);

  // Consumes one draw and returns min(1, 1/T_j).
  double push(double x);

  double p_value() const;
  double min_p_value() const { return min_p_; }
  std::size_t draws() const { return draws_; }
  double upper() const { return upper_; }

 private:
  double upper_;
  double eta0_;
  std::optional<std::int64_t> population_;
  double d_;
  double eps_;
  double sum_ = 0.0;
  std::size_t draws_ = 0;
  double t_ = 1.0;  // may become +inf or 0
  double min_p_ = 1.0;
};

RiskTrajectory alpha_test(std::span<const double> xs, double upper, double eta0,
                          std::optional<std::int64_t> population, const AuditParams& params);

/// Overstatement assorter for comparison audits,
/// B = (1 - omega/u) / (2 - v/u) with u the assorter bound and v its margin.
struct ComparisonScale {
  double assorter_upper = 1.0;
  double margin = 0.0;

  double value(double overstatement) const {
    return (1.0 - overstatement / assorter_upper) / (2.0 - margin / assorter_upper);
  }
  double upper() const { return value(-assorter_upper); }
  double error_free() const { return value(0.0); }
  double one_vote() const { return value(assorter_upper / 2.0); }
};

ComparisonScale comparison_scale(const AssorterSpec& assorter);

/// Expected sample size from a deterministic draw sequence (one-vote
/// overstatements every ceil(1/r)-th draw in comparison mode, reported score
/// proportions in polling mode). Empty when the margin is not positive or the
/// test does not stop before the population is exhausted.
std::optional<std::int64_t> estimate_asn(const AssorterSpec& assorter, const AuditParams& params);

/// Smallest p-value reached over a sample of (reported score, audited score)
/// pairs. Comparison mode tests overstatements; polling mode uses the audited
/// scores directly.
double measure_risk(std::span<const std::pair<double, double>> sample, const AssorterSpec& assorter,
                    const AuditParams& params);
double measure_risk(std::span<const double> reported, std::span<const double> audited,
                    const AssorterSpec& assorter, const AuditParams& params);

}  // namespace stvrla
