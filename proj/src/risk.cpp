#include "stvrla/risk.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "stvrla/errors.hpp"

namespace stvrla {

void validate(const AuditParams& params) {
  if (!(params.risk_limit > 0.0 && params.risk_limit < 1.0)) {
    throw InvalidParameter("risk limit must be in (0, 1)");
  }
  if (!(params.error_rate >= 0.0 && params.error_rate < 1.0)) {
    throw InvalidParameter("error rate must be in [0, 1)");
  }
  if (!(params.shrink_d > 0.0)) throw InvalidParameter("ALPHA shrinkage weight must be positive");
  if (!(params.eps_floor > 0.0 && params.eps_floor < 0.5)) {
    throw InvalidParameter("eps floor must be in (0, 0.5)");
  }
}

AlphaTest::AlphaTest(double upper, double eta0, std::optional<std::int64_t> population,
                     const AuditParams& params)
    : upper_(upper),
      eta0_(eta0),
      population_(population),
      d_(params.shrink_d),
      eps_(params.eps_floor * upper) {
  if (!(upper > 0.0)) throw InvalidParameter("assorter upper bound must be positive");
  if (population && *population <= 0) throw InvalidParameter("population must be positive");
}

double AlphaTest::p_value() const {
  if (std::isinf(t_)) return 0.0;
  if (t_ <= 0.0) return 1.0;
  return std::min(1.0, 1.0 / t_);
}

double AlphaTest::push(double x) {
  const double slack = 1e-12 * std::max(1.0, upper_);
  if (!(x >= -slack && x <= upper_ + slack)) {
    throw InvalidParameter("draw " + std::to_string(x) + " outside [0, " + std::to_string(upper_) + "]");
  }
  x = std::clamp(x, 0.0, upper_);
  const auto j = static_cast<double>(++draws_);

  if (population_ && draws_ > static_cast<std::size_t>(*population_)) {
    throw InvalidParameter("more draws than ballots in the population");
  }

  // Once the null is impossible (or certain) the statistic is frozen.
  if (!std::isinf(t_) && t_ > 0.0) {
    double mu = 0.5;
    if (population_) {
      const auto n = static_cast<double>(*population_);
      mu = (n / 2.0 - sum_) / (n - j + 1.0);
    }
    if (mu < 0.0) {
      t_ = std::numeric_limits<double>::infinity();
    } else if (mu >= upper_) {
      t_ = 0.0;
    } else if (mu == 0.0) {
      if (x > 0.0) t_ = std::numeric_limits<double>::infinity();
    } else {
      double eta;
      if (std::isinf(d_)) {
        eta = std::max(eta0_, mu);
      } else {
        const double weight = d_ + j - 1.0;
        eta = std::max((d_ * eta0_ + sum_) / weight, mu + eps_ / std::sqrt(weight));
      }
      eta = std::max(mu, std::min(upper_ - eps_, eta));
      t_ *= (x * eta / mu + (upper_ - x) * (upper_ - eta) / (upper_ - mu)) / upper_;
    }
  }
  sum_ += x;
  const double p = p_value();
  min_p_ = std::min(min_p_, p);
  return p;
}

RiskTrajectory alpha_test(std::span<const double> xs, double upper, double eta0,
                          std::optional<std::int64_t> population, const AuditParams& params) {
  validate(params);
  AlphaTest test(upper, eta0, population, params);
  RiskTrajectory out;
  out.p_values.reserve(xs.size());
  for (double x : xs) {
    const double p = test.push(x);
    out.p_values.push_back(p);
    if (!out.decision_index && p <= params.risk_limit) out.decision_index = out.p_values.size();
  }
  return out;
}

ComparisonScale comparison_scale(const AssorterSpec& assorter) {
  return ComparisonScale{to_double(assorter.upper), to_double(assorter.margin)};
}

namespace {

std::optional<std::int64_t> run_until_decision(AlphaTest& test, std::int64_t population, double alpha,
                                               auto&& next_draw) {
  for (std::int64_t j = 1; j <= population; ++j) {
    if (test.push(next_draw(j)) <= alpha) return j;
  }
  return std::nullopt;
}

}  // namespace

std::optional<std::int64_t> estimate_asn(const AssorterSpec& assorter, const AuditParams& params) {
  validate(params);
  if (sgn(assorter.margin) <= 0 || assorter.population <= 0) return std::nullopt;

  if (params.mode == AuditMode::Comparison) {
    const auto scale = comparison_scale(assorter);
    const double clean = scale.error_free();
    const double overstated = scale.one_vote();
    // ceil(1/r), guarded against 1/0.002 = 500.00000000000006
    const std::int64_t spacing =
        params.error_rate > 0.0 ? static_cast<std::int64_t>(std::ceil(1.0 / params.error_rate - 1e-9)) : 0;
    AlphaTest test(scale.upper(), clean, assorter.population, params);
    return run_until_decision(test, assorter.population, params.risk_limit, [&](std::int64_t j) {
      return spacing > 0 && j % spacing == 0 ? overstated : clean;
    });
  }

  // Polling: reported score values interleaved in their reported proportions.
  std::vector<double> values;
  std::vector<double> share;
  for (const auto& [v, n] : assorter.distribution) {
    values.push_back(to_double(v));
    share.push_back(static_cast<double>(n) / static_cast<double>(assorter.population));
  }
  std::vector<std::int64_t> used(values.size(), 0);
  AlphaTest test(to_double(assorter.upper), to_double(assorter.mean), assorter.population, params);
  return run_until_decision(test, assorter.population, params.risk_limit, [&](std::int64_t j) {
    std::size_t best = 0;
    double deficit = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < values.size(); ++k) {
      const double d = share[k] * static_cast<double>(j) - static_cast<double>(used[k]);
      if (d > deficit) {
        deficit = d;
        best = k;
      }
    }
    ++used[best];
    return values[best];
  });
}

double measure_risk(std::span<const std::pair<double, double>> sample, const AssorterSpec& assorter,
                    const AuditParams& params) {
  validate(params);
  const double u = to_double(assorter.upper);
  const auto population = assorter.population > 0 ? std::optional<std::int64_t>(assorter.population) : std::nullopt;
  const double slack = 1e-12 * std::max(1.0, u);
  for (const auto& [reported, audited] : sample) {
    if (reported < -slack || reported > u + slack || audited < -slack || audited > u + slack) {
      throw InvalidParameter("assorter score outside [0, upper]");
    }
  }

  if (params.mode == AuditMode::Comparison) {
    const auto scale = comparison_scale(assorter);
    AlphaTest test(scale.upper(), scale.error_free(), population, params);
    for (const auto& [reported, audited] : sample) test.push(scale.value(reported - audited));
    return test.min_p_value();
  }
  AlphaTest test(u, to_double(assorter.mean), population, params);
  for (const auto& pair : sample) test.push(pair.second);
  return test.min_p_value();
}

double measure_risk(std::span<const double> reported, std::span<const double> audited,
                    const AssorterSpec& assorter, const AuditParams& params) {
  if (reported.size() != audited.size()) {
    throw InvalidParameter("reported and audited samples differ in length");
  }
  std::vector<std::pair<double, double>> sample;
  sample.reserve(reported.size());
  for (std::size_t i = 0; i < reported.size(); ++i) sample.emplace_back(reported[i], audited[i]);
  return measure_risk(sample, assorter, params);
}

}  // namespace stvrla
