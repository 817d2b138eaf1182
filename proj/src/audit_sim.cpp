#include "stvrla/audit_sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <unordered_map>

#include "stvrla/errors.hpp"

namespace stvrla {

std::vector<CvrPair> identical_population(const Election& election) {
  std::vector<CvrPair> out;
  out.reserve(election.ballots.size());
  for (const auto& g : election.ballots) out.push_back({g.ranking, g.ranking, g.count});
  return out;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Uniform integer in [0, bound) by rejection; mt19937_64 output is specified
// by the standard, so the stream is the same on every platform.
std::uint64_t below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t r;
  do {
    r = rng();
  } while (r >= limit);
  return r % bound;
}

double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Sampling without replacement over [0, n) in O(draws) memory.
class SparseShuffle {
 public:
  explicit SparseShuffle(std::int64_t n) : n_(n) {}

  std::int64_t next(std::mt19937_64& rng) {
    const auto j = drawn_ + static_cast<std::int64_t>(below(rng, static_cast<std::uint64_t>(n_ - drawn_)));
    const auto at = [&](std::int64_t k) {
      auto it = swapped_.find(k);
      return it == swapped_.end() ? k : it->second;
    };
    const auto picked = at(j);
    swapped_[j] = at(drawn_);
    ++drawn_;
    return picked;
  }

 private:
  std::int64_t n_;
  std::int64_t drawn_ = 0;
  std::unordered_map<std::int64_t, std::int64_t> swapped_;
};

struct PreparedAssertion {
  std::string description;
  double upper = 1.0;
  double eta0 = 0.5;
  ComparisonScale scale;
  std::vector<double> draw_value;  // per population pair, before error injection
};

}  // namespace

SimReport simulate_audit(const Election& reported, std::span<const CvrPair> population,
                         std::span<const SimAssertion> plan, const AuditParams& params, std::size_t trials,
                         std::uint64_t seed, const ErrorModel& errors) {
  validate(params);
  if (trials == 0) throw InvalidParameter("simulation needs at least one trial");
  if (!(errors.overstatement_rate >= 0.0 && errors.overstatement_rate < 1.0)) {
    throw InvalidParameter("overstatement rate must be in [0, 1)");
  }
  std::vector<std::int64_t> ends;
  std::int64_t n = 0;
  for (const auto& p : population) {
    if (p.count < 0) throw InvalidParameter("negative ballot count in population");
    n += p.count;
    ends.push_back(n);
  }
  if (n == 0) throw InvalidParameter("empty ballot population");

  const bool comparison = params.mode == AuditMode::Comparison;
  std::vector<PreparedAssertion> prepared;
  for (const auto& [a, excluded] : plan) {
    const bool projected = !excluded.empty();
    const Election context = projected ? without_candidates(reported, excluded) : reported;
    CandidateSet keep = CandidateSet::all(reported.candidate_count());
    for (auto c : excluded.members()) keep.erase(c);
    const auto assorter = to_assorter(a, context);
    auto score = [&](const Ranking& r) {
      return to_double(projected ? assorter.score(project(r, keep)) : assorter.score(r));
    };
    PreparedAssertion p;
    p.description = describe(a, reported);
    p.scale = comparison_scale(assorter);
    p.upper = comparison ? p.scale.upper() : to_double(assorter.upper);
    p.eta0 = comparison ? p.scale.error_free() : to_double(assorter.mean);
    for (const auto& pair : population) {
      const double actual = score(pair.actual);
      p.draw_value.push_back(comparison ? p.scale.value(score(pair.reported) - actual) : actual);
    }
    prepared.push_back(std::move(p));
  }

  SimReport report;
  report.trials = trials;
  report.seed = seed;
  report.population = n;
  report.per_assertion.resize(prepared.size());
  for (std::size_t k = 0; k < prepared.size(); ++k) report.per_assertion[k].description = prepared[k].description;

  std::vector<std::int64_t> samples;
  samples.reserve(trials);
  std::size_t completed = 0;
  std::vector<std::int64_t> certified_count(prepared.size(), 0);
  std::vector<double> sample_sum(prepared.size(), 0.0);

  for (std::size_t t = 0; t < trials; ++t) {
    std::mt19937_64 rng(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(t))));
    SparseShuffle shuffle(n);
    std::vector<AlphaTest> tests;
    for (const auto& p : prepared) tests.emplace_back(p.upper, p.eta0, n, params);
    std::vector<std::int64_t> certified_at(prepared.size(), 0);
    std::size_t open = prepared.size();
    std::int64_t drawn = 0;
    while (open > 0 && drawn < n) {
      const auto ballot = shuffle.next(rng);
      ++drawn;
      const auto group =
          static_cast<std::size_t>(std::upper_bound(ends.begin(), ends.end(), ballot) - ends.begin());
      for (std::size_t k = 0; k < prepared.size(); ++k) {
        if (certified_at[k] != 0) continue;
        double x = prepared[k].draw_value[group];
        if (comparison && errors.overstatement_rate > 0.0 && unit(rng) < errors.overstatement_rate) {
          x = prepared[k].scale.one_vote();
        }
        if (tests[k].push(x) <= params.risk_limit) {
          certified_at[k] = drawn;
          --open;
        }
      }
    }
    if (open == 0) ++completed;
    // An audit that never certifies escalates to a full hand count.
    samples.push_back(open == 0 ? drawn : n);
    for (std::size_t k = 0; k < prepared.size(); ++k) {
      if (certified_at[k] != 0) ++certified_count[k];
      sample_sum[k] += static_cast<double>(certified_at[k] != 0 ? certified_at[k] : n);
    }
  }

  const auto tf = static_cast<double>(trials);
  report.completion_rate = static_cast<double>(completed) / tf;
  report.mean_sample = std::accumulate(samples.begin(), samples.end(), 0.0) / tf;
  std::sort(samples.begin(), samples.end());
  const auto rank = static_cast<std::size_t>(std::ceil(0.9 * tf));
  report.p90_sample = samples[std::max<std::size_t>(rank, 1) - 1];
  for (std::size_t k = 0; k < prepared.size(); ++k) {
    report.per_assertion[k].certified_rate = static_cast<double>(certified_count[k]) / tf;
    report.per_assertion[k].mean_sample = sample_sum[k] / tf;
  }
  return report;
}

SimReport simulate_audit(const Election& reported, std::span<const CvrPair> population,
                         std::span<const Assertion> plan, const AuditParams& params, std::size_t trials,
                         std::uint64_t seed, const ErrorModel& errors) {
  std::vector<SimAssertion> wrapped;
  for (const auto& a : plan) wrapped.push_back({a, {}});
  return simulate_audit(reported, population, std::span<const SimAssertion>(wrapped), params, trials, seed, errors);
}

SimReport simulate_audit(const Election& truth, std::span<const Assertion> plan, const AuditParams& params,
                         std::size_t trials, std::uint64_t seed, const ErrorModel& errors) {
  const auto population = identical_population(truth);
  return simulate_audit(truth, population, plan, params, trials, seed, errors);
}

}  // namespace stvrla
