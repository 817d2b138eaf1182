#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "stvrla/assertions.hpp"
#include "stvrla/risk.hpp"

namespace stvrla {

// Sample size used for assertions that cannot be audited short of a full
// hand count (false assertions, or tests that never reach the risk limit).
inline constexpr std::int64_t kInfeasibleAsn = std::numeric_limits<std::int64_t>::max();

inline bool feasible(std::int64_t asn) { return asn != kInfeasibleAsn; }

enum class PlanKind { FullRLA, PartialRLA, Infeasible };

const char* to_string(PlanKind kind);

/// An assertion together with its evaluation and expected audit cost.
struct CostedAssertion {
  Assertion assertion;
  AssertionCheck check;
  double margin = 0.0;
  std::int64_t asn = kInfeasibleAsn;
};

CostedAssertion cost_assertion(const Election& election, Assertion assertion, const AuditParams& params);

std::int64_t max_asn(std::span<const CostedAssertion> assertions);

/// An NL/NL* assertion plus the AG/AG* assertions it relies on.
struct NlFormation {
  CostedAssertion nl;
  std::vector<CostedAssertion> helpers;
  std::int64_t cost = kInfeasibleAsn;  // max over nl and helpers
};

/// Forms `base` (whose g_star/o_star are ignored) using a subset of the
/// offered helpers. `g_helpers` must be holding AG*(g, loser, ...) and
/// `o_helpers` holding AG*(winner, o, ...) in the same seated context.
///
/// A helper is kept only if it lowers the NL's ASN and the NL without it
/// costs more than the helper itself. Helpers are tried cheapest first; if no
/// single helper makes the NL hold, the full helper set is tried and then
/// pruned. Returns nothing if the NL cannot be made to hold.
std::optional<NlFormation> form_nl(const Election& election, const NLStar& base,
                                   std::span<const CostedAssertion> g_helpers,
                                   std::span<const CostedAssertion> o_helpers, const AuditParams& params);

}  // namespace stvrla
