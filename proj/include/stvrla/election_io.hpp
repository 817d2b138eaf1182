#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "stvrla/ballot.hpp"

namespace stvrla {

enum class BallotFormat { CanonicalJson, Blt };

// Canonical JSON:
//   {"name": str, "seats": int, "quota": int (optional),
//    "candidates": [str...], "ballots": [{"ranking": [str...], "count": int}...]}
//
// BLT: "nCandidates nSeats" header, weighted ballot lines "w c1 c2 ... 0",
// a terminating "0", then one quoted name per candidate and a quoted title.
Election parse_election(std::string_view bytes, BallotFormat format);

// Canonical JSON. The quota is written only when it was overridden.
std::string serialize_election(const Election& election);

// Picks BLT for a ".blt" extension, otherwise sniffs for a leading '{'.
BallotFormat detect_format(const std::filesystem::path& path, std::string_view bytes);

std::string read_file(const std::filesystem::path& path);
Election load_election(const std::filesystem::path& path);

}  // namespace stvrla
