#include "stvrla/election_io.hpp"

#include <cctype>
#include <fstream>
#include <optional>
#include <sstream>

#include <json.hpp>

#include "stvrla/errors.hpp"

namespace stvrla {

namespace {

using nlohmann::json;

Election parse_json(std::string_view bytes) {
  json doc;
  try {
    doc = json::parse(bytes);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("election must be a JSON object");
  if (!doc.contains("seats")) throw ParseError("missing required field 'seats'");
  if (!doc.contains("candidates") || !doc["candidates"].is_array()) {
    throw ParseError("missing required array 'candidates'");
  }
  if (!doc.contains("ballots") || !doc["ballots"].is_array()) {
    throw ParseError("missing required array 'ballots'");
  }

  try {
    const auto seats = doc["seats"].get<int>();
    if (seats < 1) throw ParseError("'seats' must be at least 1");

    std::vector<std::string> names = doc["candidates"].get<std::vector<std::string>>();
    Election lookup;
    lookup.candidates = names;

    std::vector<BallotGroup> groups;
    const auto& ballots = doc["ballots"];
    groups.reserve(ballots.size());
    for (std::size_t i = 0; i < ballots.size(); ++i) {
      const auto& b = ballots[i];
      if (!b.is_object() || !b.contains("ranking") || !b.contains("count")) {
        throw ParseError("ballot " + std::to_string(i) + " needs 'ranking' and 'count'");
      }
      BallotGroup g;
      g.count = b["count"].get<std::int64_t>();
      for (const auto& n : b["ranking"]) {
        const auto name = n.get<std::string>();
        auto id = lookup.find(name);
        if (!id) throw ParseError("ballot " + std::to_string(i) + " ranks unknown candidate '" + name + "'");
        g.ranking.push_back(*id);
      }
      groups.push_back(std::move(g));
    }

    std::optional<std::int64_t> quota;
    if (doc.contains("quota") && !doc["quota"].is_null()) quota = doc["quota"].get<std::int64_t>();
    return make_election(doc.value("name", std::string{}), std::move(names), std::move(groups), seats,
                         quota);
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed election: ") + e.what());
  }
}

// Tokenizer for BLT: whitespace-separated tokens, quoted strings kept whole,
// '#' comments skipped.
class BltReader {
 public:
  explicit BltReader(std::string_view text) : text_(text) {}

  std::optional<std::string> next() {
    skip();
    if (pos_ >= text_.size()) return std::nullopt;
    if (text_[pos_] == '"') {
      const auto end = text_.find('"', pos_ + 1);
      if (end == std::string_view::npos) throw ParseError("unterminated quoted string in BLT");
      std::string s(text_.substr(pos_ + 1, end - pos_ - 1));
      pos_ = end + 1;
      return s;
    }
    const auto start = pos_;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

 private:
  void skip() {
    while (pos_ < text_.size()) {
      if (std::isspace(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
      } else if (text_[pos_] == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

std::int64_t to_int(const std::string& tok, const char* what) {
  try {
    std::size_t used = 0;
    const auto v = std::stoll(tok, &used);
    if (used != tok.size()) throw ParseError("");
    return v;
  } catch (const std::exception&) {
    throw ParseError(std::string("BLT: expected integer ") + what + ", got '" + tok + "'");
  }
}

Election parse_blt(std::string_view bytes) {
  BltReader in(bytes);
  auto tok = in.next();
  if (!tok) throw ParseError("BLT: empty input");
  const auto n_candidates = to_int(*tok, "candidate count");
  tok = in.next();
  if (!tok) throw ParseError("BLT: missing seat count");
  const auto seats = to_int(*tok, "seat count");
  if (n_candidates < 1) throw ParseError("BLT: candidate count must be positive");

  std::vector<std::vector<std::int64_t>> raw_rankings;
  std::vector<std::int64_t> weights;
  while (true) {
    tok = in.next();
    if (!tok) throw ParseError("BLT: ballot section not terminated by 0");
    if (tok->front() == '-') continue;  // withdrawn-candidate line; candidates stay listed
    if (tok->front() == '(') {          // optional ballot id
      tok = in.next();
      if (!tok) throw ParseError("BLT: ballot id without weight");
    }
    const auto weight = to_int(*tok, "ballot weight");
    if (weight == 0) break;
    std::vector<std::int64_t> prefs;
    while (true) {
      auto p = in.next();
      if (!p) throw ParseError("BLT: ballot line not terminated by 0");
      if (p->find('=') != std::string::npos) throw ParseError("BLT: equal rankings are not supported");
      const auto v = to_int(*p, "preference");
      if (v == 0) break;
      if (v < 1 || v > n_candidates) throw ParseError("BLT: preference " + *p + " out of range");
      prefs.push_back(v - 1);
    }
    raw_rankings.push_back(std::move(prefs));
    weights.push_back(weight);
  }

  std::vector<std::string> names;
  for (std::int64_t i = 0; i < n_candidates; ++i) {
    auto n = in.next();
    if (!n) throw ParseError("BLT: missing candidate name " + std::to_string(i + 1));
    names.push_back(*n);
  }
  auto title = in.next();

  std::vector<BallotGroup> groups;
  groups.reserve(raw_rankings.size());
  for (std::size_t i = 0; i < raw_rankings.size(); ++i) {
    BallotGroup g;
    g.count = weights[i];
    for (auto v : raw_rankings[i]) g.ranking.push_back(CandidateId{static_cast<std::uint32_t>(v)});
    groups.push_back(std::move(g));
  }
  return make_election(title.value_or(""), std::move(names), std::move(groups), static_cast<int>(seats));
}

}  // namespace

Election parse_election(std::string_view bytes, BallotFormat format) {
  switch (format) {
    case BallotFormat::CanonicalJson:
      return parse_json(bytes);
    case BallotFormat::Blt:
      return parse_blt(bytes);
  }
  throw ParseError("unknown ballot format");
}

std::string serialize_election(const Election& election) {
  json doc;
  doc["name"] = election.name;
  doc["seats"] = election.seats;
  if (election.quota_overridden) doc["quota"] = election.quota;
  doc["candidates"] = election.candidates;
  json ballots = json::array();
  for (const auto& g : election.ballots) {
    json ranking = json::array();
    for (auto c : g.ranking) ranking.push_back(election.name_of(c));
    ballots.push_back({{"ranking", std::move(ranking)}, {"count", g.count}});
  }
  doc["ballots"] = std::move(ballots);
  return doc.dump(2);
}

BallotFormat detect_format(const std::filesystem::path& path, std::string_view bytes) {
  auto ext = path.extension().string();
  for (auto& ch : ext) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  if (ext == ".blt") return BallotFormat::Blt;
  if (ext == ".json") return BallotFormat::CanonicalJson;
  for (char ch : bytes) {
    if (std::isspace(static_cast<unsigned char>(ch))) continue;
    return ch == '{' ? BallotFormat::CanonicalJson : BallotFormat::Blt;
  }
  return BallotFormat::CanonicalJson;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Election load_election(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  return parse_election(bytes, detect_format(path, bytes));
}

}  // namespace stvrla
