#pragma once

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qess/game_model.hpp"

namespace qess {

// Parse failure with 1-based line context; line 0 means the error is not
// tied to a specific line (e.g. missing keys).
struct ParseError : std::runtime_error {
  int line;
  ParseError(int line_, const std::string& msg)
      : std::runtime_error(msg), line(line_) {}
};

using GameFile = std::variant<SymmetricGame2, SymmetricGame3>;

inline int player_count(const GameFile& g) {
  return std::holds_alternative<SymmetricGame2>(g) ? 2 : 3;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' ||
                        s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() &&
         (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

inline double parse_number(std::string_view value, int line,
                           const std::string& key) {
  double out = 0.0;
  const char* first = value.data();
  const char* last = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc{} || ptr != last || !std::isfinite(out)) {
    throw ParseError(line, "non-numeric value for '" + key + "'");
  }
  return out;
}

}  // namespace detail

// Line-oriented `key=value` game description. '#' starts a comment, blank
// lines are skipped, whitespace around '=' is ignored, keys are case
// sensitive. A `players` key (2 or 3) selects the arity; the payoff keys are
// alpha/beta/gamma/delta for two players and alpha1/alpha2/alpha3/alpha5/
// alpha6/alpha8 for three. Every key must appear exactly once.
inline GameFile parse_game_file(std::string_view text) {
  struct Entry {
    std::string key;
    std::string value;
    int line;
  };
  std::vector<Entry> entries;
  int lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(
        pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++lineno;
    if (const std::size_t hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = detail::trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError(lineno, "expected key=value");
    }
    const std::string key{detail::trim(line.substr(0, eq))};
    const std::string value{detail::trim(line.substr(eq + 1))};
    if (key.empty()) throw ParseError(lineno, "expected key=value");
    for (const Entry& e : entries) {
      if (e.key == key) {
        throw ParseError(lineno, "duplicate key '" + key + "'");
      }
    }
    entries.push_back(Entry{key, value, lineno});
  }

  const Entry* players_entry = nullptr;
  for (const Entry& e : entries) {
    if (e.key == "players") players_entry = &e;
  }
  if (players_entry == nullptr) {
    throw ParseError(0, "missing key 'players'");
  }
  int players = 0;
  {
    const std::string& v = players_entry->value;
    if (v == "2") {
      players = 2;
    } else if (v == "3") {
      players = 3;
    } else {
      throw ParseError(players_entry->line,
                       "bad players value '" + v + "' (expected 2 or 3)");
    }
  }

  const std::vector<std::string> required =
      players == 2
          ? std::vector<std::string>{"alpha", "beta", "gamma", "delta"}
          : std::vector<std::string>{"alpha1", "alpha2", "alpha3",
                                     "alpha5", "alpha6", "alpha8"};

  std::vector<double> values(required.size(), 0.0);
  std::vector<bool> seen(required.size(), false);
  for (const Entry& e : entries) {
    if (e.key == "players") continue;
    std::size_t idx = required.size();
    for (std::size_t k = 0; k < required.size(); ++k) {
      if (required[k] == e.key) idx = k;
    }
    if (idx == required.size()) {
      throw ParseError(e.line, "unknown key '" + e.key + "' for a " +
                                   std::to_string(players) + "-player game");
    }
    values[idx] = detail::parse_number(e.value, e.line, e.key);
    seen[idx] = true;
  }
  std::string missing;
  for (std::size_t k = 0; k < required.size(); ++k) {
    if (!seen[k]) {
      if (!missing.empty()) missing += ", ";
      missing += required[k];
    }
  }
  if (!missing.empty()) {
    throw ParseError(0, "missing key(s): " + missing);
  }

  if (players == 2) {
    return make_game2(values[0], values[1], values[2], values[3]);
  }
  return make_game3(values[0], values[1], values[2], values[3], values[4],
                    values[5]);
}

inline GameFile load_game_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open game file '" + path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_game_file(buf.str());
}

}  // namespace qess
