#include "usim/agent/sanitize.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <sstream>

#include "usim/text/tokenize.hpp"

namespace usim::agent {

namespace {

std::string trim(const std::string& s) {
  std::size_t begin = 0;
  std::size_t end = s.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(s[begin])) != 0) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1])) != 0) --end;
  return s.substr(begin, end - begin);
}

bool strip_prefix_icase(std::string& s, std::string_view prefix) {
  if (s.size() < prefix.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(s[i])) !=
        std::tolower(static_cast<unsigned char>(prefix[i]))) {
      return false;
    }
  }
  s.erase(0, prefix.size());
  return true;
}

// Matched surrounding quote pairs, ASCII and fullwidth.
constexpr std::array<std::pair<std::string_view, std::string_view>, 6> kQuotePairs = {{
    {"\"", "\""},
    {"'", "'"},
    {"“", "”"},  // curly double
    {"‘", "’"},  // curly single
    {"「", "」"},  // corner brackets
    {"『", "』"},  // white corner brackets
}};

void strip_surrounding_quotes(std::string& s) {
  bool stripped = true;
  while (stripped) {
    stripped = false;
    for (const auto& [open, close] : kQuotePairs) {
      if (s.size() >= open.size() + close.size() && s.rfind(open, 0) == 0 &&
          s.compare(s.size() - close.size(), close.size(), close) == 0) {
        s = trim(s.substr(open.size(), s.size() - open.size() - close.size()));
        stripped = true;
      }
    }
  }
}

}  // namespace

std::optional<std::string> sanitize_query(const std::string& raw, std::size_t max_chars) {
  std::istringstream lines(raw);
  std::string line;
  while (std::getline(lines, line)) {
    line = trim(line);
    if (line.empty()) continue;
    if (line.rfind("```", 0) == 0) continue;  // code fence marker
    while (!line.empty() && line.front() == '`') line.erase(0, 1);
    while (!line.empty() && line.back() == '`') line.pop_back();
    strip_prefix_icase(line, "query:");
    line = trim(line);
    strip_surrounding_quotes(line);
    if (line.empty()) continue;
    if (line.size() > max_chars) return std::nullopt;
    return line;
  }
  return std::nullopt;
}

std::optional<std::vector<int>> parse_click_ranks(const std::string& raw, int n_ranks,
                                                  int max_clicks) {
  const std::string folded = text::trim_casefold(raw);
  if (folded.find("none") != std::string::npos ||
      folded.find("no click") != std::string::npos ||
      folded.find("[]") != std::string::npos) {
    return std::vector<int>{};
  }

  std::vector<int> found;
  std::size_t i = 0;
  while (i < raw.size()) {
    if (std::isdigit(static_cast<unsigned char>(raw[i])) != 0) {
      int value = 0;
      while (i < raw.size() && std::isdigit(static_cast<unsigned char>(raw[i])) != 0) {
        value = value * 10 + (raw[i] - '0');
        ++i;
      }
      found.push_back(value);
    } else {
      ++i;
    }
  }
  if (found.empty()) return std::nullopt;

  std::sort(found.begin(), found.end());
  found.erase(std::unique(found.begin(), found.end()), found.end());
  std::vector<int> ranks;
  for (const int r : found) {
    if (r >= 1 && r <= n_ranks) ranks.push_back(r);
  }
  if (static_cast<int>(ranks.size()) > max_clicks) {
    ranks.resize(static_cast<std::size_t>(max_clicks));
  }
  return ranks;
}

std::optional<bool> parse_stop_decision(const std::string& raw) {
  const std::string folded = text::trim_casefold(raw);
  const bool says_stop =
      folded.find("stop") != std::string::npos || folded.find("停止") != std::string::npos;
  const bool says_continue =
      folded.find("continue") != std::string::npos || folded.find("继续") != std::string::npos;
  if (says_stop == says_continue) return std::nullopt;
  return says_stop;
}

std::string strip_reasoning_prefix(const std::string& raw) {
  std::string out = trim(raw);
  strip_prefix_icase(out, "reasoning:");
  return trim(out);
}

}  // namespace usim::agent
