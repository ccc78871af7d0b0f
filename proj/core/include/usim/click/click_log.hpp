#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "usim/model/types.hpp"

namespace usim::click {

// One SERP shown for one query, with the observed click vector.
struct Impression {
  std::string session_id;
  std::string query_key;
  std::vector<std::string> doc_keys;  // in rank order, 1..n implicit
  std::vector<std::uint8_t> clicks;   // aligned with doc_keys
};

struct ClickLog {
  std::vector<Impression> impressions;

  std::size_t max_rank() const;
  std::int64_t total_clicks() const;
};

struct ExtractOptions {
  // Trim and ASCII-casefold query text before keying. Off by default: keys
  // match on exact query strings.
  bool normalize_queries = false;
};

// One impression per QueryRound; doc_key is the url, with "#rank=<r>"
// appended for repeated urls within a single SERP so keys stay distinct.
// Rounds with an empty SERP are skipped.
ClickLog extract_click_log(const Dataset& dataset, const ExtractOptions& options = {});

std::string normalize_query_key(const std::string& query);

// Doc keys for one SERP, applying the duplicate-url disambiguation rule.
std::vector<std::string> make_doc_keys(const std::vector<SerpItem>& serp);

}  // namespace usim::click
