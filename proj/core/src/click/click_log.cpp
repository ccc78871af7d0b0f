#include "usim/click/click_log.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_map>
#include <unordered_set>

namespace usim::click {

std::size_t ClickLog::max_rank() const {
  std::size_t max = 0;
  for (const Impression& imp : impressions) max = std::max(max, imp.doc_keys.size());
  return max;
}

std::int64_t ClickLog::total_clicks() const {
  std::int64_t total = 0;
  for (const Impression& imp : impressions) {
    for (const std::uint8_t c : imp.clicks) total += c;
  }
  return total;
}

std::string normalize_query_key(const std::string& query) {
  std::size_t begin = 0;
  std::size_t end = query.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(query[begin]))) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(query[end - 1]))) --end;
  std::string out = query.substr(begin, end - begin);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return out;
}

std::vector<std::string> make_doc_keys(const std::vector<SerpItem>& serp) {
  std::vector<std::string> keys;
  keys.reserve(serp.size());
  std::unordered_set<std::string> seen;
  for (const SerpItem& item : serp) {
    std::string key = item.url;
    if (!seen.insert(key).second) {
      key += "#rank=" + std::to_string(item.rank);
    }
    keys.push_back(std::move(key));
  }
  return keys;
}

ClickLog extract_click_log(const Dataset& dataset, const ExtractOptions& options) {
  ClickLog log;
  for (const Session& session : dataset.sessions) {
    for (const QueryRound& round : session.rounds) {
      if (round.serp.empty()) continue;
      Impression imp;
      imp.session_id = session.session_id;
      imp.query_key =
          options.normalize_queries ? normalize_query_key(round.query) : round.query;
      imp.doc_keys = make_doc_keys(round.serp);
      imp.clicks.assign(round.serp.size(), 0);
      for (const ClickRecord& click : round.clicks) {
        const int idx = click.rank - 1;
        if (idx >= 0 && idx < static_cast<int>(imp.clicks.size())) {
          imp.clicks[static_cast<std::size_t>(idx)] = 1;
        }
      }
      log.impressions.push_back(std::move(imp));
    }
  }
  return log;
}

}  // namespace usim::click
