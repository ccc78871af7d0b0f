#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace usim {

enum class Stage { kQuery, kClick, kStop };

std::string to_string(Stage stage);
Stage stage_from_string(const std::string& name);

// Inclusive satisfaction-rating bounds. Clicks rated >= threshold count as
// satisfying.
struct RatingScale {
  int min = 1;
  int max = 5;
  int threshold = 4;
};

struct SearchTask {
  std::string task_id;
  std::string description;  // scenario shown to the simulated user
  std::string language;     // "zh", "en", ...
  nlohmann::json extensions = nlohmann::json::object();

  friend bool operator==(const SearchTask&, const SearchTask&) = default;
};

struct SerpItem {
  int rank = 0;  // 1-based, consecutive within a SERP
  std::string title;
  std::string snippet;
  std::string url;
  std::optional<std::string> content;  // landing-page body

  friend bool operator==(const SerpItem&, const SerpItem&) = default;
};

struct ClickRecord {
  int rank = 0;
  std::optional<std::string> thought;
  std::optional<int> satisfaction;
  std::optional<double> dwell_seconds;

  friend bool operator==(const ClickRecord&, const ClickRecord&) = default;
};

struct QueryRound {
  std::string query;
  std::optional<std::string> query_thought;
  std::vector<SerpItem> serp;
  std::vector<ClickRecord> clicks;
  std::optional<std::string> stop_thought;
  nlohmann::json extensions = nlohmann::json::object();

  friend bool operator==(const QueryRound&, const QueryRound&) = default;
};

// One task attempt. The final round implicitly carries the stop decision.
struct Session {
  std::string session_id;
  std::string user_id;
  std::string task_id;
  std::vector<QueryRound> rounds;
  nlohmann::json extensions = nlohmann::json::object();

  friend bool operator==(const Session&, const Session&) = default;
};

struct Dataset {
  std::string name;
  std::map<std::string, SearchTask> tasks;
  std::vector<Session> sessions;

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

struct StageCounts {
  std::int64_t query = 0;
  std::int64_t click = 0;
  std::int64_t stop = 0;

  friend bool operator==(const StageCounts&, const StageCounts&) = default;
};

struct DatasetStats {
  std::int64_t n_tasks = 0;
  std::int64_t n_sessions = 0;
  std::int64_t n_queries = 0;
  std::int64_t n_clicks = 0;
  StageCounts n_thoughts;
  double avg_queries_per_session = 0.0;
  double avg_satisfying_clicks_per_session = 0.0;
  double avg_frustrating_run_length = 0.0;
};

}  // namespace usim
