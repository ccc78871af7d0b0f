#include "usim/model/adapters.hpp"

#include <map>
#include <set>
#include <vector>

#include "usim/common/error.hpp"
#include "usim/common/jsonl.hpp"
#include "usim/model/session_log.hpp"

namespace usim {

namespace {

using nlohmann::json;

const json& require_field(const json& record, const char* key, std::size_t line) {
  if (!record.contains(key)) {
    throw ParseError(std::string("adapter field missing: ") + key, line);
  }
  return record[key];
}

json leftover_fields(const json& record, const std::set<std::string>& mapped) {
  json extra = json::object();
  for (const auto& [key, value] : record.items()) {
    if (mapped.find(key) == mapped.end()) extra[key] = value;
  }
  return extra;
}

// KDD19-like: one JSON line per query round, grouped into sessions by
// (student_id, task_id) in row order.
//   {"student_id", "task_id", "task_description"?, "query", "query_thought"?,
//    "stop_thought"?, "results": [{"position","title","abstract","link","page_content"?}],
//    "click_annotations": [{"position","usefulness"?,"dwell_time"?,"thought"?}]}
Dataset import_kdd19_like(std::istream& payload, const std::string& name) {
  Dataset dataset;
  dataset.name = name;
  std::map<std::string, std::size_t> session_index;

  for_each_jsonl(payload, [&](const json& record, std::size_t line) {
    const std::string student = require_field(record, "student_id", line).get<std::string>();
    const std::string task_id = require_field(record, "task_id", line).get<std::string>();

    if (dataset.tasks.find(task_id) == dataset.tasks.end()) {
      SearchTask task;
      task.task_id = task_id;
      task.description = record.value("task_description", task_id);
      if (task.description.empty()) task.description = task_id;
      task.language = record.value("language", std::string{"zh"});
      dataset.tasks.emplace(task_id, std::move(task));
    }

    const std::string key = student + "\t" + task_id;
    auto it = session_index.find(key);
    if (it == session_index.end()) {
      Session session;
      session.session_id = student + "-" + task_id;
      session.user_id = student;
      session.task_id = task_id;
      it = session_index.emplace(key, dataset.sessions.size()).first;
      dataset.sessions.push_back(std::move(session));
    }
    Session& session = dataset.sessions[it->second];

    QueryRound round;
    round.query = require_field(record, "query", line).get<std::string>();
    if (record.contains("query_thought") && record["query_thought"].is_string()) {
      round.query_thought = record["query_thought"].get<std::string>();
    }
    if (record.contains("stop_thought") && record["stop_thought"].is_string()) {
      round.stop_thought = record["stop_thought"].get<std::string>();
    }
    if (record.contains("results")) {
      for (const json& jres : record["results"]) {
        SerpItem item;
        item.rank = jres.value("position", static_cast<int>(round.serp.size()) + 1);
        item.title = jres.value("title", std::string{});
        item.snippet = jres.value("abstract", std::string{});
        item.url = jres.value("link", std::string{});
        if (jres.contains("page_content") && jres["page_content"].is_string()) {
          item.content = jres["page_content"].get<std::string>();
        }
        round.serp.push_back(std::move(item));
      }
    }
    if (record.contains("click_annotations")) {
      for (const json& jclick : record["click_annotations"]) {
        ClickRecord click;
        click.rank = jclick.value("position", 0);
        if (jclick.contains("usefulness") && jclick["usefulness"].is_number_integer()) {
          click.satisfaction = jclick["usefulness"].get<int>();
        }
        if (jclick.contains("dwell_time") && jclick["dwell_time"].is_number()) {
          click.dwell_seconds = jclick["dwell_time"].get<double>();
        }
        if (jclick.contains("thought") && jclick["thought"].is_string()) {
          click.thought = jclick["thought"].get<std::string>();
        }
        round.clicks.push_back(std::move(click));
      }
    }
    round.extensions = leftover_fields(
        record, {"student_id", "task_id", "task_description", "language", "query",
                 "query_thought", "stop_thought", "results", "click_annotations"});
    session.rounds.push_back(std::move(round));
  });
  return dataset;
}

// TianGong-like: one JSON line per session; every session is its own task.
//   {"id", "user"?, "need"?, "queries": [{"text", "results": [{"title","summary","url"}],
//    "clicks": [{"pos","score"?}]}]}
Dataset import_tiangong_like(std::istream& payload, const std::string& name) {
  Dataset dataset;
  dataset.name = name;

  for_each_jsonl(payload, [&](const json& record, std::size_t line) {
    const std::string id = require_field(record, "id", line).get<std::string>();

    Session session;
    session.session_id = id;
    session.user_id = record.value("user", std::string{});
    session.task_id = "task-" + id;
    session.extensions = leftover_fields(record, {"id", "user", "need", "queries"});

    std::string description = record.value("need", std::string{});

    for (const json& jquery : require_field(record, "queries", line)) {
      QueryRound round;
      round.query = require_field(jquery, "text", line).get<std::string>();
      if (description.empty()) description = round.query;
      if (jquery.contains("results")) {
        int next_rank = 1;
        for (const json& jres : jquery["results"]) {
          SerpItem item;
          item.rank = jres.value("pos", next_rank);
          item.title = jres.value("title", std::string{});
          item.snippet = jres.value("summary", std::string{});
          item.url = jres.value("url", std::string{});
          round.serp.push_back(std::move(item));
          ++next_rank;
        }
      }
      if (jquery.contains("clicks")) {
        for (const json& jclick : jquery["clicks"]) {
          ClickRecord click;
          click.rank = jclick.value("pos", 0);
          if (jclick.contains("score") && jclick["score"].is_number_integer()) {
            click.satisfaction = jclick["score"].get<int>();
          }
          round.clicks.push_back(std::move(click));
        }
      }
      round.extensions = leftover_fields(jquery, {"text", "results", "clicks"});
      session.rounds.push_back(std::move(round));
    }

    SearchTask task;
    task.task_id = session.task_id;
    task.description = description.empty() ? session.task_id : description;
    task.language = record.value("language", std::string{"zh"});
    dataset.tasks.emplace(task.task_id, std::move(task));
    dataset.sessions.push_back(std::move(session));
  });
  return dataset;
}

}  // namespace

DatasetFormat dataset_format_from_string(const std::string& name) {
  if (name == "canonical") return DatasetFormat::kCanonical;
  if (name == "kdd19" || name == "kdd19-like") return DatasetFormat::kKdd19Like;
  if (name == "tiangong" || name == "tiangong-like") return DatasetFormat::kTiangongLike;
  throw UsageError("unknown dataset format: " + name);
}

Dataset import_dataset(DatasetFormat format, std::istream& payload, const std::string& name) {
  Dataset dataset;
  switch (format) {
    case DatasetFormat::kCanonical:
      return parse_session_log(payload, nullptr, name);
    case DatasetFormat::kKdd19Like:
      dataset = import_kdd19_like(payload, name);
      break;
    case DatasetFormat::kTiangongLike:
      dataset = import_tiangong_like(payload, name);
      break;
  }
  const auto violations = validate_dataset(dataset);
  if (!violations.empty()) {
    throw ValidationError(violations.front().path, violations.front().message);
  }
  return dataset;
}

}  // namespace usim
