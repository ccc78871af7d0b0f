#include "usim/model/session_log.hpp"

#include <set>
#include <sstream>
#include <unordered_set>

#include "usim/common/error.hpp"
#include "usim/common/jsonl.hpp"

namespace usim {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string idx(const std::string& base, std::size_t i) {
  return base + "[" + std::to_string(i) + "]";
}

json optional_string_json(const std::optional<std::string>& v) {
  return v ? json(*v) : json(nullptr);
}

std::optional<std::string> read_optional_string(const json& record, const char* key,
                                                const std::string& path) {
  if (!record.contains(key) || record[key].is_null()) return std::nullopt;
  if (!record[key].is_string()) throw ValidationError(path + "." + key, "expected string or null");
  return record[key].get<std::string>();
}

std::string read_required_string(const json& record, const char* key, const std::string& path) {
  if (!record.contains(key)) throw ValidationError(path + "." + key, "missing required field");
  if (!record[key].is_string()) throw ValidationError(path + "." + key, "expected string");
  return record[key].get<std::string>();
}

json extensions_or_empty(const json& record) {
  if (record.contains("extensions") && record["extensions"].is_object()) {
    return record["extensions"];
  }
  return json::object();
}

}  // namespace

std::string to_string(Stage stage) {
  switch (stage) {
    case Stage::kQuery: return "query";
    case Stage::kClick: return "click";
    case Stage::kStop: return "stop";
  }
  return "query";
}

Stage stage_from_string(const std::string& name) {
  if (name == "query") return Stage::kQuery;
  if (name == "click") return Stage::kClick;
  if (name == "stop") return Stage::kStop;
  throw Error("unknown stage: " + name);
}

std::vector<Violation> validate_session(const Session& session, const RatingScale& scale) {
  std::vector<Violation> out;
  const auto add = [&](std::string path, std::string message) {
    out.push_back({std::move(path), std::move(message)});
  };

  if (session.session_id.empty()) add("session_id", "must be non-empty");
  if (session.task_id.empty()) add("task_id", "must be non-empty");
  if (session.rounds.empty()) add("rounds", "rounds >= 1");

  for (std::size_t r = 0; r < session.rounds.size(); ++r) {
    const QueryRound& round = session.rounds[r];
    const std::string rpath = idx("rounds", r);
    if (round.query.empty()) add(rpath + ".query", "query must be non-empty");

    std::set<int> serp_ranks;
    for (std::size_t i = 0; i < round.serp.size(); ++i) {
      const SerpItem& item = round.serp[i];
      const std::string ipath = idx(rpath + ".serp", i);
      if (item.rank < 1) add(ipath + ".rank", "rank >= 1");
      if (item.rank != static_cast<int>(i) + 1) {
        add(ipath + ".rank", "ranks must be consecutive 1..n");
      }
      if (!serp_ranks.insert(item.rank).second) {
        add(ipath + ".rank", "duplicate rank in SERP");
      }
    }

    std::set<int> click_ranks;
    for (std::size_t c = 0; c < round.clicks.size(); ++c) {
      const ClickRecord& click = round.clicks[c];
      const std::string cpath = idx(rpath + ".clicks", c);
      if (click.rank < 1) add(cpath + ".rank", "rank >= 1");
      if (serp_ranks.find(click.rank) == serp_ranks.end()) {
        add(cpath + ".rank", "click rank not present in SERP");
      }
      if (!click_ranks.insert(click.rank).second) {
        add(cpath + ".rank", "duplicate click rank in round");
      }
      if (click.satisfaction &&
          (*click.satisfaction < scale.min || *click.satisfaction > scale.max)) {
        add(cpath + ".satisfaction", "satisfaction outside rating scale");
      }
      if (click.dwell_seconds && *click.dwell_seconds < 0) {
        add(cpath + ".dwell_seconds", "dwell_seconds must be non-negative");
      }
    }
  }
  return out;
}

std::vector<Violation> validate_dataset(const Dataset& dataset, const RatingScale& scale) {
  std::vector<Violation> out;
  std::unordered_set<std::string> seen_ids;
  for (std::size_t s = 0; s < dataset.sessions.size(); ++s) {
    const Session& session = dataset.sessions[s];
    const std::string spath = idx("sessions", s);
    for (Violation v : validate_session(session, scale)) {
      out.push_back({spath + "." + v.path, v.message});
    }
    if (!seen_ids.insert(session.session_id).second) {
      out.push_back({spath + ".session_id", "duplicate session_id: " + session.session_id});
    }
    if (dataset.tasks.find(session.task_id) == dataset.tasks.end()) {
      out.push_back({spath + ".task_id", "unresolved task_id: " + session.task_id});
    }
  }
  for (const auto& [task_id, task] : dataset.tasks) {
    if (task_id.empty() || task.task_id.empty()) {
      out.push_back({"tasks[" + task_id + "].task_id", "must be non-empty"});
    }
    if (task.description.empty()) {
      out.push_back({"tasks[" + task_id + "].description", "must be non-empty"});
    }
  }
  return out;
}

nlohmann::ordered_json session_to_json(const Session& session) {
  ordered_json rounds = ordered_json::array();
  for (const QueryRound& round : session.rounds) {
    ordered_json serp = ordered_json::array();
    for (const SerpItem& item : round.serp) {
      serp.push_back(ordered_json{{"rank", item.rank},
                                  {"title", item.title},
                                  {"snippet", item.snippet},
                                  {"url", item.url},
                                  {"content", optional_string_json(item.content)}});
    }
    ordered_json clicks = ordered_json::array();
    for (const ClickRecord& click : round.clicks) {
      clicks.push_back(
          ordered_json{{"rank", click.rank},
                       {"thought", optional_string_json(click.thought)},
                       {"satisfaction", click.satisfaction ? json(*click.satisfaction) : json(nullptr)},
                       {"dwell_seconds",
                        click.dwell_seconds ? json(*click.dwell_seconds) : json(nullptr)}});
    }
    ordered_json jround{{"query", round.query},
                        {"query_thought", optional_string_json(round.query_thought)},
                        {"serp", std::move(serp)},
                        {"clicks", std::move(clicks)},
                        {"stop_thought", optional_string_json(round.stop_thought)}};
    if (!round.extensions.empty()) jround["extensions"] = round.extensions;
    rounds.push_back(std::move(jround));
  }
  ordered_json out{{"session_id", session.session_id},
                   {"user_id", session.user_id},
                   {"task_id", session.task_id},
                   {"rounds", std::move(rounds)}};
  if (!session.extensions.empty()) out["extensions"] = session.extensions;
  return out;
}

Session session_from_json(const nlohmann::json& record) {
  Session session;
  session.session_id = read_required_string(record, "session_id", "session");
  session.user_id = record.contains("user_id") && record["user_id"].is_string()
                        ? record["user_id"].get<std::string>()
                        : std::string{};
  session.task_id = read_required_string(record, "task_id", "session");
  session.extensions = extensions_or_empty(record);

  if (!record.contains("rounds") || !record["rounds"].is_array()) {
    throw ValidationError("rounds", "missing rounds array");
  }
  std::size_t r = 0;
  for (const json& jround : record["rounds"]) {
    const std::string rpath = idx("rounds", r);
    QueryRound round;
    round.query = read_required_string(jround, "query", rpath);
    round.query_thought = read_optional_string(jround, "query_thought", rpath);
    round.stop_thought = read_optional_string(jround, "stop_thought", rpath);
    round.extensions = extensions_or_empty(jround);
    if (jround.contains("serp")) {
      std::size_t i = 0;
      for (const json& jitem : jround["serp"]) {
        const std::string ipath = idx(rpath + ".serp", i);
        SerpItem item;
        if (!jitem.contains("rank") || !jitem["rank"].is_number_integer()) {
          throw ValidationError(ipath + ".rank", "missing integer rank");
        }
        item.rank = jitem["rank"].get<int>();
        item.title = jitem.value("title", std::string{});
        item.snippet = jitem.value("snippet", std::string{});
        item.url = jitem.value("url", std::string{});
        item.content = read_optional_string(jitem, "content", ipath);
        round.serp.push_back(std::move(item));
        ++i;
      }
    }
    if (jround.contains("clicks")) {
      std::size_t c = 0;
      for (const json& jclick : jround["clicks"]) {
        const std::string cpath = idx(rpath + ".clicks", c);
        ClickRecord click;
        if (!jclick.contains("rank") || !jclick["rank"].is_number_integer()) {
          throw ValidationError(cpath + ".rank", "missing integer rank");
        }
        click.rank = jclick["rank"].get<int>();
        click.thought = read_optional_string(jclick, "thought", cpath);
        if (jclick.contains("satisfaction") && !jclick["satisfaction"].is_null()) {
          if (!jclick["satisfaction"].is_number_integer()) {
            throw ValidationError(cpath + ".satisfaction", "expected integer or null");
          }
          click.satisfaction = jclick["satisfaction"].get<int>();
        }
        if (jclick.contains("dwell_seconds") && !jclick["dwell_seconds"].is_null()) {
          if (!jclick["dwell_seconds"].is_number()) {
            throw ValidationError(cpath + ".dwell_seconds", "expected number or null");
          }
          click.dwell_seconds = jclick["dwell_seconds"].get<double>();
        }
        round.clicks.push_back(std::move(click));
        ++c;
      }
    }
    session.rounds.push_back(std::move(round));
    ++r;
  }
  return session;
}

nlohmann::ordered_json task_to_json(const SearchTask& task) {
  ordered_json out{{"task_id", task.task_id},
                   {"description", task.description},
                   {"language", task.language}};
  if (!task.extensions.empty()) out["extensions"] = task.extensions;
  return out;
}

SearchTask task_from_json(const nlohmann::json& record) {
  SearchTask task;
  task.task_id = read_required_string(record, "task_id", "task");
  task.description = read_required_string(record, "description", "task");
  task.language = record.value("language", std::string{"und"});
  task.extensions = extensions_or_empty(record);
  return task;
}

Dataset parse_session_log(std::istream& in, const std::map<std::string, SearchTask>* tasks,
                          const std::string& name, const RatingScale& scale) {
  Dataset dataset;
  dataset.name = name;
  if (tasks) dataset.tasks = *tasks;

  for_each_jsonl(in, [&](const json& record, std::size_t line_number) {
    Session session;
    try {
      session = session_from_json(record);
    } catch (const ValidationError& e) {
      throw ParseError(e.what(), line_number);
    }
    const auto violations = validate_session(session, scale);
    if (!violations.empty()) {
      throw ValidationError("sessions[" + std::to_string(dataset.sessions.size()) + "]." +
                                violations.front().path,
                            violations.front().message + " (line " +
                                std::to_string(line_number) + ")");
    }
    dataset.sessions.push_back(std::move(session));
  });

  // Synthesize stub tasks when a task file was not supplied, so the returned
  // Dataset always satisfies task-id resolution.
  if (!tasks) {
    for (const Session& session : dataset.sessions) {
      if (dataset.tasks.find(session.task_id) == dataset.tasks.end()) {
        dataset.tasks.emplace(session.task_id,
                              SearchTask{session.task_id, session.task_id, "und", {}});
      }
    }
  }

  const auto violations = validate_dataset(dataset, scale);
  if (!violations.empty()) {
    throw ValidationError(violations.front().path, violations.front().message);
  }
  return dataset;
}

void write_session_log(std::ostream& out, const Dataset& dataset) {
  for (const Session& session : dataset.sessions) {
    out << session_to_json(session).dump() << "\n";
  }
}

std::string serialize_session_log(const Dataset& dataset) {
  std::ostringstream out;
  write_session_log(out, dataset);
  return out.str();
}

std::map<std::string, SearchTask> parse_task_file(std::istream& in) {
  std::map<std::string, SearchTask> tasks;
  for_each_jsonl(in, [&](const json& record, std::size_t line_number) {
    SearchTask task;
    try {
      task = task_from_json(record);
    } catch (const ValidationError& e) {
      throw ParseError(e.what(), line_number);
    }
    if (task.task_id.empty() || task.description.empty()) {
      throw ParseError("task_id and description must be non-empty", line_number);
    }
    if (!tasks.emplace(task.task_id, task).second) {
      throw ParseError("duplicate task_id: " + task.task_id, line_number);
    }
  });
  return tasks;
}

void write_task_file(std::ostream& out, const std::map<std::string, SearchTask>& tasks) {
  for (const auto& [id, task] : tasks) {
    out << task_to_json(task).dump() << "\n";
  }
}

}  // namespace usim
