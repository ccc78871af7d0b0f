#pragma once

#include <unistd.h>

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "usim/model/session_log.hpp"
#include "usim/model/types.hpp"
#include "usim/prompt/template.hpp"

namespace usim::testing {

// Unique scratch directory, removed on destruction.
class TmpDir {
 public:
  explicit TmpDir(const std::string& tag) {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("usim-" + tag + "-" + std::to_string(::getpid()) + "-" +
             std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TmpDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TmpDir(const TmpDir&) = delete;
  TmpDir& operator=(const TmpDir&) = delete;

  std::filesystem::path path() const { return path_; }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

  std::string write(const std::string& name, const std::string& content) const {
    const std::string p = file(name);
    std::ofstream out(p, std::ios::binary);
    out << content;
    return p;
  }

  std::string read(const std::string& name) const {
    std::ifstream in(file(name), std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
  }

 private:
  std::filesystem::path path_;
};

inline TemplateSet test_templates() { return TemplateSet::load_dir(USIM_TEMPLATES_DIR); }

inline std::vector<SerpItem> make_serp(int n, const std::string& prefix = "r") {
  std::vector<SerpItem> serp;
  for (int i = 1; i <= n; ++i) {
    SerpItem item;
    item.rank = i;
    item.title = prefix + "-title-" + std::to_string(i);
    item.snippet = prefix + "-snippet-" + std::to_string(i);
    item.url = "http://example.com/" + prefix + "/" + std::to_string(i);
    serp.push_back(std::move(item));
  }
  return serp;
}

// Fixture mirroring the user-study dataset shape: 10 tasks, 296 sessions,
// 732 queries (690 with thoughts), 1425 clicks (1063 with thoughts), one
// stop thought per session.
inline Dataset user_study_shaped_dataset() {
  Dataset dataset;
  dataset.name = "user-study-shaped";
  for (int t = 0; t < 10; ++t) {
    SearchTask task;
    task.task_id = "t" + std::to_string(t);
    task.description = "task description " + std::to_string(t);
    task.language = "zh";
    dataset.tasks.emplace(task.task_id, std::move(task));
  }

  for (int s = 0; s < 296; ++s) {
    Session session;
    session.session_id = "s" + std::to_string(s);
    session.user_id = "u" + std::to_string(s % 31);
    session.task_id = "t" + std::to_string(s % 10);
    const int n_rounds = (s < 140) ? 3 : 2;  // 140*3 + 156*2 = 732
    for (int r = 0; r < n_rounds; ++r) {
      QueryRound round;
      round.query = "query " + std::to_string(s) + " " + std::to_string(r);
      round.serp = make_serp(10, session.session_id + "-" + std::to_string(r));
      session.rounds.push_back(std::move(round));
    }
    dataset.sessions.push_back(std::move(session));
  }

  // Assign thoughts and clicks deterministically over the flattened rounds.
  int round_index = 0;
  int clicks_assigned = 0;
  int click_thoughts_assigned = 0;
  int query_thoughts_assigned = 0;
  for (Session& session : dataset.sessions) {
    for (std::size_t r = 0; r < session.rounds.size(); ++r) {
      QueryRound& round = session.rounds[r];
      if (query_thoughts_assigned < 690 && round_index >= 42) {
        round.query_thought = "thinking about " + round.query;
        ++query_thoughts_assigned;
      }
      const int want = (round_index < 693) ? 2 : 1;  // 693*2 + 39*1 = 1425
      for (int c = 0; c < want; ++c) {
        ClickRecord click;
        click.rank = c + 1;
        click.satisfaction = 1 + (clicks_assigned % 5);
        if (click_thoughts_assigned < 1063) {
          click.thought = "click thought " + std::to_string(clicks_assigned);
          ++click_thoughts_assigned;
        }
        round.clicks.push_back(std::move(click));
        ++clicks_assigned;
      }
      ++round_index;
    }
    session.rounds.back().stop_thought = "enough information collected";
  }
  return dataset;
}

// Two tasks, three short sessions; convenient for agent and eval tests.
inline Dataset small_dataset() {
  Dataset dataset;
  dataset.name = "small";
  for (int t = 0; t < 2; ++t) {
    SearchTask task;
    task.task_id = "task" + std::to_string(t);
    task.description = "find information about topic " + std::to_string(t);
    task.language = "en";
    dataset.tasks.emplace(task.task_id, std::move(task));
  }
  const auto make = [&](const std::string& id, const std::string& task_id, int n_rounds) {
    Session session;
    session.session_id = id;
    session.user_id = "user-" + id;
    session.task_id = task_id;
    for (int r = 0; r < n_rounds; ++r) {
      QueryRound round;
      round.query = id + " query " + std::to_string(r);
      round.query_thought = "why " + std::to_string(r);
      round.serp = make_serp(5, id + std::to_string(r));
      ClickRecord click;
      click.rank = 1 + (r % 2);
      click.satisfaction = (r % 2 == 0) ? 5 : 2;
      click.thought = "looks relevant";
      round.clicks.push_back(click);
      if (r + 1 == n_rounds) round.stop_thought = "done";
      session.rounds.push_back(std::move(round));
    }
    return session;
  };
  dataset.sessions.push_back(make("a1", "task0", 2));
  dataset.sessions.push_back(make("a2", "task0", 3));
  dataset.sessions.push_back(make("b1", "task1", 1));
  return dataset;
}

inline std::string dataset_to_log(const Dataset& dataset) {
  return serialize_session_log(dataset);
}

inline std::string tasks_to_text(const Dataset& dataset) {
  std::ostringstream out;
  write_task_file(out, dataset.tasks);
  return out.str();
}

}  // namespace usim::testing
