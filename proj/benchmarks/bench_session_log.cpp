#include <benchmark/benchmark.h>

#include <sstream>

#include "usim/model/session_log.hpp"
#include "usim/model/sft_export.hpp"
#include "usim/model/stats.hpp"

namespace {

usim::Dataset synthetic_dataset(int n_sessions) {
  usim::Dataset dataset;
  dataset.name = "bench";
  usim::SearchTask task;
  task.task_id = "t";
  task.description = "benchmark task";
  task.language = "zh";
  dataset.tasks.emplace("t", task);
  for (int s = 0; s < n_sessions; ++s) {
    usim::Session session;
    session.session_id = "s" + std::to_string(s);
    session.user_id = "u" + std::to_string(s % 31);
    session.task_id = "t";
    for (int r = 0; r < 3; ++r) {
      usim::QueryRound round;
      round.query = "查询 " + std::to_string(s) + " " + std::to_string(r);
      round.query_thought = "先搜索基础概念";
      for (int i = 1; i <= 10; ++i) {
        usim::SerpItem item;
        item.rank = i;
        item.title = "标题 " + std::to_string(i);
        item.snippet = "摘要内容片段 " + std::to_string(i);
        item.url = "http://bench/" + std::to_string(s) + "/" + std::to_string(r) + "/" +
                   std::to_string(i);
        round.serp.push_back(std::move(item));
      }
      usim::ClickRecord click;
      click.rank = 1 + (r % 3);
      click.satisfaction = 1 + (s % 5);
      click.thought = "这个结果看起来相关";
      round.clicks.push_back(std::move(click));
      if (r == 2) round.stop_thought = "信息足够了";
      session.rounds.push_back(std::move(round));
    }
    dataset.sessions.push_back(std::move(session));
  }
  return dataset;
}

void BM_SerializeSessionLog(benchmark::State& state) {
  const usim::Dataset dataset = synthetic_dataset(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(usim::serialize_session_log(dataset));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SerializeSessionLog)->Arg(100)->Arg(1000);

void BM_ParseSessionLog(benchmark::State& state) {
  const std::string log = usim::serialize_session_log(
      synthetic_dataset(static_cast<int>(state.range(0))));
  for (auto _ : state) {
    std::istringstream in(log);
    benchmark::DoNotOptimize(usim::parse_session_log(in));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ParseSessionLog)->Arg(100)->Arg(1000);

void BM_ComputeStats(benchmark::State& state) {
  const usim::Dataset dataset = synthetic_dataset(1000);
  for (auto _ : state) {
    benchmark::DoNotOptimize(usim::compute_stats(dataset));
  }
}
BENCHMARK(BM_ComputeStats);

void BM_ExportSft(benchmark::State& state) {
  const usim::Dataset dataset = synthetic_dataset(500);
  const usim::PromptTemplate tmpl = usim::PromptTemplate::parse(
      usim::Stage::kQuery, "thought",
      "Goal: {task_description}\nSearch History: {search_history}\nTask: respond\n");
  for (auto _ : state) {
    benchmark::DoNotOptimize(usim::export_sft_records(dataset, usim::Stage::kQuery, tmpl));
  }
}
BENCHMARK(BM_ExportSft);

}  // namespace

BENCHMARK_MAIN();
