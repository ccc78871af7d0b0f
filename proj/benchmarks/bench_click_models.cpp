#include <benchmark/benchmark.h>

#include <random>

#include "usim/click/models.hpp"

namespace {

using usim::click::ClickLog;
using usim::click::Impression;

ClickLog synthetic_log(int n_impressions, int n_ranks, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  ClickLog log;
  for (int i = 0; i < n_impressions; ++i) {
    Impression imp;
    imp.session_id = "s" + std::to_string(i);
    imp.query_key = "q" + std::to_string(rng() % 20);
    for (int r = 0; r < n_ranks; ++r) {
      imp.doc_keys.push_back("d" + std::to_string(rng() % 50));
      imp.clicks.push_back(static_cast<std::uint8_t>(unit(rng) < 0.25 / (r + 1) ? 1 : 0));
    }
    log.impressions.push_back(std::move(imp));
  }
  return log;
}

void BM_FitPbm(benchmark::State& state) {
  const ClickLog log = synthetic_log(static_cast<int>(state.range(0)), 10, 1);
  usim::click::TrainConfig config;
  config.max_iters = 10;
  config.tol = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(usim::click::fit_pbm(log, config));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * 10);
}
BENCHMARK(BM_FitPbm)->Arg(1000)->Arg(10000);

void BM_FitUbm(benchmark::State& state) {
  const ClickLog log = synthetic_log(static_cast<int>(state.range(0)), 10, 2);
  usim::click::TrainConfig config;
  config.max_iters = 10;
  config.tol = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(usim::click::fit_ubm(log, config));
  }
}
BENCHMARK(BM_FitUbm)->Arg(1000)->Arg(10000);

void BM_FitDbn(benchmark::State& state) {
  const ClickLog log = synthetic_log(static_cast<int>(state.range(0)), 10, 3);
  usim::click::TrainConfig config;
  config.max_iters = 10;
  config.tol = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(usim::click::fit_dbn(log, 1.0, config));
  }
}
BENCHMARK(BM_FitDbn)->Arg(1000)->Arg(10000);

void BM_FitDcm(benchmark::State& state) {
  const ClickLog log = synthetic_log(static_cast<int>(state.range(0)), 10, 4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(usim::click::fit_dcm(log));
  }
}
BENCHMARK(BM_FitDcm)->Arg(10000);

void BM_PredictPbm(benchmark::State& state) {
  const ClickLog log = synthetic_log(2000, 10, 5);
  usim::click::TrainConfig config;
  config.max_iters = 10;
  const auto [params, report] = usim::click::fit_pbm(log, config);
  for (auto _ : state) {
    for (const Impression& imp : log.impressions) {
      benchmark::DoNotOptimize(
          usim::click::predict_click_probs(params, imp.query_key, imp.doc_keys));
    }
  }
  state.SetItemsProcessed(state.iterations() * 2000);
}
BENCHMARK(BM_PredictPbm);

}  // namespace

BENCHMARK_MAIN();
