#include <benchmark/benchmark.h>

#include <random>

#include "usim/eval/metrics.hpp"
#include "usim/text/tokenize.hpp"

namespace {

std::vector<std::string> sample_tokens(std::mt19937_64& rng, int n) {
  static const std::vector<std::string> vocab{"安", "装", "如", "何", "gcc", "linux",
                                              "make", "教", "程", "命", "令"};
  std::vector<std::string> tokens;
  for (int i = 0; i < n; ++i) tokens.push_back(vocab[rng() % vocab.size()]);
  return tokens;
}

usim::eval::EmbeddingSet sample_embeddings(std::mt19937_64& rng, int n, int dim) {
  std::normal_distribution<double> normal(0.0, 1.0);
  usim::eval::EmbeddingSet set;
  for (int i = 0; i < n; ++i) {
    std::vector<double> v(static_cast<std::size_t>(dim));
    for (double& x : v) x = normal(rng);
    set.push_back(std::move(v));
  }
  return set;
}

void BM_Tokenize(benchmark::State& state) {
  const std::string text = "在Linux系统下如何安装gcc编译器 how to install gcc on linux 4.8";
  for (auto _ : state) {
    benchmark::DoNotOptimize(usim::text::tokenize(text));
  }
}
BENCHMARK(BM_Tokenize);

void BM_Bleu(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const auto cand = sample_tokens(rng, 8);
  const auto ref = sample_tokens(rng, 8);
  for (auto _ : state) {
    benchmark::DoNotOptimize(usim::eval::bleu(cand, ref));
  }
}
BENCHMARK(BM_Bleu);

void BM_BertStyle(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const auto cand = sample_embeddings(rng, 12, 64);
  const auto ref = sample_embeddings(rng, 10, 64);
  for (auto _ : state) {
    benchmark::DoNotOptimize(usim::eval::bert_style_score(cand, ref));
  }
}
BENCHMARK(BM_BertStyle);

void BM_Fid(benchmark::State& state) {
  std::mt19937_64 rng(3);
  const auto p = sample_embeddings(rng, static_cast<int>(state.range(0)), 64);
  const auto q = sample_embeddings(rng, static_cast<int>(state.range(0)), 64);
  for (auto _ : state) {
    benchmark::DoNotOptimize(usim::eval::fid(p, q));
  }
}
BENCHMARK(BM_Fid)->Arg(100)->Arg(1000);

void BM_Mauve(benchmark::State& state) {
  std::mt19937_64 rng(4);
  const auto p = sample_embeddings(rng, static_cast<int>(state.range(0)), 16);
  const auto q = sample_embeddings(rng, static_cast<int>(state.range(0)), 16);
  for (auto _ : state) {
    benchmark::DoNotOptimize(usim::eval::mauve(p, q));
  }
}
BENCHMARK(BM_Mauve)->Arg(50)->Arg(200);

}  // namespace

BENCHMARK_MAIN();
