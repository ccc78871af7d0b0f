#pragma once

#include <cstdint>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "usim/eval/metrics.hpp"
#include "usim/llm/types.hpp"
#include "usim/model/types.hpp"

namespace usim::eval {

struct QueryPrediction {
  std::string session_id;
  int round_index = 0;
  std::string query;
};

// Either per-rank probabilities or a discrete clicked-rank set.
struct ClickPrediction {
  std::string session_id;
  int round_index = 0;
  std::vector<double> probs;        // aligned with SERP ranks when non-empty
  std::optional<std::vector<int>> ranks;  // 1-based clicked ranks
};

struct StopPrediction {
  std::string session_id;
  int round_index = 0;
  bool stop = false;
};

// Per-stage evaluation output. `overall` holds metric name -> value; absent
// keys mean the metric was not computed (e.g. mauve/fid in one_to_one_only
// mode). `per_task` holds the same keyed by task id.
struct MetricReport {
  std::string method;
  std::string stage;
  std::int64_t count = 0;
  std::map<std::string, double> overall;
  std::map<std::string, std::map<std::string, double>> per_task;
  std::vector<std::string> flags;
};

enum class QueryEvalMode { kFull, kOneToOneOnly };

using Embedder =
    std::function<llm::EmbeddingResult(std::string_view, llm::EmbeddingGranularity)>;

struct QueryEvalConfig {
  QueryEvalMode mode = QueryEvalMode::kFull;
  MauveConfig mauve;
  int bleu_max_n = 4;
};

// One-to-one BLEU and greedy-embedding scores over aligned pairs; in full
// mode MAUVE and FID are computed per task between the true and predicted
// query embedding sets, then macro-averaged. Predictions must align 1:1 with
// the dataset's queries.
MetricReport evaluate_queries(const Dataset& dataset,
                              const std::vector<QueryPrediction>& predictions,
                              const Embedder& embedder, const QueryEvalConfig& config = {});

// Pools (round, rank) binary labels; probabilities are thresholded at 0.5
// (>= counts as a click). Every non-empty SERP round needs one prediction.
MetricReport evaluate_clicks(const Dataset& dataset,
                             const std::vector<ClickPrediction>& predictions,
                             double threshold = 0.5);

// Positive class is "stop"; ground truth is positive only at each session's
// final round. One decision per completed round of every session.
MetricReport evaluate_stops(const Dataset& dataset,
                            const std::vector<StopPrediction>& predictions);

// Prediction file round-trips (line-delimited JSON).
std::vector<QueryPrediction> read_query_predictions(std::istream& in);
void write_query_predictions(std::ostream& out, const std::vector<QueryPrediction>& predictions);
std::vector<ClickPrediction> read_click_predictions(std::istream& in);
void write_click_predictions(std::ostream& out, const std::vector<ClickPrediction>& predictions);
std::vector<StopPrediction> read_stop_predictions(std::istream& in);
void write_stop_predictions(std::ostream& out, const std::vector<StopPrediction>& predictions);

}  // namespace usim::eval
