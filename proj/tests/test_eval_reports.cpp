#include <gtest/gtest.h>

#include <sstream>

#include "support/fixtures.hpp"
#include "usim/common/error.hpp"
#include "usim/eval/evaluate.hpp"
#include "usim/eval/report_io.hpp"
#include "usim/llm/mock_provider.hpp"

namespace usim::eval {
namespace {

using usim::testing::make_serp;
using usim::testing::small_dataset;

Embedder hash_embedder() {
  return [](std::string_view text, llm::EmbeddingGranularity granularity) {
    return llm::hash_embed(text, granularity, 16);
  };
}

std::vector<QueryPrediction> identity_predictions(const Dataset& dataset) {
  std::vector<QueryPrediction> predictions;
  for (const Session& session : dataset.sessions) {
    for (std::size_t r = 0; r < session.rounds.size(); ++r) {
      predictions.push_back(
          {session.session_id, static_cast<int>(r), session.rounds[r].query});
    }
  }
  return predictions;
}

// ----------------------------------------------------------- query stage --

TEST(EvaluateQueries, IdentityRunScoresPerfect) {
  const Dataset dataset = small_dataset();
  const MetricReport report =
      evaluate_queries(dataset, identity_predictions(dataset), hash_embedder());
  EXPECT_DOUBLE_EQ(report.overall.at("bleu"), 1.0);
  EXPECT_DOUBLE_EQ(report.overall.at("bert_f1"), 1.0);
  EXPECT_NEAR(report.overall.at("mauve"), 1.0, 1e-6);
  EXPECT_LE(report.overall.at("fid"), 1e-6);
  EXPECT_EQ(report.count, 6);
}

TEST(EvaluateQueries, OneToOneOnlyOmitsDistributionalKeys) {
  const Dataset dataset = small_dataset();
  QueryEvalConfig config;
  config.mode = QueryEvalMode::kOneToOneOnly;
  const MetricReport report =
      evaluate_queries(dataset, identity_predictions(dataset), hash_embedder(), config);
  EXPECT_EQ(report.overall.count("mauve"), 0u);
  EXPECT_EQ(report.overall.count("fid"), 0u);
  EXPECT_EQ(report.overall.count("bleu"), 1u);

  const auto doc = report_to_json(report);
  EXPECT_FALSE(doc["overall"].contains("mauve"));
  EXPECT_FALSE(doc["overall"].contains("fid"));
}

TEST(EvaluateQueries, PerTaskDistributionalCountsFollowTaskSizes) {
  const Dataset dataset = small_dataset();
  const MetricReport report =
      evaluate_queries(dataset, identity_predictions(dataset), hash_embedder());
  // task0 has 5 aligned pairs; task1 has a single query, so it is skipped
  // for mauve/fid and flagged.
  EXPECT_EQ(report.per_task.at("task0").count("mauve"), 1u);
  EXPECT_EQ(report.per_task.at("task1").count("mauve"), 0u);
  bool flagged = false;
  for (const auto& flag : report.flags) {
    if (flag.find("task1") != std::string::npos) flagged = true;
  }
  EXPECT_TRUE(flagged);
}

TEST(EvaluateQueries, MissingPredictionIsError) {
  const Dataset dataset = small_dataset();
  auto predictions = identity_predictions(dataset);
  predictions.pop_back();
  EXPECT_THROW(evaluate_queries(dataset, predictions, hash_embedder()), Error);
}

TEST(EvaluateQueries, ExtraPredictionIsError) {
  const Dataset dataset = small_dataset();
  auto predictions = identity_predictions(dataset);
  predictions.push_back({"no-such-session", 0, "q"});
  EXPECT_THROW(evaluate_queries(dataset, predictions, hash_embedder()), Error);
}

// ----------------------------------------------------------- click stage --

Dataset ten_percent_positive_dataset() {
  // 10 rounds of 10 ranks, exactly one click per round: 10% positives.
  Dataset dataset;
  SearchTask task;
  task.task_id = "t";
  task.description = "d";
  task.language = "en";
  dataset.tasks.emplace("t", task);
  Session session;
  session.session_id = "s";
  session.user_id = "u";
  session.task_id = "t";
  for (int r = 0; r < 10; ++r) {
    QueryRound round;
    round.query = "q" + std::to_string(r);
    round.serp = make_serp(10, "r" + std::to_string(r));
    round.clicks.push_back({1 + (r % 10), std::nullopt, std::nullopt, std::nullopt});
    session.rounds.push_back(std::move(round));
  }
  dataset.sessions.push_back(std::move(session));
  return dataset;
}

TEST(EvaluateClicks, PerfectPredictionsViaRankSets) {
  const Dataset dataset = ten_percent_positive_dataset();
  std::vector<ClickPrediction> predictions;
  for (std::size_t r = 0; r < 10; ++r) {
    ClickPrediction pred;
    pred.session_id = "s";
    pred.round_index = static_cast<int>(r);
    pred.ranks = std::vector<int>{1 + (static_cast<int>(r) % 10)};
    predictions.push_back(std::move(pred));
  }
  const MetricReport report = evaluate_clicks(dataset, predictions);
  EXPECT_DOUBLE_EQ(report.overall.at("accuracy"), 1.0);
  EXPECT_DOUBLE_EQ(report.overall.at("f1"), 1.0);
  EXPECT_EQ(report.count, 100);
}

TEST(EvaluateClicks, AllNoClickOnTenPercentPositives) {
  const Dataset dataset = ten_percent_positive_dataset();
  std::vector<ClickPrediction> predictions;
  for (std::size_t r = 0; r < 10; ++r) {
    ClickPrediction pred;
    pred.session_id = "s";
    pred.round_index = static_cast<int>(r);
    pred.probs.assign(10, 0.0);
    predictions.push_back(std::move(pred));
  }
  const MetricReport report = evaluate_clicks(dataset, predictions);
  EXPECT_DOUBLE_EQ(report.overall.at("accuracy"), 0.9);
  EXPECT_DOUBLE_EQ(report.overall.at("f1"), 0.0);
}

TEST(EvaluateClicks, HalfProbabilityCountsAsClick) {
  const Dataset dataset = ten_percent_positive_dataset();
  std::vector<ClickPrediction> predictions;
  for (std::size_t r = 0; r < 10; ++r) {
    ClickPrediction pred;
    pred.session_id = "s";
    pred.round_index = static_cast<int>(r);
    pred.probs.assign(10, 0.5);
    predictions.push_back(std::move(pred));
  }
  const MetricReport report = evaluate_clicks(dataset, predictions);
  // Everything predicted clicked: accuracy equals the positive rate.
  EXPECT_DOUBLE_EQ(report.overall.at("accuracy"), 0.1);
  EXPECT_DOUBLE_EQ(report.overall.at("recall"), 1.0);
}

TEST(EvaluateClicks, CoverageGapIsErrorListingRounds) {
  const Dataset dataset = ten_percent_positive_dataset();
  try {
    evaluate_clicks(dataset, {});
    FAIL() << "expected Error";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("missing click predictions"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("s#0"), std::string::npos);
  }
}

TEST(EvaluateClicks, MisalignedProbsLengthIsError) {
  const Dataset dataset = ten_percent_positive_dataset();
  std::vector<ClickPrediction> predictions;
  for (std::size_t r = 0; r < 10; ++r) {
    ClickPrediction pred;
    pred.session_id = "s";
    pred.round_index = static_cast<int>(r);
    pred.probs.assign(3, 0.0);  // SERP has 10
    predictions.push_back(std::move(pred));
  }
  EXPECT_THROW(evaluate_clicks(dataset, predictions), Error);
}

// ------------------------------------------------------------ stop stage --

Dataset three_round_sessions(int n_sessions) {
  Dataset dataset;
  SearchTask task;
  task.task_id = "t";
  task.description = "d";
  task.language = "en";
  dataset.tasks.emplace("t", task);
  for (int s = 0; s < n_sessions; ++s) {
    Session session;
    session.session_id = "s" + std::to_string(s);
    session.user_id = "u";
    session.task_id = "t";
    for (int r = 0; r < 3; ++r) {
      QueryRound round;
      round.query = "q" + std::to_string(r);
      session.rounds.push_back(std::move(round));
    }
    dataset.sessions.push_back(std::move(session));
  }
  return dataset;
}

std::vector<StopPrediction> constant_stops(const Dataset& dataset, bool stop) {
  std::vector<StopPrediction> predictions;
  for (const Session& session : dataset.sessions) {
    for (std::size_t r = 0; r < session.rounds.size(); ++r) {
      predictions.push_back({session.session_id, static_cast<int>(r), stop});
    }
  }
  return predictions;
}

TEST(EvaluateStops, AlwaysStopPredictor) {
  const Dataset dataset = three_round_sessions(4);
  const MetricReport report = evaluate_stops(dataset, constant_stops(dataset, true));
  EXPECT_DOUBLE_EQ(report.overall.at("recall"), 1.0);
  EXPECT_NEAR(report.overall.at("precision"), 1.0 / 3.0, 1e-12);
}

TEST(EvaluateStops, OraclePredictor) {
  const Dataset dataset = three_round_sessions(4);
  std::vector<StopPrediction> predictions;
  for (const Session& session : dataset.sessions) {
    for (std::size_t r = 0; r < session.rounds.size(); ++r) {
      predictions.push_back(
          {session.session_id, static_cast<int>(r), r + 1 == session.rounds.size()});
    }
  }
  const MetricReport report = evaluate_stops(dataset, predictions);
  EXPECT_DOUBLE_EQ(report.overall.at("f1"), 1.0);
  EXPECT_DOUBLE_EQ(report.overall.at("accuracy"), 1.0);
}

TEST(EvaluateStops, AlwaysContinueAccuracyFollowsLabelArithmetic) {
  const Dataset dataset = three_round_sessions(5);
  const MetricReport report = evaluate_stops(dataset, constant_stops(dataset, false));
  // rounds = 15, sessions = 5: accuracy = (15 - 5) / 15.
  EXPECT_NEAR(report.overall.at("accuracy"), 10.0 / 15.0, 1e-12);
}

TEST(EvaluateStops, SingleRoundSessionGroundTruthIsStop) {
  Dataset dataset = three_round_sessions(1);
  dataset.sessions[0].rounds.resize(1);
  const MetricReport report = evaluate_stops(dataset, constant_stops(dataset, true));
  EXPECT_DOUBLE_EQ(report.overall.at("accuracy"), 1.0);
}

// ------------------------------------------------------------ report io --

TEST(ReportIo, JsonRoundTrip) {
  MetricReport report;
  report.method = "N-GPT";
  report.stage = "query";
  report.count = 42;
  report.overall["bleu"] = 0.392;
  report.overall["bert_f1"] = 0.7587;
  report.per_task["t1"]["bleu"] = 0.5;
  report.flags.push_back("note");
  const MetricReport reread = report_from_json(report_to_json(report));
  EXPECT_EQ(reread.method, report.method);
  EXPECT_EQ(reread.stage, report.stage);
  EXPECT_EQ(reread.count, report.count);
  EXPECT_DOUBLE_EQ(reread.overall.at("bleu"), 0.392);
  EXPECT_DOUBLE_EQ(reread.per_task.at("t1").at("bleu"), 0.5);
  EXPECT_EQ(reread.flags, report.flags);
}

TEST(ReportIo, TableAlignsMethodsByMetrics) {
  MetricReport a;
  a.method = "Random";
  a.stage = "query";
  a.overall = {{"bleu", 0.0331}, {"bert_f1", 0.5204}, {"mauve", 0.0078}, {"fid", 1.0207}};
  MetricReport b;
  b.method = "N-GPT";
  b.stage = "query";
  b.overall = {{"bleu", 0.392}, {"bert_f1", 0.7587}};  // no distributional metrics
  const std::string table = render_report_table("query", {a, b});
  EXPECT_NE(table.find("Methods"), std::string::npos);
  EXPECT_NE(table.find("Random"), std::string::npos);
  EXPECT_NE(table.find("0.0331"), std::string::npos);
  EXPECT_NE(table.find("N-GPT"), std::string::npos);
  // Missing metrics render as "-".
  EXPECT_NE(table.find('-'), std::string::npos);
}

TEST(ReportIo, TableRejectsStageMismatch) {
  MetricReport a;
  a.method = "PBM";
  a.stage = "click";
  EXPECT_THROW(render_report_table("query", {a}), Error);
}

TEST(PredictionIo, AllThreeKindsRoundTrip) {
  std::vector<QueryPrediction> queries{{"s1", 0, "查询"}};
  std::vector<ClickPrediction> clicks;
  ClickPrediction with_probs;
  with_probs.session_id = "s1";
  with_probs.round_index = 0;
  with_probs.probs = {0.1, 0.9};
  ClickPrediction with_ranks;
  with_ranks.session_id = "s1";
  with_ranks.round_index = 1;
  with_ranks.ranks = std::vector<int>{2};
  clicks.push_back(with_probs);
  clicks.push_back(with_ranks);
  std::vector<StopPrediction> stops{{"s1", 0, true}, {"s1", 1, false}};

  std::ostringstream q_out, c_out, s_out;
  write_query_predictions(q_out, queries);
  write_click_predictions(c_out, clicks);
  write_stop_predictions(s_out, stops);
  std::istringstream q_in(q_out.str()), c_in(c_out.str()), s_in(s_out.str());

  const auto q = read_query_predictions(q_in);
  ASSERT_EQ(q.size(), 1u);
  EXPECT_EQ(q[0].query, "查询");
  const auto c = read_click_predictions(c_in);
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c[0].probs, (std::vector<double>{0.1, 0.9}));
  ASSERT_TRUE(c[1].ranks.has_value());
  EXPECT_EQ(*c[1].ranks, (std::vector<int>{2}));
  const auto s = read_stop_predictions(s_in);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_TRUE(s[0].stop);
  EXPECT_FALSE(s[1].stop);
}

}  // namespace
}  // namespace usim::eval
