#include "usim/eval/evaluate.hpp"

#include <algorithm>
#include <set>

#include "json.hpp"
#include "usim/click/models.hpp"
#include "usim/common/error.hpp"
#include "usim/common/jsonl.hpp"
#include "usim/text/tokenize.hpp"

namespace usim::eval {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string round_key(const std::string& session_id, int round_index) {
  return session_id + "#" + std::to_string(round_index);
}

double mean(const std::vector<double>& values) {
  if (values.empty()) return 0.0;
  double sum = 0.0;
  for (const double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

void put_classification(std::map<std::string, double>& into, const ClassificationReport& report) {
  into["accuracy"] = report.accuracy;
  into["precision"] = report.precision;
  into["recall"] = report.recall;
  into["f1"] = report.f1;
  into["tp"] = static_cast<double>(report.confusion.tp);
  into["fp"] = static_cast<double>(report.confusion.fp);
  into["fn"] = static_cast<double>(report.confusion.fn);
  into["tn"] = static_cast<double>(report.confusion.tn);
}

}  // namespace

MetricReport evaluate_queries(const Dataset& dataset,
                              const std::vector<QueryPrediction>& predictions,
                              const Embedder& embedder, const QueryEvalConfig& config) {
  MetricReport report;
  report.stage = "query";

  std::map<std::string, const QueryPrediction*> by_round;
  for (const QueryPrediction& pred : predictions) {
    if (!by_round.emplace(round_key(pred.session_id, pred.round_index), &pred).second) {
      throw Error("duplicate query prediction for " +
                  round_key(pred.session_id, pred.round_index));
    }
  }

  struct TaskBucket {
    std::vector<double> bleu, bert_p, bert_r, bert_f1;
    EmbeddingSet true_texts, pred_texts;
  };
  std::map<std::string, TaskBucket> buckets;
  std::vector<double> all_bleu, all_bert_p, all_bert_r, all_bert_f1;
  std::size_t used = 0;
  bool bert_clamped = false;

  for (const Session& session : dataset.sessions) {
    for (std::size_t r = 0; r < session.rounds.size(); ++r) {
      const auto it = by_round.find(round_key(session.session_id, static_cast<int>(r)));
      if (it == by_round.end()) {
        throw Error("missing query prediction for " +
                    round_key(session.session_id, static_cast<int>(r)));
      }
      ++used;
      const std::string& truth = session.rounds[r].query;
      const std::string& predicted = it->second->query;
      TaskBucket& bucket = buckets[session.task_id];

      const TokenSeq truth_tokens = text::tokenize(truth);
      const TokenSeq pred_tokens = text::tokenize(predicted);
      const double b = bleu(pred_tokens, truth_tokens, config.bleu_max_n);
      all_bleu.push_back(b);
      bucket.bleu.push_back(b);

      BertScore bs;
      const auto pred_emb = embedder(predicted, llm::EmbeddingGranularity::kToken);
      const auto truth_emb = embedder(truth, llm::EmbeddingGranularity::kToken);
      if (!pred_emb.vectors.empty() && !truth_emb.vectors.empty()) {
        bs = bert_style_score(pred_emb.vectors, truth_emb.vectors);
        // Report values live in [0, 1]; raw cosines can dip below zero.
        if (bs.precision < 0 || bs.recall < 0) bert_clamped = true;
        bs.precision = std::clamp(bs.precision, 0.0, 1.0);
        bs.recall = std::clamp(bs.recall, 0.0, 1.0);
        bs.f1 = std::clamp(bs.f1, 0.0, 1.0);
      }
      all_bert_p.push_back(bs.precision);
      all_bert_r.push_back(bs.recall);
      all_bert_f1.push_back(bs.f1);
      bucket.bert_p.push_back(bs.precision);
      bucket.bert_r.push_back(bs.recall);
      bucket.bert_f1.push_back(bs.f1);

      if (config.mode == QueryEvalMode::kFull) {
        const auto truth_text_emb = embedder(truth, llm::EmbeddingGranularity::kText);
        const auto pred_text_emb = embedder(predicted, llm::EmbeddingGranularity::kText);
        if (truth_text_emb.vectors.size() != 1 || pred_text_emb.vectors.size() != 1) {
          throw Error("missing text embedding for distributional metrics");
        }
        bucket.true_texts.push_back(truth_text_emb.vectors.front());
        bucket.pred_texts.push_back(pred_text_emb.vectors.front());
      }
    }
  }
  if (used != predictions.size()) {
    throw Error("extra query predictions that match no dataset round");
  }
  if (bert_clamped) report.flags.push_back("bert scores clamped into [0,1]");

  report.count = static_cast<std::int64_t>(all_bleu.size());
  report.overall["bleu"] = mean(all_bleu);
  report.overall["bert_precision"] = mean(all_bert_p);
  report.overall["bert_recall"] = mean(all_bert_r);
  report.overall["bert_f1"] = mean(all_bert_f1);

  std::vector<double> task_mauve, task_fid;
  for (auto& [task_id, bucket] : buckets) {
    auto& task_metrics = report.per_task[task_id];
    task_metrics["bleu"] = mean(bucket.bleu);
    task_metrics["bert_precision"] = mean(bucket.bert_p);
    task_metrics["bert_recall"] = mean(bucket.bert_r);
    task_metrics["bert_f1"] = mean(bucket.bert_f1);
    task_metrics["pairs"] = static_cast<double>(bucket.bleu.size());
    if (config.mode == QueryEvalMode::kFull) {
      if (bucket.true_texts.size() >= 2) {
        const MauveResult m = mauve(bucket.true_texts, bucket.pred_texts, config.mauve);
        const double f = fid(bucket.true_texts, bucket.pred_texts);
        task_metrics["mauve"] = m.score;
        task_metrics["fid"] = f;
        if (m.degenerate) report.flags.push_back("degenerate mauve clustering in " + task_id);
        task_mauve.push_back(m.score);
        task_fid.push_back(f);
      } else {
        report.flags.push_back("task " + task_id +
                               " skipped for distributional metrics (fewer than 2 queries)");
      }
    }
  }
  if (config.mode == QueryEvalMode::kFull && !task_mauve.empty()) {
    report.overall["mauve"] = mean(task_mauve);
    report.overall["fid"] = mean(task_fid);
  }
  return report;
}

MetricReport evaluate_clicks(const Dataset& dataset,
                             const std::vector<ClickPrediction>& predictions, double threshold) {
  MetricReport report;
  report.stage = "click";

  std::map<std::string, const ClickPrediction*> by_round;
  for (const ClickPrediction& pred : predictions) {
    if (!by_round.emplace(round_key(pred.session_id, pred.round_index), &pred).second) {
      throw Error("duplicate click prediction for " +
                  round_key(pred.session_id, pred.round_index));
    }
  }

  std::vector<std::uint8_t> preds, labels;
  std::map<std::string, std::pair<std::vector<std::uint8_t>, std::vector<std::uint8_t>>> by_task;
  std::vector<std::string> missing;

  for (const Session& session : dataset.sessions) {
    for (std::size_t r = 0; r < session.rounds.size(); ++r) {
      const QueryRound& round = session.rounds[r];
      if (round.serp.empty()) continue;
      const auto it = by_round.find(round_key(session.session_id, static_cast<int>(r)));
      if (it == by_round.end()) {
        missing.push_back(round_key(session.session_id, static_cast<int>(r)));
        continue;
      }
      const ClickPrediction& pred = *it->second;

      std::vector<std::uint8_t> round_pred(round.serp.size(), 0);
      if (pred.ranks) {
        for (const int rank : *pred.ranks) {
          if (rank >= 1 && rank <= static_cast<int>(round.serp.size())) {
            round_pred[static_cast<std::size_t>(rank - 1)] = 1;
          }
        }
      } else {
        if (pred.probs.size() != round.serp.size()) {
          throw Error("click probabilities not aligned with SERP for " +
                      round_key(session.session_id, static_cast<int>(r)));
        }
        round_pred = click::classify(pred.probs, threshold);
      }

      std::vector<std::uint8_t> round_label(round.serp.size(), 0);
      for (const ClickRecord& click : round.clicks) {
        if (click.rank >= 1 && click.rank <= static_cast<int>(round.serp.size())) {
          round_label[static_cast<std::size_t>(click.rank - 1)] = 1;
        }
      }
      auto& [task_preds, task_labels] = by_task[session.task_id];
      for (std::size_t i = 0; i < round_pred.size(); ++i) {
        preds.push_back(round_pred[i]);
        labels.push_back(round_label[i]);
        task_preds.push_back(round_pred[i]);
        task_labels.push_back(round_label[i]);
      }
    }
  }
  if (!missing.empty()) {
    std::string joined;
    for (std::size_t i = 0; i < std::min<std::size_t>(missing.size(), 10); ++i) {
      if (i) joined += ", ";
      joined += missing[i];
    }
    throw Error("missing click predictions for " + std::to_string(missing.size()) +
                " rounds: " + joined);
  }

  const ClassificationReport cls = classification_metrics(preds, labels);
  report.count = static_cast<std::int64_t>(preds.size());
  put_classification(report.overall, cls);
  if (cls.zero_denominator) report.flags.push_back("zero denominator in precision or recall");
  for (const auto& [task_id, pair] : by_task) {
    put_classification(report.per_task[task_id], classification_metrics(pair.first, pair.second));
  }
  return report;
}

MetricReport evaluate_stops(const Dataset& dataset,
                            const std::vector<StopPrediction>& predictions) {
  MetricReport report;
  report.stage = "stop";

  std::map<std::string, const StopPrediction*> by_round;
  for (const StopPrediction& pred : predictions) {
    if (!by_round.emplace(round_key(pred.session_id, pred.round_index), &pred).second) {
      throw Error("duplicate stop prediction for " +
                  round_key(pred.session_id, pred.round_index));
    }
  }

  std::vector<std::uint8_t> preds, labels;
  std::map<std::string, std::pair<std::vector<std::uint8_t>, std::vector<std::uint8_t>>> by_task;
  std::vector<std::string> missing;

  for (const Session& session : dataset.sessions) {
    for (std::size_t r = 0; r < session.rounds.size(); ++r) {
      const auto it = by_round.find(round_key(session.session_id, static_cast<int>(r)));
      if (it == by_round.end()) {
        missing.push_back(round_key(session.session_id, static_cast<int>(r)));
        continue;
      }
      const std::uint8_t label = r + 1 == session.rounds.size() ? 1 : 0;
      const std::uint8_t pred = it->second->stop ? 1 : 0;
      preds.push_back(pred);
      labels.push_back(label);
      auto& [task_preds, task_labels] = by_task[session.task_id];
      task_preds.push_back(pred);
      task_labels.push_back(label);
    }
  }
  if (!missing.empty()) {
    throw Error("missing stop predictions for " + std::to_string(missing.size()) + " rounds");
  }

  const ClassificationReport cls = classification_metrics(preds, labels);
  report.count = static_cast<std::int64_t>(preds.size());
  put_classification(report.overall, cls);
  if (cls.zero_denominator) report.flags.push_back("zero denominator in precision or recall");
  for (const auto& [task_id, pair] : by_task) {
    put_classification(report.per_task[task_id], classification_metrics(pair.first, pair.second));
  }
  return report;
}

std::vector<QueryPrediction> read_query_predictions(std::istream& in) {
  std::vector<QueryPrediction> out;
  for_each_jsonl(in, [&](const json& record, std::size_t line) {
    if (!record.contains("session_id") || !record.contains("round_index") ||
        !record.contains("query")) {
      throw ParseError("query prediction needs session_id, round_index, query", line);
    }
    out.push_back({record["session_id"].get<std::string>(), record["round_index"].get<int>(),
                   record["query"].get<std::string>()});
  });
  return out;
}

void write_query_predictions(std::ostream& out, const std::vector<QueryPrediction>& predictions) {
  for (const QueryPrediction& p : predictions) {
    out << ordered_json{{"session_id", p.session_id},
                        {"round_index", p.round_index},
                        {"query", p.query}}
               .dump()
        << "\n";
  }
}

std::vector<ClickPrediction> read_click_predictions(std::istream& in) {
  std::vector<ClickPrediction> out;
  for_each_jsonl(in, [&](const json& record, std::size_t line) {
    if (!record.contains("session_id") || !record.contains("round_index")) {
      throw ParseError("click prediction needs session_id and round_index", line);
    }
    ClickPrediction pred;
    pred.session_id = record["session_id"].get<std::string>();
    pred.round_index = record["round_index"].get<int>();
    if (record.contains("probs")) {
      pred.probs = record["probs"].get<std::vector<double>>();
    } else if (record.contains("ranks")) {
      pred.ranks = record["ranks"].get<std::vector<int>>();
    } else {
      throw ParseError("click prediction needs probs or ranks", line);
    }
    out.push_back(std::move(pred));
  });
  return out;
}

void write_click_predictions(std::ostream& out, const std::vector<ClickPrediction>& predictions) {
  for (const ClickPrediction& p : predictions) {
    ordered_json record{{"session_id", p.session_id}, {"round_index", p.round_index}};
    if (p.ranks) {
      record["ranks"] = *p.ranks;
    } else {
      record["probs"] = p.probs;
    }
    out << record.dump() << "\n";
  }
}

std::vector<StopPrediction> read_stop_predictions(std::istream& in) {
  std::vector<StopPrediction> out;
  for_each_jsonl(in, [&](const json& record, std::size_t line) {
    if (!record.contains("session_id") || !record.contains("round_index") ||
        !record.contains("decision")) {
      throw ParseError("stop prediction needs session_id, round_index, decision", line);
    }
    const std::string decision = record["decision"].get<std::string>();
    if (decision != "stop" && decision != "continue") {
      throw ParseError("decision must be 'stop' or 'continue'", line);
    }
    out.push_back({record["session_id"].get<std::string>(), record["round_index"].get<int>(),
                   decision == "stop"});
  });
  return out;
}

void write_stop_predictions(std::ostream& out, const std::vector<StopPrediction>& predictions) {
  for (const StopPrediction& p : predictions) {
    out << ordered_json{{"session_id", p.session_id},
                        {"round_index", p.round_index},
                        {"decision", p.stop ? "stop" : "continue"}}
               .dump()
        << "\n";
  }
}

}  // namespace usim::eval
