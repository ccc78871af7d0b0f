#pragma once

#include <cstdint>
#include <span>
#include <utility>

#include "usim/click/click_log.hpp"
#include "usim/click/params.hpp"

namespace usim::click {

// EM under the examination hypothesis. Parameters stay inside
// [kProbFloor, kProbCeil] after every iteration; the recorded log-likelihood
// sequence is non-decreasing.
std::pair<PbmParams, TrainReport> fit_pbm(const ClickLog& log, const TrainConfig& config = {});

std::pair<UbmParams, TrainReport> fit_ubm(const ClickLog& log, const TrainConfig& config = {});

// Closed-form MLE: attractiveness from examined impressions (ranks at or
// above the last click; rank 1 only for click-free impressions), lambda from
// last-click counts. Undefined ratios fall back to the defaults.
DcmParams fit_dcm(const ClickLog& log);

// EM with forward-backward posteriors over the examination chain;
// gamma_continue is a fixed scalar hyperparameter.
std::pair<DbnParams, TrainReport> fit_dbn(const ClickLog& log, double gamma_continue = 1.0,
                                          const TrainConfig& config = {});

// Marginal click probability per rank. Unseen (query, doc) pairs fall back
// to the model's default attractiveness (and satisfaction for DBN); ranks
// beyond the trained tables reuse the deepest trained rank.
std::vector<double> predict_click_probs(const PbmParams& params, const std::string& query_key,
                                        const std::vector<std::string>& doc_keys);
std::vector<double> predict_click_probs(const UbmParams& params, const std::string& query_key,
                                        const std::vector<std::string>& doc_keys);
std::vector<double> predict_click_probs(const DcmParams& params, const std::string& query_key,
                                        const std::vector<std::string>& doc_keys);
std::vector<double> predict_click_probs(const DbnParams& params, const std::string& query_key,
                                        const std::vector<std::string>& doc_keys);
std::vector<double> predict_click_probs(const ClickModelParams& params,
                                        const std::string& query_key,
                                        const std::vector<std::string>& doc_keys);

// 1 iff prob >= threshold.
std::vector<std::uint8_t> classify(std::span<const double> probs, double threshold = 0.5);

// Total log P(click vector | model) over the log. Zero-probability observed
// events are clamped at 1e-12 and flagged via `clamped`.
double log_likelihood(const ClickModelParams& params, const ClickLog& log,
                      bool* clamped = nullptr);
double impression_log_likelihood(const ClickModelParams& params, const Impression& imp,
                                 bool* clamped = nullptr);

}  // namespace usim::click
