#pragma once

#include <string>
#include <vector>

#include "usim/model/types.hpp"

namespace usim::baselines {

// Dataset-average stopping thresholds. The values may be fractional; the
// rules apply a ceiling when comparing.
struct StoppingParams {
  double fixed_depth_k = 0.0;    // average queries per session
  double satisfaction_s = 0.0;   // average satisfying clicks per session
  double frustration_f = 0.0;    // average longest unsatisfying run
  bool satisfaction_fallback = false;  // s fell back to the plain click average
};

enum class StopRule { kFixedDepth, kSatisfaction, kFrustration, kSatisfactionOrFrustration };

StopRule stop_rule_from_string(const std::string& name);
std::string to_string(StopRule rule);

struct StoppingOptions {
  RatingScale scale;
  bool per_round_runs = false;
};

// Averages over the whole dataset. When no click carries a satisfaction
// rating at all, `satisfaction_s` falls back to the average click count per
// session and the fallback flag is set.
StoppingParams estimate_stopping_params(const Dataset& dataset,
                                        const StoppingOptions& options = {});

// True = stop after the given prefix of completed rounds.
bool stop_decision(const std::vector<QueryRound>& prefix, StopRule rule,
                   const StoppingParams& params, const StoppingOptions& options = {});

}  // namespace usim::baselines
