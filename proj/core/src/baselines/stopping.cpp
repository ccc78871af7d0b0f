#include "usim/baselines/stopping.hpp"

#include <cmath>

#include "usim/common/error.hpp"
#include "usim/model/stats.hpp"

namespace usim::baselines {

StopRule stop_rule_from_string(const std::string& name) {
  if (name == "fixed_depth") return StopRule::kFixedDepth;
  if (name == "satisfaction") return StopRule::kSatisfaction;
  if (name == "frustration") return StopRule::kFrustration;
  if (name == "s_and_f") return StopRule::kSatisfactionOrFrustration;
  throw UsageError("unknown stopping rule: " + name);
}

std::string to_string(StopRule rule) {
  switch (rule) {
    case StopRule::kFixedDepth: return "fixed_depth";
    case StopRule::kSatisfaction: return "satisfaction";
    case StopRule::kFrustration: return "frustration";
    case StopRule::kSatisfactionOrFrustration: return "s_and_f";
  }
  return "fixed_depth";
}

StoppingParams estimate_stopping_params(const Dataset& dataset, const StoppingOptions& options) {
  if (dataset.sessions.empty()) throw Error("cannot estimate stopping params on an empty dataset");
  StatsOptions stats_options;
  stats_options.scale = options.scale;
  stats_options.per_round_runs = options.per_round_runs;
  const DatasetStats stats = compute_stats(dataset, stats_options);

  StoppingParams params;
  params.fixed_depth_k = stats.avg_queries_per_session;
  params.frustration_f = stats.avg_frustrating_run_length;

  bool any_rating = false;
  for (const Session& session : dataset.sessions) {
    for (const QueryRound& round : session.rounds) {
      for (const ClickRecord& click : round.clicks) {
        if (click.satisfaction) any_rating = true;
      }
    }
  }
  if (any_rating) {
    params.satisfaction_s = stats.avg_satisfying_clicks_per_session;
  } else {
    params.satisfaction_s =
        static_cast<double>(stats.n_clicks) / static_cast<double>(stats.n_sessions);
    params.satisfaction_fallback = true;
  }
  return params;
}

bool stop_decision(const std::vector<QueryRound>& prefix, StopRule rule,
                   const StoppingParams& params, const StoppingOptions& options) {
  if (prefix.empty()) throw Error("stop_decision requires at least one completed round");

  const auto fires_fixed = [&] {
    return static_cast<double>(prefix.size()) >= std::ceil(params.fixed_depth_k);
  };
  const auto fires_satisfaction = [&] {
    return static_cast<double>(count_satisfying_clicks(prefix, options.scale)) >=
           std::ceil(params.satisfaction_s);
  };
  const auto fires_frustration = [&] {
    return static_cast<double>(
               current_frustration_run(prefix, options.scale, options.per_round_runs)) >=
           std::ceil(params.frustration_f);
  };

  switch (rule) {
    case StopRule::kFixedDepth: return fires_fixed();
    case StopRule::kSatisfaction: return fires_satisfaction();
    case StopRule::kFrustration: return fires_frustration();
    case StopRule::kSatisfactionOrFrustration:
      return fires_satisfaction() || fires_frustration();
  }
  return false;
}

}  // namespace usim::baselines
