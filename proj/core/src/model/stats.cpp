#include "usim/model/stats.hpp"

#include <algorithm>
#include <unordered_map>

#include "usim/common/error.hpp"

namespace usim {

namespace {

bool is_satisfying(const ClickRecord& click, const RatingScale& scale) {
  return click.satisfaction && *click.satisfaction >= scale.threshold;
}

// Examined results of one round, in rank order: true = satisfying.
// Cascade assumption: everything down to the deepest click was examined.
std::vector<bool> examined_events(const QueryRound& round, const RatingScale& scale) {
  std::vector<bool> events;
  if (round.clicks.empty()) return events;
  int deepest = 0;
  std::unordered_map<int, const ClickRecord*> by_rank;
  for (const ClickRecord& click : round.clicks) {
    deepest = std::max(deepest, click.rank);
    by_rank[click.rank] = &click;
  }
  events.reserve(static_cast<std::size_t>(deepest));
  for (int rank = 1; rank <= deepest; ++rank) {
    const auto it = by_rank.find(rank);
    events.push_back(it != by_rank.end() && is_satisfying(*it->second, scale));
  }
  return events;
}

}  // namespace

int count_satisfying_clicks(const std::vector<QueryRound>& rounds, const RatingScale& scale) {
  int n = 0;
  for (const QueryRound& round : rounds) {
    for (const ClickRecord& click : round.clicks) {
      if (is_satisfying(click, scale)) ++n;
    }
  }
  return n;
}

int longest_frustration_run(const Session& session, const RatingScale& scale,
                            bool per_round_runs) {
  int longest = 0;
  int run = 0;
  for (const QueryRound& round : session.rounds) {
    if (per_round_runs) run = 0;
    for (const bool satisfying : examined_events(round, scale)) {
      run = satisfying ? 0 : run + 1;
      longest = std::max(longest, run);
    }
  }
  return longest;
}

int current_frustration_run(const std::vector<QueryRound>& prefix, const RatingScale& scale,
                            bool per_round_runs) {
  int run = 0;
  for (const QueryRound& round : prefix) {
    if (per_round_runs) run = 0;
    for (const bool satisfying : examined_events(round, scale)) {
      run = satisfying ? 0 : run + 1;
    }
  }
  return run;
}

DatasetStats compute_stats(const Dataset& dataset, const StatsOptions& options) {
  if (options.scale.threshold < options.scale.min ||
      options.scale.threshold > options.scale.max) {
    throw Error("rating threshold outside the rating scale");
  }
  DatasetStats stats;
  stats.n_tasks = static_cast<std::int64_t>(dataset.tasks.size());
  stats.n_sessions = static_cast<std::int64_t>(dataset.sessions.size());

  std::int64_t satisfying_clicks = 0;
  double frustration_sum = 0.0;
  for (const Session& session : dataset.sessions) {
    stats.n_queries += static_cast<std::int64_t>(session.rounds.size());
    for (const QueryRound& round : session.rounds) {
      stats.n_clicks += static_cast<std::int64_t>(round.clicks.size());
      if (round.query_thought && !round.query_thought->empty()) ++stats.n_thoughts.query;
      if (round.stop_thought && !round.stop_thought->empty()) ++stats.n_thoughts.stop;
      for (const ClickRecord& click : round.clicks) {
        if (click.thought && !click.thought->empty()) ++stats.n_thoughts.click;
        if (is_satisfying(click, options.scale)) ++satisfying_clicks;
      }
    }
    frustration_sum += longest_frustration_run(session, options.scale, options.per_round_runs);
  }

  if (stats.n_sessions > 0) {
    const double n = static_cast<double>(stats.n_sessions);
    stats.avg_queries_per_session = static_cast<double>(stats.n_queries) / n;
    stats.avg_satisfying_clicks_per_session = static_cast<double>(satisfying_clicks) / n;
    stats.avg_frustrating_run_length = frustration_sum / n;
  }
  return stats;
}

}  // namespace usim
