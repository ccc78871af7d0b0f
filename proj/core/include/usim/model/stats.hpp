#pragma once

#include "usim/model/types.hpp"

namespace usim {

struct StatsOptions {
  RatingScale scale;
  // When true, frustration runs reset at each round boundary instead of
  // carrying across rounds within a session.
  bool per_round_runs = false;
};

// A click is satisfying iff it carries a rating >= scale.threshold. Examined
// results in a round are all ranks down to the deepest click (cascade
// assumption); rounds with no clicks contribute no examined results.
DatasetStats compute_stats(const Dataset& dataset, const StatsOptions& options = {});

// Longest run of consecutive examined-but-unsatisfying results in a session.
int longest_frustration_run(const Session& session, const RatingScale& scale,
                            bool per_round_runs = false);

// Length of the unsatisfying run ending at the last examined result of the
// prefix; used by the frustration stopping rule.
int current_frustration_run(const std::vector<QueryRound>& prefix, const RatingScale& scale,
                            bool per_round_runs = false);

// Number of satisfying clicks in a list of rounds.
int count_satisfying_clicks(const std::vector<QueryRound>& rounds, const RatingScale& scale);

}  // namespace usim
