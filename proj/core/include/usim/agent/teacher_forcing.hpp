#pragma once

#include "usim/agent/agent.hpp"
#include "usim/eval/evaluate.hpp"
#include "usim/model/types.hpp"

namespace usim::agent {

struct TeacherForcingOptions {
  // When false, the first query of every session is taken as given: its
  // prediction is a copy of the ground truth instead of a model output.
  bool predict_first_query = true;
};

// Conditions every prediction on the ground-truth history prefix, giving one
// prediction per true action so evaluation can pair them one to one.
std::vector<eval::QueryPrediction> teacher_forced_queries(
    const Dataset& dataset, Agent& agent, const StrategyConfig& strategy,
    const TeacherForcingOptions& options = {}, TranscriptWriter* transcript = nullptr);

// One clicked-rank set per true round, decided on the true SERP.
std::vector<eval::ClickPrediction> teacher_forced_clicks(
    const Dataset& dataset, Agent& agent, const StrategyConfig& strategy,
    TranscriptWriter* transcript = nullptr);

// One continue/stop decision after each true round (budget not applied).
std::vector<eval::StopPrediction> teacher_forced_stops(
    const Dataset& dataset, Agent& agent, const StrategyConfig& strategy,
    TranscriptWriter* transcript = nullptr);

// Rebuilds the observable agent state from a ground-truth prefix.
AgentState state_from_prefix(const SearchTask& task, const Session& session,
                             std::size_t n_rounds);

}  // namespace usim::agent
