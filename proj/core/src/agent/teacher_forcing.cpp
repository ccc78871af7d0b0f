#include "usim/agent/teacher_forcing.hpp"

#include "usim/common/error.hpp"

namespace usim::agent {

namespace {

const SearchTask& task_for(const Dataset& dataset, const Session& session) {
  const auto it = dataset.tasks.find(session.task_id);
  if (it == dataset.tasks.end()) {
    throw Error("unresolved task_id in teacher forcing: " + session.task_id);
  }
  return it->second;
}

}  // namespace

AgentState state_from_prefix(const SearchTask& task, const Session& session,
                             std::size_t n_rounds) {
  AgentState state;
  state.task = task;
  for (std::size_t r = 0; r < n_rounds && r < session.rounds.size(); ++r) {
    const QueryRound& round = session.rounds[r];
    state.history.push_back(round);
    for (const ClickRecord& click : round.clicks) {
      const int idx = click.rank - 1;
      if (idx < 0 || idx >= static_cast<int>(round.serp.size())) continue;
      const SerpItem& item = round.serp[static_cast<std::size_t>(idx)];
      state.observations.push_back(item.snippet);
      if (item.content) state.observations.push_back(*item.content);
    }
  }
  return state;
}

std::vector<eval::QueryPrediction> teacher_forced_queries(const Dataset& dataset, Agent& agent,
                                                          const StrategyConfig& strategy,
                                                          const TeacherForcingOptions& options,
                                                          TranscriptWriter* transcript) {
  std::vector<eval::QueryPrediction> predictions;
  for (const Session& session : dataset.sessions) {
    const SearchTask& task = task_for(dataset, session);
    for (std::size_t r = 0; r < session.rounds.size(); ++r) {
      if (r == 0 && !options.predict_first_query) {
        predictions.push_back({session.session_id, 0, session.rounds[0].query});
        continue;
      }
      const AgentState state = state_from_prefix(task, session, r);
      const QueryDecision decision =
          agent.generate_query(state, strategy, transcript, session.session_id);
      predictions.push_back(
          {session.session_id, static_cast<int>(r), decision.query});
    }
  }
  return predictions;
}

std::vector<eval::ClickPrediction> teacher_forced_clicks(const Dataset& dataset, Agent& agent,
                                                         const StrategyConfig& strategy,
                                                         TranscriptWriter* transcript) {
  std::vector<eval::ClickPrediction> predictions;
  for (const Session& session : dataset.sessions) {
    const SearchTask& task = task_for(dataset, session);
    for (std::size_t r = 0; r < session.rounds.size(); ++r) {
      const QueryRound& round = session.rounds[r];
      if (round.serp.empty()) continue;
      const AgentState state = state_from_prefix(task, session, r);
      const ClickDecision decision = agent.decide_clicks(
          state, round.query, round.serp, strategy, transcript, session.session_id);
      eval::ClickPrediction pred;
      pred.session_id = session.session_id;
      pred.round_index = static_cast<int>(r);
      pred.ranks = decision.ranks;
      predictions.push_back(std::move(pred));
    }
  }
  return predictions;
}

std::vector<eval::StopPrediction> teacher_forced_stops(const Dataset& dataset, Agent& agent,
                                                       const StrategyConfig& strategy,
                                                       TranscriptWriter* transcript) {
  std::vector<eval::StopPrediction> predictions;
  for (const Session& session : dataset.sessions) {
    const SearchTask& task = task_for(dataset, session);
    for (std::size_t r = 0; r < session.rounds.size(); ++r) {
      const AgentState state = state_from_prefix(task, session, r + 1);
      const StopDecision decision = agent.decide_stop(state, strategy, transcript,
                                                      session.session_id, /*apply_budget=*/false);
      predictions.push_back(
          {session.session_id, static_cast<int>(r), decision.stop});
    }
  }
  return predictions;
}

}  // namespace usim::agent
