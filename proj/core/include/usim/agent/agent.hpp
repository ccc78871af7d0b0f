#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "usim/agent/serp_store.hpp"
#include "usim/agent/strategy.hpp"
#include "usim/agent/transcript.hpp"
#include "usim/llm/client.hpp"
#include "usim/model/types.hpp"
#include "usim/prompt/template.hpp"

namespace usim::agent {

struct Budget {
  int max_rounds = 10;
  int max_clicks_per_round = 10;
};

// Everything the prompts can see at one point of a session.
struct AgentState {
  SearchTask task;
  std::vector<QueryRound> history;       // completed rounds
  std::vector<std::string> observations; // snippets/contents of clicked items

  int round_index() const { return static_cast<int>(history.size()); }
};

struct AgentOptions {
  int reask_limit = 2;           // corrective re-asks before giving up
  std::size_t max_query_chars = 256;
  bool strict_serp = false;      // error on SERP miss instead of empty SERP
};

struct QueryDecision {
  std::string query;
  std::optional<std::string> thought;
};

struct ClickDecision {
  std::vector<int> ranks;  // ascending, deduplicated, within the SERP
  std::optional<std::string> thought;
};

struct StopDecision {
  bool stop = false;
  std::optional<std::string> thought;
};

using ClientMap = std::map<std::string, std::shared_ptr<llm::LlmClient>>;

// The {thought}-{action} simulation engine: renders stage prompts, optionally
// generates an explicit thought first, executes the action, and loops
// query -> clicks -> stop against a recorded-SERP store.
class Agent {
 public:
  Agent(TemplateSet templates, ClientMap clients, Budget budget = {}, AgentOptions options = {});

  // Absent when the strategy has no thought source or the provider returned
  // an empty completion (logged as a warning).
  std::optional<std::string> think(Stage stage, const AgentState& state,
                                   const StrategyConfig& strategy,
                                   const std::string& current_query = {},
                                   std::span<const SerpItem> serp = {},
                                   TranscriptWriter* transcript = nullptr,
                                   const std::string& session_id = {});

  QueryDecision generate_query(const AgentState& state, const StrategyConfig& strategy,
                               TranscriptWriter* transcript = nullptr,
                               const std::string& session_id = {});

  ClickDecision decide_clicks(const AgentState& state, const std::string& current_query,
                              std::span<const SerpItem> serp, const StrategyConfig& strategy,
                              TranscriptWriter* transcript = nullptr,
                              const std::string& session_id = {});

  // `apply_budget` forces a stop once the history reaches max_rounds;
  // teacher-forced evaluation passes false.
  StopDecision decide_stop(const AgentState& state, const StrategyConfig& strategy,
                           TranscriptWriter* transcript = nullptr,
                           const std::string& session_id = {}, bool apply_budget = true);

  Session simulate_session(const SearchTask& task, const StrategyConfig& strategy,
                           const SerpStore& store, const std::string& session_id,
                           TranscriptWriter* transcript = nullptr);

  const Budget& budget() const { return budget_; }
  const AgentOptions& options() const { return options_; }
  std::vector<std::string> take_warnings();

  // Session ids follow "{strategy}-{task_id}-r{rep}".
  static std::string session_id_for(const StrategyConfig& strategy, const std::string& task_id,
                                    int rep);

 private:
  llm::LlmClient& client_for(const std::string& provider_id);
  std::string prompt_for(Stage stage, std::string_view kind, const AgentState& state,
                         const std::string& current_query, std::span<const SerpItem> serp,
                         const std::optional<std::string>& thought) const;
  llm::ChatResponse exchange(llm::LlmClient& client, const llm::ChatRequest& request,
                             const std::string& stage_label, TranscriptWriter* transcript,
                             const std::string& session_id);
  void warn(const std::string& message);

  TemplateSet templates_;
  ClientMap clients_;
  Budget budget_;
  AgentOptions options_;
  std::vector<std::string> warnings_;
  std::mutex warnings_mutex_;
};

// One batch of simulations: every task in the map times `reps` repetitions,
// in deterministic task order. All sessions respect the agent's budgets.
// Note: sequential mock scripts keep their cursor across sessions when one
// Agent serves the whole run; construct a fresh Agent per session when the
// script must restart (the CLI does).
struct SimulationRun {
  StrategyConfig strategy;
  std::vector<Session> sessions;
  std::uint64_t seed = 0;
  std::string transcript_ref;  // path or label of the provider exchange log
};

SimulationRun simulate_run(Agent& agent, const StrategyConfig& strategy,
                           const std::map<std::string, SearchTask>& tasks,
                           const SerpStore& store, int reps, std::uint64_t seed,
                           TranscriptWriter* transcript = nullptr,
                           const std::string& transcript_ref = {});

}  // namespace usim::agent
