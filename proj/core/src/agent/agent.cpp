#include "usim/agent/agent.hpp"

#include <algorithm>

#include "usim/agent/sanitize.hpp"
#include "usim/common/error.hpp"
#include "usim/model/session_log.hpp"

namespace usim::agent {

namespace {

const char* reask_instruction(Stage stage) {
  switch (stage) {
    case Stage::kQuery:
      return "Respond with only the query text on a single line.";
    case Stage::kClick:
      return "Respond with only a bracketed list of result ranks, e.g. [1, 3], or the word none.";
    case Stage::kStop:
      return "Respond with only one word: continue or stop.";
  }
  return "";
}

}  // namespace

Agent::Agent(TemplateSet templates, ClientMap clients, Budget budget, AgentOptions options)
    : templates_(std::move(templates)),
      clients_(std::move(clients)),
      budget_(budget),
      options_(options) {
  if (budget_.max_rounds < 1 || budget_.max_clicks_per_round < 1) {
    throw Error("budgets must be positive");
  }
}

llm::LlmClient& Agent::client_for(const std::string& provider_id) {
  const auto it = clients_.find(provider_id);
  if (it == clients_.end()) throw Error("no client configured for provider: " + provider_id);
  return *it->second;
}

void Agent::warn(const std::string& message) {
  std::lock_guard<std::mutex> lock(warnings_mutex_);
  warnings_.push_back(message);
}

std::vector<std::string> Agent::take_warnings() {
  std::lock_guard<std::mutex> lock(warnings_mutex_);
  return std::exchange(warnings_, {});
}

std::string Agent::prompt_for(Stage stage, std::string_view kind, const AgentState& state,
                              const std::string& current_query, std::span<const SerpItem> serp,
                              const std::optional<std::string>& thought) const {
  PromptValues values;
  values.task_description = state.task.description;
  values.search_history = render_search_history(state.history);
  if (stage == Stage::kClick) {
    values.serp_listing = render_serp_listing(current_query, serp);
  }
  values.thought = thought;
  return render_template(templates_.get(stage, kind), values);
}

llm::ChatResponse Agent::exchange(llm::LlmClient& client, const llm::ChatRequest& request,
                                  const std::string& stage_label, TranscriptWriter* transcript,
                                  const std::string& session_id) {
  llm::ChatResponse response;
  try {
    response = client.complete(request);
  } catch (const ProviderError& e) {
    throw Error("provider '" + client.config().provider_id + "' failed at " + stage_label +
                ": " + e.what());
  }
  if (transcript != nullptr) {
    transcript->append({session_id, stage_label,
                        TranscriptWriter::request_json(request, client.config()),
                        response.content, response.cached});
  }
  return response;
}

std::optional<std::string> Agent::think(Stage stage, const AgentState& state,
                                        const StrategyConfig& strategy,
                                        const std::string& current_query,
                                        std::span<const SerpItem> serp,
                                        TranscriptWriter* transcript,
                                        const std::string& session_id) {
  if (!strategy.thought_source) return std::nullopt;
  llm::LlmClient& client = client_for(*strategy.thought_source);
  llm::ChatRequest request;
  request.messages.push_back(
      {llm::Role::kUser, prompt_for(stage, "thought", state, current_query, serp, std::nullopt)});
  const llm::ChatResponse response =
      exchange(client, request, to_string(stage) + "_thought", transcript, session_id);
  const std::string thought = strip_reasoning_prefix(response.content);
  if (thought.empty()) {
    warn("empty thought completion at " + to_string(stage) + " stage");
    return std::nullopt;
  }
  return thought;
}

QueryDecision Agent::generate_query(const AgentState& state, const StrategyConfig& strategy,
                                    TranscriptWriter* transcript, const std::string& session_id) {
  const std::optional<std::string> thought =
      think(Stage::kQuery, state, strategy, {}, {}, transcript, session_id);
  llm::LlmClient& client = client_for(strategy.action_source);

  llm::ChatRequest request;
  request.messages.push_back(
      {llm::Role::kUser, prompt_for(Stage::kQuery, "action", state, {}, {}, thought)});
  for (int attempt = 0; attempt <= options_.reask_limit; ++attempt) {
    const llm::ChatResponse response =
        exchange(client, request, "query_action", transcript, session_id);
    if (auto query = sanitize_query(response.content, options_.max_query_chars)) {
      for (const QueryRound& round : state.history) {
        if (round.query == *query) {
          warn("duplicate query in session " + session_id + ": " + *query);
          break;
        }
      }
      return {*query, thought};
    }
    request.messages.push_back({llm::Role::kAssistant, response.content});
    request.messages.push_back({llm::Role::kUser, reask_instruction(Stage::kQuery)});
  }
  throw Error("query generation produced no usable query after " +
              std::to_string(options_.reask_limit) + " re-asks");
}

ClickDecision Agent::decide_clicks(const AgentState& state, const std::string& current_query,
                                   std::span<const SerpItem> serp,
                                   const StrategyConfig& strategy, TranscriptWriter* transcript,
                                   const std::string& session_id) {
  if (serp.empty()) throw Error("decide_clicks requires a non-empty SERP");
  const std::optional<std::string> thought =
      think(Stage::kClick, state, strategy, current_query, serp, transcript, session_id);
  llm::LlmClient& client = client_for(strategy.action_source);

  llm::ChatRequest request;
  request.messages.push_back(
      {llm::Role::kUser, prompt_for(Stage::kClick, "action", state, current_query, serp, thought)});
  for (int attempt = 0; attempt <= options_.reask_limit; ++attempt) {
    const llm::ChatResponse response =
        exchange(client, request, "click_action", transcript, session_id);
    if (auto ranks = parse_click_ranks(response.content, static_cast<int>(serp.size()),
                                       budget_.max_clicks_per_round)) {
      return {*ranks, thought};
    }
    request.messages.push_back({llm::Role::kAssistant, response.content});
    request.messages.push_back({llm::Role::kUser, reask_instruction(Stage::kClick)});
  }
  throw Error("click decision produced no usable rank list after " +
              std::to_string(options_.reask_limit) + " re-asks");
}

StopDecision Agent::decide_stop(const AgentState& state, const StrategyConfig& strategy,
                                TranscriptWriter* transcript, const std::string& session_id,
                                bool apply_budget) {
  const std::optional<std::string> thought =
      think(Stage::kStop, state, strategy, {}, {}, transcript, session_id);
  llm::LlmClient& client = client_for(strategy.action_source);

  llm::ChatRequest request;
  request.messages.push_back(
      {llm::Role::kUser, prompt_for(Stage::kStop, "action", state, {}, {}, thought)});
  std::optional<bool> decision;
  for (int attempt = 0; attempt <= options_.reask_limit; ++attempt) {
    const llm::ChatResponse response =
        exchange(client, request, "stop_action", transcript, session_id);
    decision = parse_stop_decision(response.content);
    if (decision) break;
    request.messages.push_back({llm::Role::kAssistant, response.content});
    request.messages.push_back({llm::Role::kUser, reask_instruction(Stage::kStop)});
  }
  if (!decision) {
    // Fail-safe termination: an unparseable stop decision ends the session.
    warn("unparseable stop decision in session " + session_id + "; defaulting to stop");
    decision = true;
  }
  if (apply_budget && state.round_index() >= budget_.max_rounds) {
    return {true, thought};
  }
  return {*decision, thought};
}

Session Agent::simulate_session(const SearchTask& task, const StrategyConfig& strategy,
                                const SerpStore& store, const std::string& session_id,
                                TranscriptWriter* transcript) {
  AgentState state;
  state.task = task;

  while (true) {
    const QueryDecision qd = generate_query(state, strategy, transcript, session_id);

    std::vector<SerpItem> serp;
    if (auto found = store.lookup(qd.query)) {
      serp = std::move(*found);
    } else if (options_.strict_serp) {
      throw Error("SERP store miss for query: " + qd.query);
    }

    QueryRound round;
    round.query = qd.query;
    round.query_thought = qd.thought;
    round.serp = serp;

    if (!serp.empty()) {
      const ClickDecision cd =
          decide_clicks(state, qd.query, serp, strategy, transcript, session_id);
      for (std::size_t i = 0; i < cd.ranks.size(); ++i) {
        ClickRecord click;
        click.rank = cd.ranks[i];
        if (i == 0) click.thought = cd.thought;
        round.clicks.push_back(std::move(click));
        const SerpItem& item = serp[static_cast<std::size_t>(cd.ranks[i] - 1)];
        state.observations.push_back(item.snippet);
        if (item.content) state.observations.push_back(*item.content);
      }
    }

    state.history.push_back(std::move(round));
    const StopDecision sd = decide_stop(state, strategy, transcript, session_id);
    state.history.back().stop_thought = sd.thought;
    if (sd.stop) break;
  }

  Session session;
  session.session_id = session_id;
  session.user_id = "sim:" + strategy.name();
  session.task_id = task.task_id;
  session.rounds = std::move(state.history);

  const auto violations = validate_session(session);
  if (!violations.empty()) {
    throw Error("simulated session violates schema at " + violations.front().path + ": " +
                violations.front().message);
  }
  return session;
}

std::string Agent::session_id_for(const StrategyConfig& strategy, const std::string& task_id,
                                  int rep) {
  return strategy.name() + "-" + task_id + "-r" + std::to_string(rep);
}

SimulationRun simulate_run(Agent& agent, const StrategyConfig& strategy,
                           const std::map<std::string, SearchTask>& tasks,
                           const SerpStore& store, int reps, std::uint64_t seed,
                           TranscriptWriter* transcript, const std::string& transcript_ref) {
  SimulationRun run;
  run.strategy = strategy;
  run.seed = seed;
  run.transcript_ref = transcript_ref;
  for (const auto& [task_id, task] : tasks) {
    for (int rep = 0; rep < reps; ++rep) {
      run.sessions.push_back(agent.simulate_session(
          task, strategy, store, Agent::session_id_for(strategy, task_id, rep), transcript));
    }
  }
  return run;
}

}  // namespace usim::agent
