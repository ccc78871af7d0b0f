#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "cli_config.hpp"
#include "usim/agent/teacher_forcing.hpp"
#include "usim/baselines/stopping.hpp"
#include "usim/baselines/term_sampling.hpp"
#include "usim/click/model_io.hpp"
#include "usim/click/models.hpp"
#include "usim/common/error.hpp"
#include "usim/common/jsonl.hpp"
#include "usim/common/parallel.hpp"
#include "usim/eval/report_io.hpp"
#include "usim/model/adapters.hpp"
#include "usim/model/session_log.hpp"
#include "usim/model/sft_export.hpp"
#include "usim/model/stats.hpp"
#include "usim/text/tokenize.hpp"

namespace {

using namespace usim;

constexpr int kExitOk = 0;
constexpr int kExitData = 2;
constexpr int kExitUsage = 64;
constexpr int kExitInternal = 70;

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open file: " + path);
  return in;
}

Dataset load_dataset(const std::string& sessions_path, const std::string& tasks_path,
                     const std::string& name = "dataset") {
  std::optional<std::map<std::string, SearchTask>> tasks;
  if (!tasks_path.empty()) {
    auto in = open_input(tasks_path);
    tasks = parse_task_file(in);
  }
  auto in = open_input(sessions_path);
  return parse_session_log(in, tasks ? &*tasks : nullptr, name);
}

std::string serialize_tasks(const std::map<std::string, SearchTask>& tasks) {
  std::ostringstream out;
  write_task_file(out, tasks);
  return out.str();
}

eval::Embedder make_embedder(const cli::RunConfig& config,
                             std::shared_ptr<llm::LlmClient>& holder) {
  llm::ProviderConfig cfg;
  if (!config.embedding_provider.empty()) {
    cfg = config.provider(config.embedding_provider);
  } else {
    cfg.provider_id = "hash64";
    cfg.base_url = "hash://64";
  }
  holder = std::make_shared<llm::LlmClient>(cfg, std::shared_ptr<llm::DiskCache>{});
  return [holder](std::string_view text, llm::EmbeddingGranularity granularity) {
    return holder->embed(text, granularity);
  };
}

void write_report(const eval::MetricReport& report, const std::string& out_path) {
  const std::string text = eval::report_to_json(report).dump(2) + "\n";
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
  } else {
    atomic_write_file(out_path, text);
  }
}

// ---------------------------------------------------------------- import --

struct ImportArgs {
  std::string format = "canonical";
  std::string input;
  std::string tasks;
  std::string out_sessions;
  std::string out_tasks;
  std::string name = "dataset";
};

int cmd_import(const ImportArgs& args) {
  Dataset dataset;
  if (args.format == "canonical") {
    dataset = load_dataset(args.input, args.tasks, args.name);
  } else {
    auto in = open_input(args.input);
    dataset = import_dataset(dataset_format_from_string(args.format), in, args.name);
  }
  atomic_write_file(args.out_sessions, serialize_session_log(dataset));
  if (!args.out_tasks.empty()) {
    atomic_write_file(args.out_tasks, serialize_tasks(dataset.tasks));
  }
  std::cerr << "imported " << dataset.sessions.size() << " sessions, " << dataset.tasks.size()
            << " tasks\n";
  return kExitOk;
}

// -------------------------------------------------------------- validate --

int cmd_validate(const std::string& sessions_path, const std::string& tasks_path) {
  try {
    const Dataset dataset = load_dataset(sessions_path, tasks_path);
    const auto violations = validate_dataset(dataset);
    if (violations.empty()) {
      std::cout << "ok: " << dataset.sessions.size() << " sessions\n";
      return kExitOk;
    }
    for (const Violation& v : violations) std::cerr << v.path << ": " << v.message << "\n";
    return kExitData;
  } catch (const ValidationError& e) {
    std::cerr << e.what() << "\n";
    return kExitData;
  }
}

// ----------------------------------------------------------------- stats --

int cmd_stats(const std::string& sessions_path, const std::string& tasks_path,
              int rating_threshold, const std::string& out_path) {
  const Dataset dataset = load_dataset(sessions_path, tasks_path);
  StatsOptions options;
  options.scale.threshold = rating_threshold;
  const DatasetStats stats = compute_stats(dataset, options);
  const nlohmann::ordered_json doc{
      {"n_tasks", stats.n_tasks},
      {"n_sessions", stats.n_sessions},
      {"n_queries", stats.n_queries},
      {"n_clicks", stats.n_clicks},
      {"n_thoughts",
       {{"query", stats.n_thoughts.query},
        {"click", stats.n_thoughts.click},
        {"stop", stats.n_thoughts.stop}}},
      {"avg_queries_per_session", stats.avg_queries_per_session},
      {"avg_satisfying_clicks_per_session", stats.avg_satisfying_clicks_per_session},
      {"avg_frustrating_run_length", stats.avg_frustrating_run_length}};
  const std::string text = doc.dump(2) + "\n";
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
  } else {
    atomic_write_file(out_path, text);
  }
  return kExitOk;
}

// ------------------------------------------------------------ export-sft --

int cmd_export_sft(const cli::RunConfig& config, const std::string& sessions_path,
                   const std::string& tasks_path, const std::string& stage_name,
                   const std::string& templates_dir, const std::string& out_path) {
  const Dataset dataset = load_dataset(sessions_path, tasks_path);
  const Stage stage = stage_from_string(stage_name);
  const TemplateSet templates =
      TemplateSet::load_dir(templates_dir.empty() ? config.templates_dir : templates_dir);
  const auto records = export_sft_records(dataset, stage, templates.get(stage, "thought"));
  std::ostringstream out;
  write_sft_records(out, records);
  atomic_write_file(out_path, out.str());
  std::cerr << "exported " << records.size() << " " << stage_name << "-stage records\n";
  return kExitOk;
}

// -------------------------------------------------------------- simulate --

struct SimulateArgs {
  std::string strategy;
  std::string tasks;
  std::string serp_store;
  std::string out_sessions;
  std::string out_transcript;
  int reps = 1;
  bool strict_serp = false;
};

int cmd_simulate(const cli::RunConfig& config, const SimulateArgs& args) {
  const agent::StrategyConfig strategy = agent::StrategyConfig::parse(args.strategy);
  auto tasks_in = open_input(args.tasks);
  const auto tasks = parse_task_file(tasks_in);
  auto store_in = open_input(args.serp_store);
  const agent::SerpStore store = agent::SerpStore::load(store_in);
  const auto cache = config.make_cache();

  struct Job {
    const SearchTask* task;
    int rep;
    std::string session_id;
  };
  std::vector<Job> jobs;
  for (const auto& [task_id, task] : tasks) {
    for (int rep = 0; rep < args.reps; ++rep) {
      jobs.push_back({&task, rep, agent::Agent::session_id_for(strategy, task_id, rep)});
    }
  }

  std::vector<Session> sessions(jobs.size());
  std::vector<std::string> transcripts(jobs.size());
  std::vector<std::string> failures(jobs.size());
  parallel_chunks(jobs.size(), config.jobs, [&](std::size_t begin, std::size_t end, std::size_t) {
    for (std::size_t i = begin; i < end; ++i) {
      try {
        // Fresh clients per session: scripted mock providers restart their
        // response sequences, so output does not depend on scheduling.
        agent::AgentOptions options;
        options.strict_serp = args.strict_serp;
        agent::Agent agent(TemplateSet::load_dir(config.templates_dir),
                           config.make_clients(cache), config.budget, options);
        std::ostringstream buffer;
        agent::TranscriptWriter writer(buffer);
        sessions[i] =
            agent.simulate_session(*jobs[i].task, strategy, store, jobs[i].session_id, &writer);
        transcripts[i] = buffer.str();
        for (const std::string& warning : agent.take_warnings()) {
          std::cerr << "warning: " << warning << "\n";
        }
      } catch (const std::exception& e) {
        failures[i] = e.what();
      }
    }
  });
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    if (!failures[i].empty()) {
      throw Error("simulation of " + jobs[i].session_id + " failed: " + failures[i]);
    }
  }

  std::ostringstream sessions_out;
  std::ostringstream transcript_out;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    sessions_out << session_to_json(sessions[i]).dump() << "\n";
    transcript_out << transcripts[i];
  }
  atomic_write_file(args.out_sessions, sessions_out.str());
  if (!args.out_transcript.empty()) {
    atomic_write_file(args.out_transcript, transcript_out.str());
  }
  std::cerr << "simulated " << sessions.size() << " sessions\n";
  return kExitOk;
}

// ------------------------------------------------------------- fit-click --

struct FitClickArgs {
  std::string model = "pbm";
  std::string sessions;
  std::string tasks;
  std::string out;
  std::string report;
  int max_iters = 50;
  double tol = 1e-6;
  double gamma_continue = 1.0;
  bool normalized = false;
};

click::ClickModelParams fit_click_model(const std::string& model, const click::ClickLog& log,
                                        const click::TrainConfig& train, double gamma_continue,
                                        click::TrainReport* report_out = nullptr) {
  click::ClickModelParams params;
  click::TrainReport report;
  if (model == "pbm") {
    auto [p, r] = click::fit_pbm(log, train);
    params = std::move(p);
    report = std::move(r);
  } else if (model == "ubm") {
    auto [p, r] = click::fit_ubm(log, train);
    params = std::move(p);
    report = std::move(r);
  } else if (model == "dcm") {
    params = click::fit_dcm(log);
    report.log_likelihoods.push_back(click::log_likelihood(params, log));
  } else if (model == "dbn") {
    auto [p, r] = click::fit_dbn(log, gamma_continue, train);
    params = std::move(p);
    report = std::move(r);
  } else {
    throw UsageError("unknown click model: " + model);
  }
  if (report_out != nullptr) *report_out = std::move(report);
  return params;
}

int cmd_fit_click(const cli::RunConfig& config, const FitClickArgs& args) {
  const Dataset dataset = load_dataset(args.sessions, args.tasks);
  click::ExtractOptions extract;
  extract.normalize_queries = args.normalized;
  const click::ClickLog log = extract_click_log(dataset, extract);
  if (log.impressions.empty()) throw Error("click log is empty");

  click::TrainConfig train;
  train.max_iters = args.max_iters;
  train.tol = args.tol;
  train.jobs = config.jobs;

  click::TrainReport report;
  const click::ClickModelParams params =
      fit_click_model(args.model, log, train, args.gamma_continue, &report);

  std::ostringstream out;
  click::write_params(out, params);
  atomic_write_file(args.out, out.str());

  if (!args.report.empty()) {
    const nlohmann::ordered_json doc{{"model", args.model},
                                     {"iterations", report.iterations},
                                     {"converged", report.converged},
                                     {"wall_seconds", report.wall_seconds},
                                     {"log_likelihoods", report.log_likelihoods},
                                     {"notes", report.notes}};
    atomic_write_file(args.report, doc.dump(2) + "\n");
  }
  std::cerr << "fitted " << args.model << " on " << log.impressions.size() << " impressions\n";
  return kExitOk;
}

// ------------------------------------------------------------ eval-query --

struct EvalQueryArgs {
  std::string sessions;
  std::string tasks;
  std::string predictions;
  std::string strategy;
  std::string baseline;
  int query_length = 0;  // 0 = match the true query's token count
  std::string mode = "full";
  std::string first_query = "predicted";  // or "given"
  std::string out;
  std::string dump_predictions;
  std::string method;
};

std::vector<eval::QueryPrediction> baseline_query_predictions(const cli::RunConfig& config,
                                                              const Dataset& dataset,
                                                              const std::string& mode_name,
                                                              int fixed_length) {
  const baselines::SampleMode mode = baselines::sample_mode_from_string(mode_name);
  std::unordered_set<std::string> stopwords;
  if (!config.stopwords_path.empty()) {
    auto in = open_input(config.stopwords_path);
    stopwords = baselines::load_stopwords(in);
  }

  // Corpus per task: the task description plus every SERP text recorded for
  // that task's sessions.
  std::map<std::string, std::vector<std::string>> docs_by_task;
  for (const Session& session : dataset.sessions) {
    auto& docs = docs_by_task[session.task_id];
    for (const QueryRound& round : session.rounds) {
      for (const SerpItem& item : round.serp) {
        docs.push_back(item.title);
        docs.push_back(item.snippet);
        if (item.content) docs.push_back(*item.content);
      }
    }
  }
  std::map<std::string, baselines::TermCorpus> corpora;
  for (const auto& [task_id, task] : dataset.tasks) {
    const auto docs_it = docs_by_task.find(task_id);
    corpora.emplace(task_id,
                    baselines::build_corpus(
                        task, docs_it == docs_by_task.end() ? std::vector<std::string>{} : docs_it->second,
                        stopwords));
  }

  std::mt19937_64 rng(config.seed);
  std::vector<eval::QueryPrediction> predictions;
  for (const Session& session : dataset.sessions) {
    const baselines::TermCorpus& corpus = corpora.at(session.task_id);
    for (std::size_t r = 0; r < session.rounds.size(); ++r) {
      int length = fixed_length;
      if (length <= 0) {
        length = static_cast<int>(text::tokenize(session.rounds[r].query).size());
      }
      length = std::clamp(length, 1, static_cast<int>(corpus.vocab.size()));
      predictions.push_back({session.session_id, static_cast<int>(r),
                             baselines::sample_query(corpus, length, mode, rng)});
    }
  }
  return predictions;
}

int cmd_eval_query(const cli::RunConfig& config, const EvalQueryArgs& args) {
  const Dataset dataset = load_dataset(args.sessions, args.tasks);

  std::vector<eval::QueryPrediction> predictions;
  std::string method = args.method;
  if (!args.predictions.empty()) {
    auto in = open_input(args.predictions);
    predictions = eval::read_query_predictions(in);
    if (method.empty()) method = "predictions";
  } else if (!args.baseline.empty()) {
    predictions = baseline_query_predictions(config, dataset, args.baseline, args.query_length);
    if (method.empty()) method = args.baseline;
  } else if (!args.strategy.empty()) {
    const agent::StrategyConfig strategy = agent::StrategyConfig::parse(args.strategy);
    agent::Agent agent(TemplateSet::load_dir(config.templates_dir),
                       config.make_clients(config.make_cache()), config.budget);
    agent::TeacherForcingOptions forcing;
    forcing.predict_first_query = args.first_query != "given";
    predictions = agent::teacher_forced_queries(dataset, agent, strategy, forcing);
    if (method.empty()) method = strategy.name();
  } else {
    throw UsageError("eval-query needs --predictions, --strategy, or --baseline");
  }

  if (!args.dump_predictions.empty()) {
    std::ostringstream out;
    eval::write_query_predictions(out, predictions);
    atomic_write_file(args.dump_predictions, out.str());
  }

  std::shared_ptr<llm::LlmClient> embed_client;
  const eval::Embedder embedder = make_embedder(config, embed_client);
  eval::QueryEvalConfig eval_config;
  eval_config.mode =
      args.mode == "one_to_one_only" ? eval::QueryEvalMode::kOneToOneOnly : eval::QueryEvalMode::kFull;
  eval_config.mauve.seed = config.seed;
  eval::MetricReport report = evaluate_queries(dataset, predictions, embedder, eval_config);
  report.method = method;
  write_report(report, args.out);
  return kExitOk;
}

// ------------------------------------------------------------ eval-click --

struct EvalClickArgs {
  std::string sessions;
  std::string tasks;
  std::string predictions;
  std::string params;
  std::string strategy;
  std::string model;      // with --holdout: fit this model per fold
  int holdout = 0;        // number of cross-validation folds (0 = off)
  double gamma_continue = 1.0;
  bool normalized = false;
  std::string out;
  std::string dump_predictions;
  std::string method;
};

// Predictions for one set of rounds from fitted parameters.
void predict_rounds(const click::ClickModelParams& params, const Session& session,
                    bool normalized, std::vector<eval::ClickPrediction>& out) {
  for (std::size_t r = 0; r < session.rounds.size(); ++r) {
    const QueryRound& round = session.rounds[r];
    if (round.serp.empty()) continue;
    const std::string query_key =
        normalized ? click::normalize_query_key(round.query) : round.query;
    eval::ClickPrediction pred;
    pred.session_id = session.session_id;
    pred.round_index = static_cast<int>(r);
    pred.probs = click::predict_click_probs(params, query_key, click::make_doc_keys(round.serp));
    out.push_back(std::move(pred));
  }
}

int cmd_eval_click(const cli::RunConfig& config, const EvalClickArgs& args) {
  const Dataset dataset = load_dataset(args.sessions, args.tasks);

  std::vector<eval::ClickPrediction> predictions;
  std::string method = args.method;
  if (!args.predictions.empty()) {
    auto in = open_input(args.predictions);
    predictions = eval::read_click_predictions(in);
    if (method.empty()) method = "predictions";
  } else if (args.holdout > 0) {
    if (args.model.empty()) {
      throw UsageError("--holdout needs --model to fit per fold");
    }
    if (args.holdout < 2 || args.holdout > static_cast<int>(dataset.sessions.size())) {
      throw UsageError("--holdout folds must be in [2, #sessions]");
    }
    click::TrainConfig train;
    train.jobs = config.jobs;
    click::ExtractOptions extract;
    extract.normalize_queries = args.normalized;
    // Fold by session: fit on the complement, predict the held-out fold.
    for (int fold = 0; fold < args.holdout; ++fold) {
      Dataset train_split;
      train_split.tasks = dataset.tasks;
      std::vector<const Session*> held_out;
      for (std::size_t s = 0; s < dataset.sessions.size(); ++s) {
        if (static_cast<int>(s % static_cast<std::size_t>(args.holdout)) == fold) {
          held_out.push_back(&dataset.sessions[s]);
        } else {
          train_split.sessions.push_back(dataset.sessions[s]);
        }
      }
      const click::ClickLog log = extract_click_log(train_split, extract);
      if (log.impressions.empty()) throw Error("fold " + std::to_string(fold) + " has no training impressions");
      const click::ClickModelParams params =
          fit_click_model(args.model, log, train, args.gamma_continue);
      for (const Session* session : held_out) {
        predict_rounds(params, *session, args.normalized, predictions);
      }
    }
    if (method.empty()) {
      method = args.model + " (" + std::to_string(args.holdout) + "-fold)";
    }
  } else if (!args.params.empty()) {
    auto in = open_input(args.params);
    const click::ClickModelParams params = click::read_params(in);
    if (method.empty()) method = click::model_name(params);
    for (const Session& session : dataset.sessions) {
      predict_rounds(params, session, args.normalized, predictions);
    }
  } else if (!args.strategy.empty()) {
    const agent::StrategyConfig strategy = agent::StrategyConfig::parse(args.strategy);
    agent::Agent agent(TemplateSet::load_dir(config.templates_dir),
                       config.make_clients(config.make_cache()), config.budget);
    predictions = agent::teacher_forced_clicks(dataset, agent, strategy);
    if (method.empty()) method = strategy.name();
  } else {
    throw UsageError("eval-click needs --predictions, --params, --strategy, or --model with --holdout");
  }

  if (!args.dump_predictions.empty()) {
    std::ostringstream out;
    eval::write_click_predictions(out, predictions);
    atomic_write_file(args.dump_predictions, out.str());
  }

  eval::MetricReport report = evaluate_clicks(dataset, predictions);
  report.method = method;
  write_report(report, args.out);
  return kExitOk;
}

// ------------------------------------------------------------- eval-stop --

struct EvalStopArgs {
  std::string sessions;
  std::string tasks;
  std::string predictions;
  std::string rule;
  std::string strategy;
  int rating_threshold = 4;
  std::string out;
  std::string dump_predictions;
  std::string method;
};

int cmd_eval_stop(const cli::RunConfig& config, const EvalStopArgs& args) {
  const Dataset dataset = load_dataset(args.sessions, args.tasks);

  std::vector<eval::StopPrediction> predictions;
  std::vector<std::string> extra_flags;
  std::string method = args.method;
  if (!args.predictions.empty()) {
    auto in = open_input(args.predictions);
    predictions = eval::read_stop_predictions(in);
    if (method.empty()) method = "predictions";
  } else if (!args.rule.empty()) {
    const baselines::StopRule rule = baselines::stop_rule_from_string(args.rule);
    baselines::StoppingOptions options;
    options.scale.threshold = args.rating_threshold;
    const baselines::StoppingParams params = estimate_stopping_params(dataset, options);
    for (const Session& session : dataset.sessions) {
      std::vector<QueryRound> prefix;
      for (std::size_t r = 0; r < session.rounds.size(); ++r) {
        prefix.push_back(session.rounds[r]);
        predictions.push_back({session.session_id, static_cast<int>(r),
                               baselines::stop_decision(prefix, rule, params, options)});
      }
    }
    if (method.empty()) method = args.rule;
    // Echo the estimated thresholds into the report.
    std::ostringstream note;
    note << "stopping params: k=" << params.fixed_depth_k << " s=" << params.satisfaction_s
         << " f=" << params.frustration_f
         << (params.satisfaction_fallback ? " (satisfaction fell back to click average)" : "");
    extra_flags.push_back(note.str());
  } else if (!args.strategy.empty()) {
    const agent::StrategyConfig strategy = agent::StrategyConfig::parse(args.strategy);
    agent::Agent agent(TemplateSet::load_dir(config.templates_dir),
                       config.make_clients(config.make_cache()), config.budget);
    predictions = agent::teacher_forced_stops(dataset, agent, strategy);
    if (method.empty()) method = strategy.name();
  } else {
    throw UsageError("eval-stop needs --predictions, --rule, or --strategy");
  }

  if (!args.dump_predictions.empty()) {
    std::ostringstream out;
    eval::write_stop_predictions(out, predictions);
    atomic_write_file(args.dump_predictions, out.str());
  }

  eval::MetricReport report = evaluate_stops(dataset, predictions);
  report.method = method;
  report.flags.insert(report.flags.end(), extra_flags.begin(), extra_flags.end());
  write_report(report, args.out);
  return kExitOk;
}

// ---------------------------------------------------------------- report --

int cmd_report(const std::string& stage, const std::vector<std::string>& inputs,
               const std::string& out_path) {
  std::vector<eval::MetricReport> reports;
  for (const std::string& path : inputs) {
    reports.push_back(eval::report_from_json(nlohmann::json::parse(read_file(path))));
  }
  const std::string table = eval::render_report_table(stage, reports);
  if (out_path.empty() || out_path == "-") {
    std::cout << table;
  } else {
    atomic_write_file(out_path, table);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"search-session user simulation and evaluation"};
  app.require_subcommand(1);

  std::string config_path;
  std::uint64_t seed_override = 0;
  bool seed_set = false;
  std::string cache_dir_override;
  int jobs_override = 0;
  app.add_option("--config", config_path, "structured config file (JSON)");
  app.add_option("--seed", seed_override, "seed override")->each([&](const std::string&) {
    seed_set = true;
  });
  app.add_option("--cache-dir", cache_dir_override, "response cache directory");
  app.add_option("--jobs", jobs_override, "worker parallelism");

  const auto run_config = [&]() {
    cli::RunConfig config;
    if (!config_path.empty()) config = cli::RunConfig::load_file(config_path);
    if (seed_set) config.seed = seed_override;
    if (!cache_dir_override.empty()) config.cache_dir = cache_dir_override;
    if (jobs_override > 0) config.jobs = jobs_override;
    return config;
  };

  int exit_code = kExitOk;
  const auto guard = [&exit_code](auto&& fn) {
    return [&exit_code, fn = std::forward<decltype(fn)>(fn)]() {
      try {
        exit_code = fn();
      } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        exit_code = kExitUsage;
      } catch (const ParseError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        exit_code = kExitData;
      } catch (const ValidationError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        exit_code = kExitData;
      } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        exit_code = kExitData;
      } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        exit_code = kExitInternal;
      }
    };
  };

  // import
  auto import_args = std::make_shared<ImportArgs>();
  CLI::App* import_cmd = app.add_subcommand("import", "import a dataset into the canonical log");
  import_cmd->add_option("--format", import_args->format, "canonical | kdd19 | tiangong");
  import_cmd->add_option("--in", import_args->input, "input file")->required();
  import_cmd->add_option("--tasks", import_args->tasks, "task file (canonical input only)");
  import_cmd->add_option("--out-sessions", import_args->out_sessions, "output session log")
      ->required();
  import_cmd->add_option("--out-tasks", import_args->out_tasks, "output task file");
  import_cmd->add_option("--name", import_args->name, "dataset name");
  import_cmd->callback(guard([&, import_args] { return cmd_import(*import_args); }));

  // validate
  auto validate_sessions = std::make_shared<std::string>();
  auto validate_tasks = std::make_shared<std::string>();
  CLI::App* validate_cmd = app.add_subcommand("validate", "check a session log against the schema");
  validate_cmd->add_option("--sessions", *validate_sessions, "session log")->required();
  validate_cmd->add_option("--tasks", *validate_tasks, "task file");
  validate_cmd->callback(
      guard([&, validate_sessions, validate_tasks] {
        return cmd_validate(*validate_sessions, *validate_tasks);
      }));

  // stats
  auto stats_sessions = std::make_shared<std::string>();
  auto stats_tasks = std::make_shared<std::string>();
  auto stats_threshold = std::make_shared<int>(4);
  auto stats_out = std::make_shared<std::string>();
  CLI::App* stats_cmd = app.add_subcommand("stats", "dataset statistics");
  stats_cmd->add_option("--sessions", *stats_sessions, "session log")->required();
  stats_cmd->add_option("--tasks", *stats_tasks, "task file");
  stats_cmd->add_option("--rating-threshold", *stats_threshold, "satisfying-click threshold");
  stats_cmd->add_option("--out", *stats_out, "output file (default stdout)");
  stats_cmd->callback(guard([&, stats_sessions, stats_tasks, stats_threshold, stats_out] {
    return cmd_stats(*stats_sessions, *stats_tasks, *stats_threshold, *stats_out);
  }));

  // export-sft
  auto sft_sessions = std::make_shared<std::string>();
  auto sft_tasks = std::make_shared<std::string>();
  auto sft_stage = std::make_shared<std::string>("query");
  auto sft_templates = std::make_shared<std::string>();
  auto sft_out = std::make_shared<std::string>();
  CLI::App* sft_cmd = app.add_subcommand("export-sft", "export fine-tuning records");
  sft_cmd->add_option("--sessions", *sft_sessions, "session log")->required();
  sft_cmd->add_option("--tasks", *sft_tasks, "task file");
  sft_cmd->add_option("--stage", *sft_stage, "query | click | stop")->required();
  sft_cmd->add_option("--templates", *sft_templates, "template directory (overrides config)");
  sft_cmd->add_option("--out", *sft_out, "output file")->required();
  sft_cmd->callback(guard([&, sft_sessions, sft_tasks, sft_stage, sft_templates, sft_out] {
    return cmd_export_sft(run_config(), *sft_sessions, *sft_tasks, *sft_stage, *sft_templates,
                          *sft_out);
  }));

  // simulate
  auto sim_args = std::make_shared<SimulateArgs>();
  CLI::App* sim_cmd = app.add_subcommand("simulate", "run full-session simulations");
  sim_cmd->add_option("--strategy", sim_args->strategy, "{thought}-{action} strategy name")
      ->required();
  sim_cmd->add_option("--tasks", sim_args->tasks, "task file")->required();
  sim_cmd->add_option("--serp-store", sim_args->serp_store, "recorded SERP store")->required();
  sim_cmd->add_option("--out-sessions", sim_args->out_sessions, "output session log")->required();
  sim_cmd->add_option("--out-transcript", sim_args->out_transcript, "provider exchange log");
  sim_cmd->add_option("--reps", sim_args->reps, "repetitions per task");
  sim_cmd->add_flag("--strict-serp", sim_args->strict_serp, "error on SERP store misses");
  sim_cmd->callback(guard([&, sim_args] { return cmd_simulate(run_config(), *sim_args); }));

  // fit-click
  auto fit_args = std::make_shared<FitClickArgs>();
  CLI::App* fit_cmd = app.add_subcommand("fit-click", "fit a probabilistic click model");
  fit_cmd->add_option("--model", fit_args->model, "pbm | ubm | dcm | dbn")->required();
  fit_cmd->add_option("--sessions", fit_args->sessions, "session log")->required();
  fit_cmd->add_option("--tasks", fit_args->tasks, "task file");
  fit_cmd->add_option("--out", fit_args->out, "fitted parameter file")->required();
  fit_cmd->add_option("--report", fit_args->report, "training report JSON");
  fit_cmd->add_option("--max-iters", fit_args->max_iters, "EM iteration cap");
  fit_cmd->add_option("--tol", fit_args->tol, "log-likelihood convergence tolerance");
  fit_cmd->add_option("--gamma-continue", fit_args->gamma_continue, "DBN continuation probability");
  fit_cmd->add_flag("--normalized", fit_args->normalized, "normalize query keys");
  fit_cmd->callback(guard([&, fit_args] { return cmd_fit_click(run_config(), *fit_args); }));

  // eval-query
  auto eq_args = std::make_shared<EvalQueryArgs>();
  CLI::App* eq_cmd = app.add_subcommand("eval-query", "evaluate query predictions");
  eq_cmd->add_option("--sessions", eq_args->sessions, "session log")->required();
  eq_cmd->add_option("--tasks", eq_args->tasks, "task file");
  eq_cmd->add_option("--predictions", eq_args->predictions, "prediction file");
  eq_cmd->add_option("--strategy", eq_args->strategy, "teacher-forced strategy");
  eq_cmd->add_option("--baseline", eq_args->baseline, "random | frequent term sampling");
  eq_cmd->add_option("--query-length", eq_args->query_length,
                     "sampled query length (default: match the true query)");
  eq_cmd->add_option("--mode", eq_args->mode, "full | one_to_one_only");
  eq_cmd->add_option("--first-query", eq_args->first_query,
                     "predicted | given (teacher forcing only)");
  eq_cmd->add_option("--out", eq_args->out, "report JSON output (default stdout)");
  eq_cmd->add_option("--dump-predictions", eq_args->dump_predictions, "write predictions here");
  eq_cmd->add_option("--method", eq_args->method, "method label in the report");
  eq_cmd->callback(guard([&, eq_args] { return cmd_eval_query(run_config(), *eq_args); }));

  // eval-click
  auto ec_args = std::make_shared<EvalClickArgs>();
  CLI::App* ec_cmd = app.add_subcommand("eval-click", "evaluate click predictions");
  ec_cmd->add_option("--sessions", ec_args->sessions, "session log")->required();
  ec_cmd->add_option("--tasks", ec_args->tasks, "task file");
  ec_cmd->add_option("--predictions", ec_args->predictions, "prediction file");
  ec_cmd->add_option("--params", ec_args->params, "fitted click-model parameter file");
  ec_cmd->add_option("--strategy", ec_args->strategy, "teacher-forced strategy");
  ec_cmd->add_option("--model", ec_args->model, "click model to fit per fold (with --holdout)");
  ec_cmd->add_option("--holdout", ec_args->holdout, "k-fold cross-validation over sessions");
  ec_cmd->add_option("--gamma-continue", ec_args->gamma_continue,
                     "DBN continuation probability (with --model dbn)");
  ec_cmd->add_flag("--normalized", ec_args->normalized, "normalize query keys");
  ec_cmd->add_option("--out", ec_args->out, "report JSON output (default stdout)");
  ec_cmd->add_option("--dump-predictions", ec_args->dump_predictions, "write predictions here");
  ec_cmd->add_option("--method", ec_args->method, "method label in the report");
  ec_cmd->callback(guard([&, ec_args] { return cmd_eval_click(run_config(), *ec_args); }));

  // eval-stop
  auto es_args = std::make_shared<EvalStopArgs>();
  CLI::App* es_cmd = app.add_subcommand("eval-stop", "evaluate stopping predictions");
  es_cmd->add_option("--sessions", es_args->sessions, "session log")->required();
  es_cmd->add_option("--tasks", es_args->tasks, "task file");
  es_cmd->add_option("--predictions", es_args->predictions, "prediction file");
  es_cmd->add_option("--rule", es_args->rule,
                     "fixed_depth | satisfaction | frustration | s_and_f");
  es_cmd->add_option("--strategy", es_args->strategy, "teacher-forced strategy");
  es_cmd->add_option("--rating-threshold", es_args->rating_threshold,
                     "satisfying-click threshold");
  es_cmd->add_option("--out", es_args->out, "report JSON output (default stdout)");
  es_cmd->add_option("--dump-predictions", es_args->dump_predictions, "write predictions here");
  es_cmd->add_option("--method", es_args->method, "method label in the report");
  es_cmd->callback(guard([&, es_args] { return cmd_eval_stop(run_config(), *es_args); }));

  // report
  auto report_stage = std::make_shared<std::string>();
  auto report_inputs = std::make_shared<std::vector<std::string>>();
  auto report_out = std::make_shared<std::string>();
  CLI::App* report_cmd = app.add_subcommand("report", "render a methods-by-metrics table");
  report_cmd->add_option("--stage", *report_stage, "query | click | stop")->required();
  report_cmd->add_option("--out", *report_out, "output file (default stdout)");
  report_cmd->add_option("reports", *report_inputs, "MetricReport JSON files")->required();
  report_cmd->callback(guard([&, report_stage, report_inputs, report_out] {
    return cmd_report(*report_stage, *report_inputs, *report_out);
  }));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }
  return exit_code;
}
