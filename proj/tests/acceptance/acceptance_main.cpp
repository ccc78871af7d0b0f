// Acceptance harness: runs every acceptance criterion at its stated
// tolerance and prints one PASS/FAIL line per criterion. Exits non-zero if
// any criterion fails. Dataset-dependent checks are skipped unless the
// corresponding environment variables point at local downloads.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "support/fixtures.hpp"
#include "support/stopping_cases.hpp"
#include "support/synthetic_clicks.hpp"
#include "usim/agent/strategy.hpp"
#include "usim/agent/transcript.hpp"
#include "usim/click/models.hpp"
#include "usim/eval/evaluate.hpp"
#include "usim/eval/metrics.hpp"
#include "usim/llm/mock_provider.hpp"
#include "usim/model/adapters.hpp"
#include "usim/model/session_log.hpp"
#include "usim/model/sft_export.hpp"
#include "usim/model/stats.hpp"
#include "usim/prompt/template.hpp"

namespace {

using namespace usim;
using nlohmann::json;

struct Check {
  bool passed = true;
  bool skipped = false;
  std::string detail;

  void require(bool condition, const std::string& what) {
    if (!condition) {
      passed = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

int g_failures = 0;

void run_criterion(const std::string& name, const std::function<void(Check&)>& body) {
  Check check;
  try {
    body(check);
  } catch (const std::exception& e) {
    check.passed = false;
    check.detail = std::string("exception: ") + e.what();
  }
  const char* verdict = check.skipped ? "SKIP" : (check.passed ? "PASS" : "FAIL");
  std::cout << "[" << verdict << "] " << name;
  if (!check.detail.empty()) std::cout << " -- " << check.detail;
  std::cout << "\n" << std::flush;
  if (!check.passed && !check.skipped) ++g_failures;
}

std::string shell_quote(const std::string& s) { return "'" + s + "'"; }

int run_cli(const std::string& args) {
  const std::string command = std::string(USIM_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  return WEXITSTATUS(std::system(command.c_str()));
}

// ------------------------------------------------- 1. synthetic recovery --

void criterion_recovery(Check& check) {
  using namespace usim::testing;
  const auto started = std::chrono::steady_clock::now();

  {  // PBM: gamma*alpha products within 0.05 on 50k impressions.
    const std::vector<double> gamma{0.9, 0.6, 0.3};
    const auto pool = make_pool(3, 3, {0.2, 0.5, 0.8});
    const click::ClickLog log = sample_pbm(pool, gamma, 50000, 42);
    click::TrainConfig config;
    config.max_iters = 100;
    const auto [params, report] = click::fit_pbm(log, config);
    double worst = 0.0;
    for (const auto& [query, docs] : pool.docs) {
      std::vector<std::string> keys;
      for (const auto& [doc, alpha] : docs) keys.push_back(doc);
      const auto probs = click::predict_click_probs(params, query, keys);
      for (std::size_t r = 0; r < docs.size(); ++r) {
        worst = std::max(worst, std::abs(probs[r] - gamma[r] * docs[r].second));
      }
    }
    check.require(worst <= 0.05, "pbm product L-inf " + std::to_string(worst) + " > 0.05");
  }

  {  // UBM on observed contexts within 0.07.
    const std::vector<std::vector<double>> gamma{{0.95}, {0.65, 0.9}, {0.4, 0.6, 0.85}};
    const auto pool = make_pool(3, 3, {0.3, 0.55, 0.8});
    const click::ClickLog log = sample_ubm(pool, gamma, 50000, 7);
    click::TrainConfig config;
    config.max_iters = 150;
    const auto [params, report] = click::fit_ubm(log, config);
    std::map<std::pair<int, int>, int> support;
    for (const click::Impression& imp : log.impressions) {
      int prev = 0;
      for (std::size_t r = 0; r < imp.clicks.size(); ++r) {
        ++support[{static_cast<int>(r), prev}];
        if (imp.clicks[r] != 0) prev = static_cast<int>(r) + 1;
      }
    }
    double worst = 0.0;
    int checked = 0;
    for (const auto& [query, docs] : pool.docs) {
      for (std::size_t r = 0; r < docs.size(); ++r) {
        for (std::size_t rp = 0; rp <= r; ++rp) {
          if (support[{static_cast<int>(r), static_cast<int>(rp)}] < 1000) continue;
          const auto slot = params.pairs.find(query, docs[r].first);
          if (!slot) continue;
          const double fitted =
              params.gamma[r][rp] * params.alpha[static_cast<std::size_t>(*slot)];
          worst = std::max(worst, std::abs(fitted - gamma[r][rp] * docs[r].second));
          ++checked;
        }
      }
    }
    check.require(checked > 0, "no observed ubm contexts compared");
    check.require(worst <= 0.07, "ubm product L-inf " + std::to_string(worst) + " > 0.07");
  }

  {  // DCM lambda within 0.05 at ranks where the estimator is consistent.
    const std::vector<double> lambda{0.7, 0.5, 0.35, 0.6, 0.5};
    const auto pool = make_pool(2, 5, {0.9});
    const click::ClickLog log = sample_dcm(pool, lambda, 50000, 13);
    const click::DcmParams params = click::fit_dcm(log);
    double worst = 0.0;
    for (std::size_t r = 0; r < 3; ++r) {
      worst = std::max(worst, std::abs(params.lambda[r] - lambda[r]));
    }
    check.require(worst <= 0.05, "dcm lambda L-inf " + std::to_string(worst) + " > 0.05");
  }

  {  // DBN attract within 0.05 with gamma_continue = 1.
    std::map<std::string, std::vector<DbnDoc>> pool;
    for (int q = 0; q < 2; ++q) {
      auto& docs = pool["q" + std::to_string(q)];
      docs.push_back({"d" + std::to_string(q) + "_0", 0.75, 0.6});
      docs.push_back({"d" + std::to_string(q) + "_1", 0.5, 0.4});
      docs.push_back({"d" + std::to_string(q) + "_2", 0.3, 0.2});
    }
    const click::ClickLog log = sample_dbn(pool, 1.0, 50000, 17);
    click::TrainConfig config;
    config.max_iters = 150;
    const auto [params, report] = click::fit_dbn(log, 1.0, config);
    double worst = 0.0;
    for (const auto& [query, docs] : pool) {
      for (const DbnDoc& doc : docs) {
        const auto slot = params.pairs.find(query, doc.key);
        if (!slot) {
          worst = 1.0;
          continue;
        }
        worst = std::max(
            worst, std::abs(params.attract[static_cast<std::size_t>(*slot)] - doc.attract));
      }
    }
    check.require(worst <= 0.05, "dbn attract L-inf " + std::to_string(worst) + " > 0.05");
  }

  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  check.require(seconds < 60.0, "recovery took " + std::to_string(seconds) + "s >= 60s");
  check.detail += (check.detail.empty() ? "" : "; ") + std::string("wall ") +
                  std::to_string(seconds) + "s";
}

// ---------------------------------------------------- 2. EM monotonicity --

void criterion_monotonicity(Check& check) {
  std::mt19937_64 rng(20250808);
  std::uniform_int_distribution<int> n_impressions(50, 250);
  std::uniform_int_distribution<int> ranks(1, 6);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  for (int trial = 0; trial < 20; ++trial) {
    click::ClickLog log;
    const int n = n_impressions(rng);
    const double click_rate = 0.05 + 0.5 * unit(rng);
    for (int i = 0; i < n; ++i) {
      click::Impression imp;
      imp.session_id = "s" + std::to_string(i);
      imp.query_key = "q" + std::to_string(rng() % 5);
      const int len = ranks(rng);
      for (int r = 0; r < len; ++r) {
        imp.doc_keys.push_back("d" + std::to_string(rng() % 8));
        imp.clicks.push_back(static_cast<std::uint8_t>(unit(rng) < click_rate ? 1 : 0));
      }
      log.impressions.push_back(std::move(imp));
    }
    click::TrainConfig config;
    config.max_iters = 20;
    const auto verify = [&](const click::TrainReport& report, const char* model) {
      for (std::size_t i = 1; i < report.log_likelihoods.size(); ++i) {
        const double drop = report.log_likelihoods[i] - report.log_likelihoods[i - 1];
        check.require(drop >= -1e-9, std::string(model) + " trial " +
                                         std::to_string(trial) + " decreased by " +
                                         std::to_string(-drop));
      }
    };
    verify(click::fit_pbm(log, config).second, "pbm");
    verify(click::fit_ubm(log, config).second, "ubm");
    verify(click::fit_dbn(log, 1.0, config).second, "dbn");
  }
}

// ------------------------------------- 3. likelihood versus enumeration --

void criterion_enumeration(Check& check) {
  std::mt19937_64 rng(31337);
  std::uniform_real_distribution<double> unit(0.05, 0.95);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 3);
    click::Impression imp;
    imp.query_key = "q";
    click::DcmParams dcm;
    click::DbnParams dbn;
    dbn.gamma_continue = unit(rng);
    std::vector<double> attract, satisfy, lambda;
    for (int r = 0; r < n; ++r) {
      const std::string doc = "d" + std::to_string(r);
      imp.doc_keys.push_back(doc);
      imp.clicks.push_back(static_cast<std::uint8_t>(rng() % 2));
      attract.push_back(unit(rng));
      satisfy.push_back(unit(rng));
      lambda.push_back(unit(rng));
      dcm.pairs.intern("q", doc);
      dbn.pairs.intern("q", doc);
    }
    dcm.alpha = attract;
    dcm.lambda = lambda;
    dbn.attract = attract;
    dbn.satisfy = satisfy;

    const double dcm_diff = std::abs(
        click::impression_log_likelihood(click::ClickModelParams{dcm}, imp) -
        usim::testing::enumerate_dcm_likelihood(
            imp, [&](std::size_t r) { return attract[r]; },
            [&](std::size_t r) { return lambda[r]; }));
    check.require(dcm_diff <= 1e-9,
                  "dcm trial " + std::to_string(trial) + " diff " + std::to_string(dcm_diff));

    const double dbn_diff = std::abs(
        click::impression_log_likelihood(click::ClickModelParams{dbn}, imp) -
        usim::testing::enumerate_dbn_likelihood(
            imp, [&](std::size_t r) { return attract[r]; },
            [&](std::size_t r) { return satisfy[r]; }, dbn.gamma_continue));
    check.require(dbn_diff <= 1e-9,
                  "dbn trial " + std::to_string(trial) + " diff " + std::to_string(dbn_diff));
  }
}

// -------------------------------------------------------- 4. metric oracles --

double bleu_oracle(const std::vector<std::string>& cand, const std::vector<std::string>& ref) {
  if (cand.empty()) return 0.0;
  const auto grams = [](const std::vector<std::string>& tokens, int n) {
    std::map<std::vector<std::string>, int> counts;
    for (int i = 0; i + n <= static_cast<int>(tokens.size()); ++i) {
      counts[std::vector<std::string>(tokens.begin() + i, tokens.begin() + i + n)] += 1;
    }
    return counts;
  };
  const int order = std::min<int>(4, static_cast<int>(cand.size()));
  double log_sum = 0.0;
  for (int n = 1; n <= order; ++n) {
    const auto cg = grams(cand, n);
    const auto rg = grams(ref, n);
    double matched = 0.0, total = 0.0;
    for (const auto& [gram, count] : cg) {
      total += count;
      const auto it = rg.find(gram);
      if (it != rg.end()) matched += std::min(count, it->second);
    }
    if (n >= 2) {
      matched += 1.0;
      total += 1.0;
    }
    if (matched == 0.0) return 0.0;
    log_sum += std::log(matched / total);
  }
  double score = std::exp(log_sum / order);
  if (cand.size() < ref.size()) {
    score *= std::exp(1.0 - static_cast<double>(ref.size()) / static_cast<double>(cand.size()));
  }
  return score;
}

void criterion_metric_oracles(Check& check) {
  {  // BLEU versus the independent implementation.
    std::mt19937_64 rng(88);
    const std::vector<std::string> vocab{"安", "装", "gcc", "linux", "教", "程", "make"};
    for (int i = 0; i < 20; ++i) {
      const auto draw = [&](int max_len) {
        std::vector<std::string> tokens;
        const int n = static_cast<int>(rng() % (max_len + 1));
        for (int t = 0; t < n; ++t) tokens.push_back(vocab[rng() % vocab.size()]);
        return tokens;
      };
      const auto cand = draw(8);
      const auto ref = draw(8);
      const double diff = std::abs(eval::bleu(cand, ref) - bleu_oracle(cand, ref));
      check.require(diff <= 1e-9, "bleu pair " + std::to_string(i) + " diff " +
                                      std::to_string(diff));
    }
  }

  {  // FID: closed-form 2-D Gaussian within 2% at n = 1e5; identical sets ~ 0.
    const auto box_muller = [](std::mt19937_64& rng) {
      const double u1 =
          (static_cast<double>(rng()) + 1.0) / (static_cast<double>(rng.max()) + 2.0);
      const double u2 =
          (static_cast<double>(rng()) + 1.0) / (static_cast<double>(rng.max()) + 2.0);
      return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    };
    const auto sample = [&](std::size_t n, double mx, double my, double cxx, double cxy,
                            double cyy, std::uint64_t seed) {
      const double l11 = std::sqrt(cxx);
      const double l21 = cxy / l11;
      const double l22 = std::sqrt(cyy - l21 * l21);
      std::mt19937_64 rng(seed);
      eval::EmbeddingSet set;
      set.reserve(n);
      for (std::size_t i = 0; i < n; ++i) {
        const double z1 = box_muller(rng);
        const double z2 = box_muller(rng);
        set.push_back({mx + l11 * z1, my + l21 * z1 + l22 * z2});
      }
      return set;
    };
    const eval::EmbeddingSet p = sample(100000, 0.0, 0.0, 1.0, 0.3, 2.0, 1001);
    const eval::EmbeddingSet q = sample(100000, 1.0, -0.5, 1.5, -0.2, 0.8, 2002);
    const double trace_product = 1.0 * 1.5 + 2.0 * 0.3 * -0.2 + 2.0 * 0.8;
    const double det_product = (1.0 * 2.0 - 0.09) * (1.5 * 0.8 - 0.04);
    const double disc =
        std::sqrt(std::max(0.0, trace_product * trace_product - 4.0 * det_product));
    const double truth = (1.0 + 0.25) + (1.0 + 2.0) + (1.5 + 0.8) -
                         2.0 * (std::sqrt((trace_product + disc) / 2.0) +
                                std::sqrt((trace_product - disc) / 2.0));
    const double estimate = eval::fid(p, q);
    check.require(std::abs(estimate - truth) <= 0.02 * truth,
                  "fid " + std::to_string(estimate) + " vs closed form " +
                      std::to_string(truth));
    check.require(eval::fid(p, p) <= 1e-6, "fid(p,p) above 1e-6");
  }

  {  // MAUVE identities, symmetry, separation.
    std::mt19937_64 rng(55);
    std::normal_distribution<double> normal(0.0, 1.0);
    const auto cloud = [&](std::size_t n, double shift) {
      eval::EmbeddingSet set;
      for (std::size_t i = 0; i < n; ++i) {
        set.push_back({normal(rng) + shift, normal(rng) + shift, normal(rng) + shift});
      }
      return set;
    };
    const eval::EmbeddingSet p = cloud(40, 0.0);
    const eval::EmbeddingSet q = cloud(35, 0.7);
    const eval::EmbeddingSet far = cloud(40, 100.0);
    check.require(std::abs(eval::mauve(p, p).score - 1.0) <= 1e-6, "mauve(p,p) != 1");
    eval::MauveConfig config;
    config.seed = 3;
    const double pq = eval::mauve(p, q, config).score;
    const double qp = eval::mauve(q, p, config).score;
    check.require(std::abs(pq - qp) <= 1e-6,
                  "mauve asymmetry " + std::to_string(std::abs(pq - qp)));
    const double separated = eval::mauve(p, far).score;
    check.require(separated <= 0.1, "separated clouds scored " + std::to_string(separated));
  }

  {  // Classification metrics equal brute-force confusion counts.
    std::mt19937_64 rng(77);
    std::vector<std::uint8_t> preds(500), labels(500);
    for (std::size_t i = 0; i < 500; ++i) {
      preds[i] = static_cast<std::uint8_t>(rng() % 2);
      labels[i] = static_cast<std::uint8_t>(rng() % 2);
    }
    const auto report = eval::classification_metrics(preds, labels);
    std::int64_t tp = 0, fp = 0, fn = 0, tn = 0;
    for (std::size_t i = 0; i < 500; ++i) {
      tp += preds[i] && labels[i];
      fp += preds[i] && !labels[i];
      fn += !preds[i] && labels[i];
      tn += !preds[i] && !labels[i];
    }
    check.require(report.confusion.tp == tp && report.confusion.fp == fp &&
                      report.confusion.fn == fn && report.confusion.tn == tn,
                  "confusion counts mismatch");
  }
}

// ------------------------------------------------------ 5. stopping rules --

void criterion_stopping(Check& check) {
  using namespace usim::testing;
  int case_index = 0;
  for (const auto& c : hand_traced_stopping_cases()) {
    const auto prefix = rounds_from_clicks(c.rounds);
    const bool got = baselines::stop_decision(prefix, c.rule, c.params);
    check.require(got == c.expect_stop, "case '" + c.name + "' expected " +
                                            (c.expect_stop ? "stop" : "continue"));
    ++case_index;
  }
  check.require(case_index == 12, "expected 12 hand-traced cases");

  std::mt19937_64 rng(4242);
  std::uniform_int_distribution<int> n_rounds(1, 5);
  std::uniform_int_distribution<int> n_clicks(0, 4);
  std::uniform_int_distribution<int> rating(1, 5);
  std::uniform_real_distribution<double> threshold(0.5, 4.5);
  for (int i = 0; i < 1000; ++i) {
    std::vector<std::vector<std::pair<int, int>>> plan(
        static_cast<std::size_t>(n_rounds(rng)));
    for (auto& round : plan) {
      const int clicks = n_clicks(rng);
      for (int c = 0; c < clicks; ++c) round.emplace_back(c + 1, rating(rng));
    }
    const auto prefix = rounds_from_clicks(plan);
    baselines::StoppingParams params;
    params.fixed_depth_k = 99;
    params.satisfaction_s = threshold(rng);
    params.frustration_f = threshold(rng);
    const bool combined = baselines::stop_decision(
        prefix, baselines::StopRule::kSatisfactionOrFrustration, params);
    const bool either =
        baselines::stop_decision(prefix, baselines::StopRule::kSatisfaction, params) ||
        baselines::stop_decision(prefix, baselines::StopRule::kFrustration, params);
    check.require(combined == either, "S&F equivalence failed on prefix " + std::to_string(i));
  }
}

// --------------------------------------- 6. agent determinism and protocol --

void criterion_agent_protocol(Check& check) {
  usim::testing::TmpDir tmp("acceptance-agent");

  const std::string script = tmp.write(
      "script.json",
      json{{"rules",
            {{{"if_contains", {"Task: Provide thought process for the next search query."}},
              {"responses", {"Reasoning: first thought", "Reasoning: second thought"}}},
             {{"if_contains", {"Task: Provide the next search query you would issue."}},
              {"responses", {"alpha query", "beta query"}}},
             {{"if_contains",
               {"Task: Provide thought process for deciding which results to click."}},
              {"responses", {"Reasoning: click thinking"}}},
             {{"if_contains", {"Task: Choose which results you would click"}},
              {"responses", {"[1, 2]", "none"}}},
             {{"if_contains",
               {"Task: Provide thought process for deciding whether to continue searching or "
                "stop."}},
              {"responses", {"Reasoning: stop thinking"}}},
             {{"if_contains", {"Task: Decide whether to continue searching or stop."}},
              {"responses", {"continue", "stop"}}}}}}
          .dump());
  const std::string config = tmp.write(
      "config.json",
      json{{"providers",
            {{"mock", {{"base_url", "mock://" + script}, {"model_name", "scripted"}}}}},
           {"templates_dir", USIM_TEMPLATES_DIR},
           {"budget", {{"max_rounds", 5}, {"max_clicks_per_round", 10}}}}
          .dump());
  const std::string tasks = tmp.write(
      "tasks.jsonl",
      json{{"task_id", "t0"}, {"description", "demo task"}, {"language", "en"}}.dump() + "\n");
  std::ostringstream store_text;
  for (const std::string query : {"alpha query", "beta query"}) {
    json serp = json::array();
    for (int rank = 1; rank <= 5; ++rank) {
      serp.push_back({{"rank", rank},
                      {"title", query + " title " + std::to_string(rank)},
                      {"snippet", "snippet"},
                      {"url", "http://store/" + std::to_string(rank)}});
    }
    store_text << json{{"query", query}, {"serp", serp}}.dump() << "\n";
  }
  const std::string store = tmp.write("store.jsonl", store_text.str());

  const auto simulate = [&](const std::string& tag) {
    return run_cli("--config " + shell_quote(config) + " --seed 7 simulate --strategy mock-mock"
                   " --tasks " + shell_quote(tasks) + " --serp-store " + shell_quote(store) +
                   " --out-sessions " + shell_quote(tmp.file("sessions-" + tag + ".jsonl")) +
                   " --out-transcript " + shell_quote(tmp.file("transcript-" + tag + ".jsonl")));
  };
  check.require(simulate("a") == 0, "cmd_simulate run 1 failed");
  check.require(simulate("b") == 0, "cmd_simulate run 2 failed");
  check.require(tmp.read("sessions-a.jsonl") == tmp.read("sessions-b.jsonl"),
                "session files differ between runs");
  check.require(tmp.read("transcript-a.jsonl") == tmp.read("transcript-b.jsonl"),
                "transcript files differ between runs");

  // Every simulated session passes schema validation.
  std::istringstream sessions_in(tmp.read("sessions-a.jsonl"));
  const Dataset simulated = parse_session_log(sessions_in);
  check.require(!simulated.sessions.empty(), "no sessions simulated");
  for (const Session& session : simulated.sessions) {
    check.require(validate_session(session).empty(),
                  "session " + session.session_id + " fails validation");
  }

  // Golden prompt snapshot: byte-exact section order.
  const TemplateSet templates = TemplateSet::load_dir(USIM_TEMPLATES_DIR);
  PromptValues values;
  values.task_description = "demo task";
  values.search_history = render_search_history({});
  const std::string rendered = render_template(templates.query_thought, values);
  const std::string golden =
      "Role: You are a search engine user, interacting with the search engine to gather "
      "relevant information to answer questions.\n"
      "Goal: demo task\n"
      "Search History: (no searches yet)\n"
      "Task: Provide thought process for the next search query.\n"
      "Output Format:\n"
      "Reasoning: <Thought process behind the query>\n";
  check.require(rendered == golden, "query-thought prompt deviates from golden snapshot");

  // Thought-before-action ordering in the transcript.
  std::istringstream transcript_in(tmp.read("transcript-a.jsonl"));
  const auto entries = agent::TranscriptWriter::read(transcript_in);
  check.require(!entries.empty(), "transcript empty");
  int actions = 0;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const std::string& stage = entries[i].stage;
    if (stage.size() > 7 && stage.substr(stage.size() - 7) == "_action") {
      ++actions;
      const std::string want = stage.substr(0, stage.size() - 7) + "_thought";
      check.require(i > 0 && entries[i - 1].stage == want,
                    "action at entry " + std::to_string(i) + " not preceded by its thought");
    }
  }
  check.require(actions >= 6, "expected at least 6 action exchanges");

  // 6-cell strategy grid round-trips through parse/format.
  const std::vector<std::string> grid{"N-GPT",   "N-Llama",   "GPT-GPT",
                                      "GPT-Llama", "Llama-GPT", "Llama-Llama"};
  std::set<std::string> names;
  for (const std::string& name : grid) {
    const auto parsed = agent::StrategyConfig::parse(name);
    check.require(parsed.name() == name, "strategy " + name + " does not round-trip");
    names.insert(parsed.name());
  }
  check.require(names.size() == 6, "strategy grid does not have 6 distinct cells");
}

// ------------------------------------------------- 7. SFT export fidelity --

void criterion_sft_fidelity(Check& check) {
  const Dataset dataset = usim::testing::user_study_shaped_dataset();
  const DatasetStats stats = compute_stats(dataset);
  check.require(stats.n_thoughts.query == 690 && stats.n_thoughts.click == 1063 &&
                    stats.n_thoughts.stop == 296,
                "fixture thought counts drifted");

  const TemplateSet templates = TemplateSet::load_dir(USIM_TEMPLATES_DIR);
  const auto queries = export_sft_records(dataset, Stage::kQuery, templates.query_thought);
  const auto clicks = export_sft_records(dataset, Stage::kClick, templates.click_thought);
  const auto stops = export_sft_records(dataset, Stage::kStop, templates.stop_thought);
  check.require(queries.size() == 690,
                "query records " + std::to_string(queries.size()) + " != 690");
  check.require(clicks.size() == 1063,
                "click records " + std::to_string(clicks.size()) + " != 1063");
  check.require(stops.size() == 296, "stop records " + std::to_string(stops.size()) + " != 296");

  const auto all_prefixed = [&](const std::vector<SftRecord>& records) {
    for (const SftRecord& record : records) {
      if (record.output.rfind("Reasoning: ", 0) != 0) return false;
      if (contains_unexpanded_placeholder(record.input)) return false;
    }
    return true;
  };
  check.require(all_prefixed(queries) && all_prefixed(clicks) && all_prefixed(stops),
                "record output prefix or placeholder expansion broken");
}

// ---------------------------------------- 8. optional dataset-dependent --

void criterion_datasets(Check& check) {
  const char* kdd19 = std::getenv("USIM_KDD19_FILE");
  const char* tiangong = std::getenv("USIM_TIANGONG_FILE");
  if (kdd19 == nullptr && tiangong == nullptr) {
    check.skipped = true;
    check.detail = "set USIM_KDD19_FILE / USIM_TIANGONG_FILE to enable";
    return;
  }
  if (kdd19 != nullptr) {
    std::ifstream in(kdd19);
    check.require(static_cast<bool>(in), "cannot open " + std::string(kdd19));
    if (in) {
      const Dataset dataset = import_dataset(DatasetFormat::kKdd19Like, in, "kdd19");
      const DatasetStats stats = compute_stats(dataset);
      check.require(stats.n_tasks == 9 && stats.n_sessions == 305 && stats.n_queries == 810 &&
                        stats.n_clicks == 2062,
                    "kdd19 counts mismatch");
      const click::ClickLog log = click::extract_click_log(dataset);
      click::TrainConfig config;
      config.max_iters = 100;
      const auto [params, report] = click::fit_pbm(log, config);
      std::vector<std::uint8_t> preds, labels;
      for (const click::Impression& imp : log.impressions) {
        const auto probs = click::predict_click_probs(params, imp.query_key, imp.doc_keys);
        const auto classified = click::classify(probs);
        preds.insert(preds.end(), classified.begin(), classified.end());
        labels.insert(labels.end(), imp.clicks.begin(), imp.clicks.end());
      }
      const auto cls = eval::classification_metrics(preds, labels);
      // Reported, not failed: preprocessing details are environment-specific.
      check.detail += "kdd19 pbm in-sample accuracy " + std::to_string(cls.accuracy);
      if (std::abs(cls.accuracy - 0.7755) > 0.05) {
        check.detail += " (outside 0.7755 +/- 0.05, reported only)";
      }
    }
  }
  if (tiangong != nullptr) {
    std::ifstream in(tiangong);
    check.require(static_cast<bool>(in), "cannot open " + std::string(tiangong));
    if (in) {
      const Dataset dataset = import_dataset(DatasetFormat::kTiangongLike, in, "tiangong");
      const DatasetStats stats = compute_stats(dataset);
      check.require(stats.n_tasks == 1085 && stats.n_sessions == 1085 &&
                        stats.n_queries == 2608 && stats.n_clicks == 2673,
                    "tiangong counts mismatch");
    }
  }
}

}  // namespace

int main() {
  run_criterion("1. click-model synthetic recovery (50k impressions, < 60s)",
                criterion_recovery);
  run_criterion("2. EM log-likelihood monotonicity on 20 random logs", criterion_monotonicity);
  run_criterion("3. DCM/DBN likelihood matches exhaustive enumeration", criterion_enumeration);
  run_criterion("4. metric oracles (BLEU, FID, MAUVE, classification)",
                criterion_metric_oracles);
  run_criterion("5. stopping rules: 12 hand-traced cases + S&F equivalence",
                criterion_stopping);
  run_criterion("6. agent determinism, schema, golden prompts, thought ordering",
                criterion_agent_protocol);
  run_criterion("7. SFT export fidelity on the user-study-shaped fixture",
                criterion_sft_fidelity);
  run_criterion("8. dataset-dependent checks (optional)", criterion_datasets);

  if (g_failures > 0) {
    std::cout << g_failures << " criterion(s) failed\n";
    return 1;
  }
  std::cout << "all criteria passed\n";
  return 0;
}
