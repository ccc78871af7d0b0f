#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>

#include "usim/click/models.hpp"
#include "usim/common/parallel.hpp"

namespace usim::click {

namespace {

struct Event {
  int pair;
  int rank;  // 0-based
  std::uint8_t click;
};

double mean_or(const std::vector<double>& values, double fallback) {
  if (values.empty()) return fallback;
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

}  // namespace

std::pair<PbmParams, TrainReport> fit_pbm(const ClickLog& log, const TrainConfig& config) {
  const auto started = std::chrono::steady_clock::now();
  PbmParams params;
  TrainReport report;

  std::vector<Event> events;
  for (const Impression& imp : log.impressions) {
    for (std::size_t i = 0; i < imp.doc_keys.size(); ++i) {
      events.push_back({params.pairs.intern(imp.query_key, imp.doc_keys[i]),
                        static_cast<int>(i), imp.clicks[i]});
    }
  }
  const std::size_t n_ranks = log.max_rank();
  const std::size_t n_pairs = params.pairs.size();
  params.gamma.assign(n_ranks, 0.5);
  if (!params.gamma.empty()) params.gamma[0] = 1.0;  // rank 1 examined by convention
  params.alpha.assign(n_pairs, 0.5);
  if (events.empty()) {
    report.log_likelihoods.push_back(0.0);
    return {std::move(params), std::move(report)};
  }

  struct Accumulator {
    std::vector<double> alpha_num, alpha_den, gamma_num, gamma_den;
    double ll = 0.0;
  };

  double prev_ll = -std::numeric_limits<double>::infinity();
  for (int iter = 0;; ++iter) {
    const std::size_t workers = chunk_count(events.size(), config.jobs);
    std::vector<Accumulator> accs(workers);
    for (Accumulator& acc : accs) {
      acc.alpha_num.assign(n_pairs, 0.0);
      acc.alpha_den.assign(n_pairs, 0.0);
      acc.gamma_num.assign(n_ranks, 0.0);
      acc.gamma_den.assign(n_ranks, 0.0);
    }
    parallel_chunks(events.size(), config.jobs,
                    [&](std::size_t begin, std::size_t end, std::size_t w) {
                      Accumulator& acc = accs[w];
                      for (std::size_t e = begin; e < end; ++e) {
                        const Event& event = events[e];
                        const double g = params.gamma[static_cast<std::size_t>(event.rank)];
                        const double a = params.alpha[static_cast<std::size_t>(event.pair)];
                        const double p = g * a;
                        double post_attract;
                        double post_examine;
                        if (event.click != 0) {
                          acc.ll += std::log(p);
                          post_attract = 1.0;
                          post_examine = 1.0;
                        } else {
                          acc.ll += std::log(1.0 - p);
                          post_attract = a * (1.0 - g) / (1.0 - p);
                          post_examine = g * (1.0 - a) / (1.0 - p);
                        }
                        acc.alpha_num[static_cast<std::size_t>(event.pair)] += post_attract;
                        acc.alpha_den[static_cast<std::size_t>(event.pair)] += 1.0;
                        acc.gamma_num[static_cast<std::size_t>(event.rank)] += post_examine;
                        acc.gamma_den[static_cast<std::size_t>(event.rank)] += 1.0;
                      }
                    });
    // Merge in worker order so reductions are deterministic.
    Accumulator total = std::move(accs[0]);
    for (std::size_t w = 1; w < workers; ++w) {
      total.ll += accs[w].ll;
      for (std::size_t i = 0; i < n_pairs; ++i) {
        total.alpha_num[i] += accs[w].alpha_num[i];
        total.alpha_den[i] += accs[w].alpha_den[i];
      }
      for (std::size_t i = 0; i < n_ranks; ++i) {
        total.gamma_num[i] += accs[w].gamma_num[i];
        total.gamma_den[i] += accs[w].gamma_den[i];
      }
    }

    report.log_likelihoods.push_back(total.ll);
    if (iter > 0 && total.ll - prev_ll < config.tol) {
      report.converged = true;
      break;
    }
    if (iter >= config.max_iters) break;
    prev_ll = total.ll;

    for (std::size_t i = 0; i < n_pairs; ++i) {
      params.alpha[i] = clamp_prob(total.alpha_num[i] / total.alpha_den[i]);
    }
    for (std::size_t r = 1; r < n_ranks; ++r) {
      if (total.gamma_den[r] > 0) {
        params.gamma[r] = clamp_prob(total.gamma_num[r] / total.gamma_den[r]);
      }
    }
    report.iterations = iter + 1;
  }

  params.alpha_default = mean_or(params.alpha, 0.5);
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return {std::move(params), std::move(report)};
}

}  // namespace usim::click
