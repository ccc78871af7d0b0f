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
  int rank;      // 0-based
  int prev_click;  // rank of most recent click above (1-based), 0 if none
  std::uint8_t click;
};

// Contexts for rank r (0-based) are prev_click in 0..r: r+1 slots.
std::size_t context_offset(int rank) {
  return static_cast<std::size_t>(rank) * (static_cast<std::size_t>(rank) + 1) / 2;
}

}  // namespace

std::pair<UbmParams, TrainReport> fit_ubm(const ClickLog& log, const TrainConfig& config) {
  const auto started = std::chrono::steady_clock::now();
  UbmParams params;
  TrainReport report;

  std::vector<Event> events;
  for (const Impression& imp : log.impressions) {
    int prev_click = 0;
    for (std::size_t i = 0; i < imp.doc_keys.size(); ++i) {
      events.push_back({params.pairs.intern(imp.query_key, imp.doc_keys[i]),
                        static_cast<int>(i), prev_click, imp.clicks[i]});
      if (imp.clicks[i] != 0) prev_click = static_cast<int>(i) + 1;
    }
  }
  const std::size_t n_ranks = log.max_rank();
  const std::size_t n_pairs = params.pairs.size();
  const std::size_t n_contexts = context_offset(static_cast<int>(n_ranks));
  params.gamma.assign(n_ranks, {});
  for (std::size_t r = 0; r < n_ranks; ++r) params.gamma[r].assign(r + 1, 0.5);
  params.alpha.assign(n_pairs, 0.5);
  if (events.empty()) {
    report.log_likelihoods.push_back(0.0);
    return {std::move(params), std::move(report)};
  }

  std::vector<double> gamma_flat(n_contexts, 0.5);
  const auto ctx_index = [](const Event& e) {
    return context_offset(e.rank) + static_cast<std::size_t>(e.prev_click);
  };

  struct Accumulator {
    std::vector<double> alpha_num, alpha_den, gamma_num, gamma_den;
    double ll = 0.0;
  };

  std::vector<double> context_seen(n_contexts, 0.0);
  double prev_ll = -std::numeric_limits<double>::infinity();
  for (int iter = 0;; ++iter) {
    const std::size_t workers = chunk_count(events.size(), config.jobs);
    std::vector<Accumulator> accs(workers);
    for (Accumulator& acc : accs) {
      acc.alpha_num.assign(n_pairs, 0.0);
      acc.alpha_den.assign(n_pairs, 0.0);
      acc.gamma_num.assign(n_contexts, 0.0);
      acc.gamma_den.assign(n_contexts, 0.0);
    }
    parallel_chunks(events.size(), config.jobs,
                    [&](std::size_t begin, std::size_t end, std::size_t w) {
                      Accumulator& acc = accs[w];
                      for (std::size_t e = begin; e < end; ++e) {
                        const Event& event = events[e];
                        const std::size_t ctx = ctx_index(event);
                        const double g = gamma_flat[ctx];
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
                        acc.gamma_num[ctx] += post_examine;
                        acc.gamma_den[ctx] += 1.0;
                      }
                    });
    Accumulator total = std::move(accs[0]);
    for (std::size_t w = 1; w < workers; ++w) {
      total.ll += accs[w].ll;
      for (std::size_t i = 0; i < n_pairs; ++i) {
        total.alpha_num[i] += accs[w].alpha_num[i];
        total.alpha_den[i] += accs[w].alpha_den[i];
      }
      for (std::size_t i = 0; i < n_contexts; ++i) {
        total.gamma_num[i] += accs[w].gamma_num[i];
        total.gamma_den[i] += accs[w].gamma_den[i];
      }
    }
    context_seen = total.gamma_den;

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
    for (std::size_t c = 0; c < n_contexts; ++c) {
      if (total.gamma_den[c] > 0) {
        gamma_flat[c] = clamp_prob(total.gamma_num[c] / total.gamma_den[c]);
      }
    }
    report.iterations = iter + 1;
  }

  std::size_t unobserved = 0;
  for (std::size_t r = 0; r < n_ranks; ++r) {
    for (std::size_t rp = 0; rp <= r; ++rp) {
      const std::size_t c = context_offset(static_cast<int>(r)) + rp;
      params.gamma[r][rp] = gamma_flat[c];
      if (context_seen[c] == 0.0) ++unobserved;
    }
  }
  if (unobserved > 0) {
    report.notes.push_back(std::to_string(unobserved) +
                           " unobserved (rank, prev_click) contexts left at initialization");
  }
  params.alpha_default = params.alpha.empty()
                             ? 0.5
                             : std::accumulate(params.alpha.begin(), params.alpha.end(), 0.0) /
                                   static_cast<double>(params.alpha.size());
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return {std::move(params), std::move(report)};
}

}  // namespace usim::click
