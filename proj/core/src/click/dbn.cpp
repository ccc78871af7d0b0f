#include <array>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

#include "usim/click/models.hpp"
#include "usim/common/error.hpp"
#include "usim/common/parallel.hpp"

namespace usim::click {

namespace {

// Two-state (examined / not) forward-backward for one impression under the
// current parameters. Emissions condition on the observed click; transitions
// fold satisfaction into leaving the chain.
struct ImpressionPosteriors {
  double log_likelihood = 0.0;
  std::vector<double> examine;        // P(E_r = 1 | clicks)
  std::vector<double> satisfy_given;  // P(S_r = 1 | clicks) at clicked positions, else 0
};

ImpressionPosteriors forward_backward(const Impression& imp, const std::vector<int>& slots,
                                      const DbnParams& params) {
  const std::size_t n = imp.doc_keys.size();
  const double g = params.gamma_continue;
  ImpressionPosteriors out;
  out.examine.assign(n, 0.0);
  out.satisfy_given.assign(n, 0.0);

  const auto attract_at = [&](std::size_t i) {
    return params.attract[static_cast<std::size_t>(slots[i])];
  };
  const auto satisfy_at = [&](std::size_t i) {
    return params.satisfy[static_cast<std::size_t>(slots[i])];
  };
  const auto emit = [&](std::size_t i, int e) -> double {
    const bool clicked = imp.clicks[i] != 0;
    if (e == 0) return clicked ? 0.0 : 1.0;
    return clicked ? attract_at(i) : 1.0 - attract_at(i);
  };
  // P(E_{r+1}=1 | E_r=e, C_r).
  const auto continue_prob = [&](std::size_t i, int e) -> double {
    if (e == 0) return 0.0;
    if (imp.clicks[i] != 0) return (1.0 - satisfy_at(i)) * g;
    return g;
  };

  // Backward pass: b[r][e] = P(C_{r..n} | E_r = e).
  std::vector<std::array<double, 2>> b(n + 1, {1.0, 1.0});
  for (std::size_t r = n; r-- > 0;) {
    for (int e = 0; e <= 1; ++e) {
      const double cont = continue_prob(r, e);
      b[r][static_cast<std::size_t>(e)] =
          emit(r, e) * (cont * b[r + 1][1] + (1.0 - cont) * b[r + 1][0]);
    }
  }

  // Forward pass: f[r][e] = P(C_{1..r-1}, E_r = e) before the emission at r.
  std::vector<std::array<double, 2>> f(n + 1, {0.0, 0.0});
  f[0][1] = 1.0;
  for (std::size_t r = 0; r < n; ++r) {
    const double f1 = f[r][1] * emit(r, 1);
    const double f0 = f[r][0] * emit(r, 0);
    const double cont1 = continue_prob(r, 1);
    f[r + 1][1] = f1 * cont1;
    f[r + 1][0] = f1 * (1.0 - cont1) + f0;
  }
  const double likelihood = f[n][0] + f[n][1];
  out.log_likelihood = std::log(std::max(likelihood, 1e-300));
  if (likelihood <= 0.0) return out;

  for (std::size_t r = 0; r < n; ++r) {
    const double joint1 = f[r][1] * b[r][1];
    const double joint0 = f[r][0] * b[r][0];
    out.examine[r] = joint1 / (joint1 + joint0);
    if (imp.clicks[r] != 0) {
      // Satisfied ends the chain; unsatisfied continues with gamma_continue.
      const double s = satisfy_at(r);
      const double stay = s * b[r + 1][0];
      const double go = (1.0 - s) * (g * b[r + 1][1] + (1.0 - g) * b[r + 1][0]);
      out.satisfy_given[r] = stay / (stay + go);
    }
  }
  return out;
}

}  // namespace

std::pair<DbnParams, TrainReport> fit_dbn(const ClickLog& log, double gamma_continue,
                                          const TrainConfig& config) {
  if (gamma_continue <= 0.0 || gamma_continue > 1.0) {
    throw Error("gamma_continue must be in (0, 1]");
  }
  const auto started = std::chrono::steady_clock::now();
  DbnParams params;
  params.gamma_continue = gamma_continue;
  TrainReport report;

  std::vector<std::vector<int>> slots(log.impressions.size());
  for (std::size_t i = 0; i < log.impressions.size(); ++i) {
    const Impression& imp = log.impressions[i];
    slots[i].reserve(imp.doc_keys.size());
    for (const std::string& doc : imp.doc_keys) {
      slots[i].push_back(params.pairs.intern(imp.query_key, doc));
    }
  }
  const std::size_t n_pairs = params.pairs.size();
  params.attract.assign(n_pairs, 0.5);
  params.satisfy.assign(n_pairs, 0.5);
  if (log.impressions.empty()) {
    report.log_likelihoods.push_back(0.0);
    return {std::move(params), std::move(report)};
  }

  struct Accumulator {
    std::vector<double> attract_num, attract_den, satisfy_num, satisfy_den;
    double ll = 0.0;
  };

  double prev_ll = -std::numeric_limits<double>::infinity();
  for (int iter = 0;; ++iter) {
    const std::size_t workers = chunk_count(log.impressions.size(), config.jobs);
    std::vector<Accumulator> accs(workers);
    for (Accumulator& acc : accs) {
      acc.attract_num.assign(n_pairs, 0.0);
      acc.attract_den.assign(n_pairs, 0.0);
      acc.satisfy_num.assign(n_pairs, 0.0);
      acc.satisfy_den.assign(n_pairs, 0.0);
    }
    parallel_chunks(log.impressions.size(), config.jobs,
                    [&](std::size_t begin, std::size_t end, std::size_t w) {
                      Accumulator& acc = accs[w];
                      for (std::size_t i = begin; i < end; ++i) {
                        const Impression& imp = log.impressions[i];
                        const ImpressionPosteriors post =
                            forward_backward(imp, slots[i], params);
                        acc.ll += post.log_likelihood;
                        for (std::size_t r = 0; r < imp.doc_keys.size(); ++r) {
                          const auto s = static_cast<std::size_t>(slots[i][r]);
                          const double attract_post =
                              imp.clicks[r] != 0
                                  ? 1.0
                                  : params.attract[s] * (1.0 - post.examine[r]);
                          acc.attract_num[s] += attract_post;
                          acc.attract_den[s] += 1.0;
                          if (imp.clicks[r] != 0) {
                            acc.satisfy_num[s] += post.satisfy_given[r];
                            acc.satisfy_den[s] += 1.0;
                          }
                        }
                      }
                    });
    Accumulator total = std::move(accs[0]);
    for (std::size_t w = 1; w < workers; ++w) {
      total.ll += accs[w].ll;
      for (std::size_t i = 0; i < n_pairs; ++i) {
        total.attract_num[i] += accs[w].attract_num[i];
        total.attract_den[i] += accs[w].attract_den[i];
        total.satisfy_num[i] += accs[w].satisfy_num[i];
        total.satisfy_den[i] += accs[w].satisfy_den[i];
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
      params.attract[i] = clamp_prob(total.attract_num[i] / total.attract_den[i]);
      if (total.satisfy_den[i] > 0) {
        params.satisfy[i] = clamp_prob(total.satisfy_num[i] / total.satisfy_den[i]);
      }
    }
    report.iterations = iter + 1;
  }

  const auto mean = [](const std::vector<double>& v) {
    return v.empty() ? 0.5 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  };
  params.attract_default = mean(params.attract);
  params.satisfy_default = mean(params.satisfy);
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return {std::move(params), std::move(report)};
}

}  // namespace usim::click
