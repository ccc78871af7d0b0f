#include <algorithm>
#include <cmath>
#include <numeric>

#include "usim/common/error.hpp"
#include "usim/eval/metrics.hpp"

namespace usim::eval {

namespace {

double kl_divergence(const std::vector<double>& a, const std::vector<double>& b) {
  double kl = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] > 0.0) kl += a[i] * std::log(a[i] / b[i]);
  }
  return kl;
}

std::vector<double> smoothed_histogram(const std::vector<int>& labels, std::size_t begin,
                                       std::size_t end, int k, double eps) {
  std::vector<double> hist(static_cast<std::size_t>(k), 0.0);
  for (std::size_t i = begin; i < end; ++i) {
    hist[static_cast<std::size_t>(labels[i])] += 1.0;
  }
  double total = 0.0;
  for (double& h : hist) {
    h = h / static_cast<double>(end - begin) + eps;
    total += h;
  }
  for (double& h : hist) h /= total;
  return hist;
}

}  // namespace

MauveResult mauve(const EmbeddingSet& p, const EmbeddingSet& q, const MauveConfig& config) {
  if (p.size() < 2 || q.size() < 2) throw Error("mauve requires at least 2 points per set");
  const std::size_t dim = p.front().size();
  for (const auto& v : p) {
    if (v.size() != dim) throw Error("mauve: dimension mismatch");
  }
  for (const auto& v : q) {
    if (v.size() != dim) throw Error("mauve: dimension mismatch");
  }

  const std::size_t np = p.size();
  const std::size_t nq = q.size();
  EmbeddingSet combined;
  combined.reserve(np + nq);
  combined.insert(combined.end(), p.begin(), p.end());
  combined.insert(combined.end(), q.begin(), q.end());

  bool all_identical = true;
  for (const auto& v : combined) {
    if (v != combined.front()) {
      all_identical = false;
      break;
    }
  }
  if (all_identical) return {1.0, true};

  const int k = static_cast<int>(std::min<std::size_t>(
      {static_cast<std::size_t>(config.max_clusters),
       (np + nq + 9) / 10,
       np + nq}));

  // Quantization is made order-invariant (and hence symmetric in p and q) by
  // clustering the union in a canonical sorted order.
  std::vector<std::size_t> order(combined.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return combined[a] < combined[b];
  });
  EmbeddingSet sorted_points;
  sorted_points.reserve(combined.size());
  for (const std::size_t i : order) sorted_points.push_back(combined[i]);

  const std::vector<int> sorted_labels =
      kmeans_labels(sorted_points, k, config.seed, config.kmeans_restarts);
  std::vector<int> labels(combined.size(), 0);
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    labels[order[pos]] = sorted_labels[pos];
  }

  const std::vector<double> hist_p = smoothed_histogram(labels, 0, np, k, config.smoothing_eps);
  const std::vector<double> hist_q =
      smoothed_histogram(labels, np, np + nq, k, config.smoothing_eps);

  std::vector<std::pair<double, double>> frontier;
  frontier.reserve(static_cast<std::size_t>(config.grid_size) + 2);
  frontier.emplace_back(0.0, 1.0);
  frontier.emplace_back(1.0, 0.0);
  for (int i = 1; i <= config.grid_size; ++i) {
    const double lambda = static_cast<double>(i) / (config.grid_size + 1.0);
    std::vector<double> mix(hist_p.size());
    for (std::size_t c = 0; c < mix.size(); ++c) {
      mix[c] = lambda * hist_p[c] + (1.0 - lambda) * hist_q[c];
    }
    frontier.emplace_back(std::exp(-config.scaling_c * kl_divergence(hist_q, mix)),
                          std::exp(-config.scaling_c * kl_divergence(hist_p, mix)));
  }

  std::sort(frontier.begin(), frontier.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    return a.second > b.second;
  });
  double area = 0.0;
  for (std::size_t i = 1; i < frontier.size(); ++i) {
    area += (frontier[i].first - frontier[i - 1].first) *
            (frontier[i].second + frontier[i - 1].second) / 2.0;
  }
  return {std::clamp(area, 0.0, 1.0), false};
}

}  // namespace usim::eval
