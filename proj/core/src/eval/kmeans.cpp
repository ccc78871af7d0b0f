#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "usim/common/error.hpp"
#include "usim/eval/metrics.hpp"

namespace usim::eval {

namespace {

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    d += diff * diff;
  }
  return d;
}

struct KmeansRun {
  std::vector<int> labels;
  double inertia = std::numeric_limits<double>::infinity();
};

KmeansRun run_once(const EmbeddingSet& points, int k, std::mt19937_64& rng, int max_iters) {
  const std::size_t n = points.size();
  const std::size_t dim = points.front().size();

  // k-means++ seeding.
  std::vector<std::vector<double>> centers;
  centers.reserve(static_cast<std::size_t>(k));
  std::uniform_int_distribution<std::size_t> first(0, n - 1);
  centers.push_back(points[first(rng)]);
  std::vector<double> d2(n, 0.0);
  while (centers.size() < static_cast<std::size_t>(k)) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& c : centers) best = std::min(best, squared_distance(points[i], c));
      d2[i] = best;
      total += best;
    }
    if (total <= 0.0) {
      // All remaining points coincide with a center; duplicate one.
      centers.push_back(points[first(rng)]);
      continue;
    }
    std::uniform_real_distribution<double> dist(0.0, total);
    double point = dist(rng);
    std::size_t chosen = n - 1;
    for (std::size_t i = 0; i < n; ++i) {
      point -= d2[i];
      if (point <= 0.0) {
        chosen = i;
        break;
      }
    }
    centers.push_back(points[chosen]);
  }

  KmeansRun run;
  run.labels.assign(n, 0);
  for (int iter = 0; iter < max_iters; ++iter) {
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      int best_c = 0;
      for (int c = 0; c < k; ++c) {
        const double d = squared_distance(points[i], centers[static_cast<std::size_t>(c)]);
        if (d < best) {
          best = d;
          best_c = c;
        }
      }
      if (run.labels[i] != best_c) {
        run.labels[i] = best_c;
        changed = true;
      }
    }
    // Recompute centers; an emptied cluster takes the point farthest from
    // its current center.
    std::vector<std::vector<double>> sums(static_cast<std::size_t>(k),
                                          std::vector<double>(dim, 0.0));
    std::vector<std::size_t> sizes(static_cast<std::size_t>(k), 0);
    for (std::size_t i = 0; i < n; ++i) {
      const auto c = static_cast<std::size_t>(run.labels[i]);
      for (std::size_t j = 0; j < dim; ++j) sums[c][j] += points[i][j];
      ++sizes[c];
    }
    for (int c = 0; c < k; ++c) {
      const auto cu = static_cast<std::size_t>(c);
      if (sizes[cu] == 0) {
        double far = -1.0;
        std::size_t far_i = 0;
        for (std::size_t i = 0; i < n; ++i) {
          const double d = squared_distance(
              points[i], centers[static_cast<std::size_t>(run.labels[i])]);
          if (d > far) {
            far = d;
            far_i = i;
          }
        }
        centers[cu] = points[far_i];
        run.labels[far_i] = c;
        changed = true;
        continue;
      }
      for (std::size_t j = 0; j < dim; ++j) {
        centers[cu][j] = sums[cu][j] / static_cast<double>(sizes[cu]);
      }
    }
    if (!changed && iter > 0) break;
  }

  run.inertia = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    run.inertia +=
        squared_distance(points[i], centers[static_cast<std::size_t>(run.labels[i])]);
  }
  return run;
}

}  // namespace

std::vector<int> kmeans_labels(const EmbeddingSet& points, int k, std::uint64_t seed,
                               int restarts, int max_iters) {
  if (points.empty()) throw Error("kmeans on empty point set");
  if (k < 1) throw Error("kmeans requires k >= 1");
  const std::size_t dim = points.front().size();
  for (const auto& p : points) {
    if (p.size() != dim) throw Error("kmeans: dimension mismatch");
  }
  if (k == 1) return std::vector<int>(points.size(), 0);

  std::mt19937_64 rng(seed);
  KmeansRun best;
  for (int r = 0; r < std::max(1, restarts); ++r) {
    KmeansRun run = run_once(points, k, rng, max_iters);
    if (run.inertia < best.inertia) best = std::move(run);
  }
  return best.labels;
}

}  // namespace usim::eval
