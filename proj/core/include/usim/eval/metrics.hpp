#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace usim::eval {

using TokenSeq = std::vector<std::string>;
using EmbeddingSet = std::vector<std::vector<double>>;

// Sentence-level BLEU with add-one smoothing on the n >= 2 precisions and the
// standard brevity penalty. Empty candidate scores 0.
double bleu(std::span<const std::string> candidate, std::span<const std::string> reference,
            int max_n = 4);

struct BertScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Greedy maximum-cosine token matching between two embedding sequences.
// recall averages over reference tokens, precision over candidate tokens; no
// idf weighting or baseline rescaling. Throws on dimension mismatch.
BertScore bert_style_score(const EmbeddingSet& candidate, const EmbeddingSet& reference);

struct MauveConfig {
  double scaling_c = 5.0;
  int grid_size = 25;
  int max_clusters = 32;
  double smoothing_eps = 1e-6;
  std::uint64_t seed = 1;
  int kmeans_restarts = 10;
};

struct MauveResult {
  double score = 0.0;
  bool degenerate = false;  // all points identical; score pinned to 1
};

// Area under the exponentiated-KL divergence frontier between jointly
// quantized embedding sets. Requires |p|, |q| >= 2. Symmetric in (p, q).
MauveResult mauve(const EmbeddingSet& p, const EmbeddingSet& q, const MauveConfig& config = {});

// Frechet distance between Gaussian fits of the two sets, eps added to the
// covariance diagonals; never negative. Requires |p|, |q| >= 2.
double fid(const EmbeddingSet& p, const EmbeddingSet& q, double eps = 1e-6);

struct ConfusionMatrix {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
  std::int64_t tn = 0;
};

struct ClassificationReport {
  ConfusionMatrix confusion;
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  bool zero_denominator = false;  // precision or recall had an empty denominator
};

// Standard definitions; zero-denominator precision/recall are 0 and flagged.
// Throws on length mismatch or empty input.
ClassificationReport classification_metrics(std::span<const std::uint8_t> predictions,
                                            std::span<const std::uint8_t> labels);

double cosine_similarity(std::span<const double> a, std::span<const double> b);

// Seeded k-means (k-means++ init, best of `restarts` by inertia). Returns the
// cluster label of every row. Deterministic for fixed inputs and seed.
std::vector<int> kmeans_labels(const EmbeddingSet& points, int k, std::uint64_t seed,
                               int restarts = 10, int max_iters = 100);

}  // namespace usim::eval
