#include <cmath>

#include "usim/common/error.hpp"
#include "usim/eval/metrics.hpp"

namespace usim::eval {

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error("cosine: dimension mismatch");
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

BertScore bert_style_score(const EmbeddingSet& candidate, const EmbeddingSet& reference) {
  if (candidate.empty() || reference.empty()) {
    throw Error("bert_style_score requires non-empty embedding lists");
  }
  const std::size_t dim = candidate.front().size();
  for (const auto& v : candidate) {
    if (v.size() != dim) throw Error("bert_style_score: dimension mismatch");
  }
  for (const auto& v : reference) {
    if (v.size() != dim) throw Error("bert_style_score: dimension mismatch");
  }

  const auto greedy_mean = [](const EmbeddingSet& from, const EmbeddingSet& to) {
    double sum = 0.0;
    for (const auto& v : from) {
      double best = -1.0;
      for (const auto& w : to) {
        best = std::max(best, cosine_similarity(v, w));
      }
      sum += best;
    }
    return sum / static_cast<double>(from.size());
  };

  BertScore score;
  score.precision = greedy_mean(candidate, reference);
  score.recall = greedy_mean(reference, candidate);
  score.f1 = score.precision + score.recall > 0.0
                 ? 2.0 * score.precision * score.recall / (score.precision + score.recall)
                 : 0.0;
  return score;
}

}  // namespace usim::eval
