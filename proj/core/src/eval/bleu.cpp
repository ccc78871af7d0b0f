#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "usim/eval/metrics.hpp"

namespace usim::eval {

namespace {

// Multiset of n-grams, keyed by the joined token string.
std::unordered_map<std::string, int> ngram_counts(std::span<const std::string> tokens, int n) {
  std::unordered_map<std::string, int> counts;
  if (static_cast<int>(tokens.size()) < n) return counts;
  for (std::size_t i = 0; i + static_cast<std::size_t>(n) <= tokens.size(); ++i) {
    std::string key;
    for (int j = 0; j < n; ++j) {
      key += tokens[i + static_cast<std::size_t>(j)];
      key.push_back('\x1f');
    }
    ++counts[key];
  }
  return counts;
}

}  // namespace

double bleu(std::span<const std::string> candidate, std::span<const std::string> reference,
            int max_n) {
  if (candidate.empty()) return 0.0;
  const int order = std::min<int>(max_n, static_cast<int>(candidate.size()));

  double log_sum = 0.0;
  for (int n = 1; n <= order; ++n) {
    const auto cand = ngram_counts(candidate, n);
    const auto ref = ngram_counts(reference, n);
    double matched = 0.0;
    double total = 0.0;
    for (const auto& [gram, count] : cand) {
      const auto it = ref.find(gram);
      matched += std::min(count, it == ref.end() ? 0 : it->second);
      total += count;
    }
    if (n >= 2) {
      matched += 1.0;
      total += 1.0;
    }
    if (matched == 0.0) return 0.0;  // only possible at n = 1
    log_sum += std::log(matched / total);
  }
  double score = std::exp(log_sum / order);

  if (candidate.size() < reference.size()) {
    score *= std::exp(1.0 - static_cast<double>(reference.size()) /
                                static_cast<double>(candidate.size()));
  }
  return std::clamp(score, 0.0, 1.0);
}

}  // namespace usim::eval
