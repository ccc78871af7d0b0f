#include <numeric>

#include "usim/click/models.hpp"

namespace usim::click {

DcmParams fit_dcm(const ClickLog& log) {
  DcmParams params;
  const std::size_t n_ranks = log.max_rank();

  std::vector<double> alpha_num;
  std::vector<double> alpha_den;
  std::vector<double> last_click_at(n_ranks, 0.0);
  std::vector<double> clicks_at(n_ranks, 0.0);

  const auto slot = [&](const Impression& imp, std::size_t i) {
    const int s = params.pairs.intern(imp.query_key, imp.doc_keys[i]);
    if (static_cast<std::size_t>(s) >= alpha_num.size()) {
      alpha_num.resize(static_cast<std::size_t>(s) + 1, 0.0);
      alpha_den.resize(static_cast<std::size_t>(s) + 1, 0.0);
    }
    return static_cast<std::size_t>(s);
  };

  for (const Impression& imp : log.impressions) {
    int last_click = -1;
    for (std::size_t i = 0; i < imp.clicks.size(); ++i) {
      if (imp.clicks[i] != 0) last_click = static_cast<int>(i);
    }
    if (last_click < 0) {
      // No clicks: only rank 1 is assumed examined.
      if (!imp.doc_keys.empty()) alpha_den[slot(imp, 0)] += 1.0;
      continue;
    }
    for (std::size_t i = 0; i <= static_cast<std::size_t>(last_click); ++i) {
      const std::size_t s = slot(imp, i);
      alpha_den[s] += 1.0;
      if (imp.clicks[i] != 0) {
        alpha_num[s] += 1.0;
        clicks_at[i] += 1.0;
      }
    }
    last_click_at[static_cast<std::size_t>(last_click)] += 1.0;
  }

  params.alpha.assign(params.pairs.size(), 0.0);
  double alpha_sum = 0.0;
  std::size_t alpha_defined = 0;
  for (std::size_t s = 0; s < params.pairs.size(); ++s) {
    if (alpha_den[s] > 0) {
      params.alpha[s] = alpha_num[s] / alpha_den[s];
      alpha_sum += params.alpha[s];
      ++alpha_defined;
    }
  }
  if (alpha_defined > 0) params.alpha_default = alpha_sum / static_cast<double>(alpha_defined);
  for (std::size_t s = 0; s < params.pairs.size(); ++s) {
    if (alpha_den[s] == 0) params.alpha[s] = params.alpha_default;
  }

  params.lambda.assign(n_ranks, params.lambda_default);
  for (std::size_t r = 0; r < n_ranks; ++r) {
    if (clicks_at[r] > 0) {
      params.lambda[r] = 1.0 - last_click_at[r] / clicks_at[r];
    }
  }
  return params;
}

}  // namespace usim::click
