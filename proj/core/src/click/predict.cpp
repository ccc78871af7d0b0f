#include <algorithm>
#include <cmath>

#include "usim/click/models.hpp"

namespace usim::click {

namespace {

constexpr double kLikelihoodEps = 1e-12;

double value_at(const std::vector<double>& table, std::size_t rank, double fallback) {
  if (table.empty()) return fallback;
  return table[std::min(rank, table.size() - 1)];
}

double alpha_for(const PairTable& pairs, const std::vector<double>& values,
                 const std::string& query_key, const std::string& doc_key, double fallback) {
  const auto slot = pairs.find(query_key, doc_key);
  return slot ? values[static_cast<std::size_t>(*slot)] : fallback;
}

double ubm_gamma(const UbmParams& params, std::size_t rank, std::size_t prev_click) {
  if (params.gamma.empty()) return 0.5;
  const std::size_t r = std::min(rank, params.gamma.size() - 1);
  const auto& row = params.gamma[r];
  if (row.empty()) return 0.5;
  return row[std::min(prev_click, row.size() - 1)];
}

double safe_log(double p, bool* clamped) {
  if (p < kLikelihoodEps) {
    if (clamped) *clamped = true;
    p = kLikelihoodEps;
  }
  return std::log(p);
}

// Shared two-state examination-chain recursion for DCM and DBN. `continue_
// prob(i, clicked)` gives P(E_{i+1}=1 | E_i=1, C_i).
template <typename AttractAt, typename ContinueProb>
double chain_log_likelihood(const Impression& imp, AttractAt attract_at,
                            ContinueProb continue_prob, bool* clamped) {
  const std::size_t n = imp.doc_keys.size();
  double f1 = 1.0;  // P(C_{1..r-1}, E_r = 1)
  double f0 = 0.0;  // P(C_{1..r-1}, E_r = 0)
  for (std::size_t r = 0; r < n; ++r) {
    const double a = attract_at(r);
    const bool clicked = imp.clicks[r] != 0;
    const double e1 = f1 * (clicked ? a : 1.0 - a);
    const double e0 = clicked ? 0.0 : f0;
    const double cont = continue_prob(r, clicked);
    f1 = e1 * cont;
    f0 = e1 * (1.0 - cont) + e0;
  }
  return safe_log(f0 + f1, clamped);
}

}  // namespace

std::vector<double> predict_click_probs(const PbmParams& params, const std::string& query_key,
                                        const std::vector<std::string>& doc_keys) {
  std::vector<double> probs;
  probs.reserve(doc_keys.size());
  for (std::size_t r = 0; r < doc_keys.size(); ++r) {
    const double gamma = value_at(params.gamma, r, 0.5);
    const double alpha =
        alpha_for(params.pairs, params.alpha, query_key, doc_keys[r], params.alpha_default);
    probs.push_back(gamma * alpha);
  }
  return probs;
}

std::vector<double> predict_click_probs(const UbmParams& params, const std::string& query_key,
                                        const std::vector<std::string>& doc_keys) {
  const std::size_t n = doc_keys.size();
  std::vector<double> probs(n, 0.0);
  // dist[rp] = P(most recent click so far is at rank rp), rp = 0 for none.
  std::vector<double> dist(n + 1, 0.0);
  dist[0] = 1.0;
  for (std::size_t r = 0; r < n; ++r) {
    const double alpha =
        alpha_for(params.pairs, params.alpha, query_key, doc_keys[r], params.alpha_default);
    double click_prob = 0.0;
    for (std::size_t rp = 0; rp <= r; ++rp) {
      click_prob += dist[rp] * ubm_gamma(params, r, rp) * alpha;
    }
    probs[r] = click_prob;
    std::vector<double> next(n + 1, 0.0);
    for (std::size_t rp = 0; rp <= r; ++rp) {
      next[rp] = dist[rp] * (1.0 - ubm_gamma(params, r, rp) * alpha);
    }
    next[r + 1] = click_prob;
    dist = std::move(next);
  }
  return probs;
}

std::vector<double> predict_click_probs(const DcmParams& params, const std::string& query_key,
                                        const std::vector<std::string>& doc_keys) {
  std::vector<double> probs;
  probs.reserve(doc_keys.size());
  double examine = 1.0;
  for (std::size_t r = 0; r < doc_keys.size(); ++r) {
    const double alpha =
        alpha_for(params.pairs, params.alpha, query_key, doc_keys[r], params.alpha_default);
    const double lambda = value_at(params.lambda, r, params.lambda_default);
    const double p = examine * alpha;
    probs.push_back(p);
    // Examination survives a click with prob lambda and a skip with prob 1.
    examine -= p * (1.0 - lambda);
  }
  return probs;
}

std::vector<double> predict_click_probs(const DbnParams& params, const std::string& query_key,
                                        const std::vector<std::string>& doc_keys) {
  std::vector<double> probs;
  probs.reserve(doc_keys.size());
  double examine = 1.0;
  for (const std::string& doc : doc_keys) {
    const double attract =
        alpha_for(params.pairs, params.attract, query_key, doc, params.attract_default);
    const double satisfy =
        alpha_for(params.pairs, params.satisfy, query_key, doc, params.satisfy_default);
    probs.push_back(examine * attract);
    examine *= params.gamma_continue * (1.0 - attract * satisfy);
  }
  return probs;
}

std::vector<double> predict_click_probs(const ClickModelParams& params,
                                        const std::string& query_key,
                                        const std::vector<std::string>& doc_keys) {
  return std::visit(
      [&](const auto& p) { return predict_click_probs(p, query_key, doc_keys); }, params);
}

std::vector<std::uint8_t> classify(std::span<const double> probs, double threshold) {
  std::vector<std::uint8_t> labels;
  labels.reserve(probs.size());
  for (const double p : probs) labels.push_back(p >= threshold ? 1 : 0);
  return labels;
}

double impression_log_likelihood(const ClickModelParams& params, const Impression& imp,
                                 bool* clamped) {
  return std::visit(
      [&](const auto& model) -> double {
        using T = std::decay_t<decltype(model)>;
        if constexpr (std::is_same_v<T, PbmParams>) {
          double ll = 0.0;
          for (std::size_t r = 0; r < imp.doc_keys.size(); ++r) {
            const double p = value_at(model.gamma, r, 0.5) *
                             alpha_for(model.pairs, model.alpha, imp.query_key,
                                       imp.doc_keys[r], model.alpha_default);
            ll += safe_log(imp.clicks[r] != 0 ? p : 1.0 - p, clamped);
          }
          return ll;
        } else if constexpr (std::is_same_v<T, UbmParams>) {
          double ll = 0.0;
          std::size_t prev_click = 0;
          for (std::size_t r = 0; r < imp.doc_keys.size(); ++r) {
            const double p = ubm_gamma(model, r, prev_click) *
                             alpha_for(model.pairs, model.alpha, imp.query_key,
                                       imp.doc_keys[r], model.alpha_default);
            ll += safe_log(imp.clicks[r] != 0 ? p : 1.0 - p, clamped);
            if (imp.clicks[r] != 0) prev_click = r + 1;
          }
          return ll;
        } else if constexpr (std::is_same_v<T, DcmParams>) {
          return chain_log_likelihood(
              imp,
              [&](std::size_t r) {
                return alpha_for(model.pairs, model.alpha, imp.query_key, imp.doc_keys[r],
                                 model.alpha_default);
              },
              [&](std::size_t r, bool clicked) {
                return clicked ? value_at(model.lambda, r, model.lambda_default) : 1.0;
              },
              clamped);
        } else {
          return chain_log_likelihood(
              imp,
              [&](std::size_t r) {
                return alpha_for(model.pairs, model.attract, imp.query_key, imp.doc_keys[r],
                                 model.attract_default);
              },
              [&](std::size_t r, bool clicked) {
                if (!clicked) return model.gamma_continue;
                const double satisfy = alpha_for(model.pairs, model.satisfy, imp.query_key,
                                                 imp.doc_keys[r], model.satisfy_default);
                return (1.0 - satisfy) * model.gamma_continue;
              },
              clamped);
        }
      },
      params);
}

double log_likelihood(const ClickModelParams& params, const ClickLog& log, bool* clamped) {
  double total = 0.0;
  for (const Impression& imp : log.impressions) {
    total += impression_log_likelihood(params, imp, clamped);
  }
  return total;
}

}  // namespace usim::click
