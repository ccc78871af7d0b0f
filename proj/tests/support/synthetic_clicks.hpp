#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "usim/click/click_log.hpp"

// Test-side oracles: data sampled straight from the model definitions, plus
// exhaustive latent-state likelihood enumeration. Independent of the fitting
// and prediction code they check.
namespace usim::testing {

using click::ClickLog;
using click::Impression;

struct DocPool {
  // query -> ordered docs with per-doc parameter values.
  std::map<std::string, std::vector<std::pair<std::string, double>>> docs;
};

// Round-robin doc pool: `n_queries` queries of `n_ranks` docs whose parameter
// values cycle through `values`.
inline DocPool make_pool(int n_queries, int n_ranks, const std::vector<double>& values) {
  DocPool pool;
  int v = 0;
  for (int q = 0; q < n_queries; ++q) {
    auto& docs = pool.docs["q" + std::to_string(q)];
    for (int d = 0; d < n_ranks; ++d) {
      docs.emplace_back("d" + std::to_string(q) + "_" + std::to_string(d),
                        values[static_cast<std::size_t>(v++) % values.size()]);
    }
  }
  return pool;
}

inline ClickLog sample_pbm(const DocPool& pool, const std::vector<double>& gamma,
                           int n_impressions, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  ClickLog log;
  int serial = 0;
  while (static_cast<int>(log.impressions.size()) < n_impressions) {
    for (const auto& [query, docs] : pool.docs) {
      if (static_cast<int>(log.impressions.size()) >= n_impressions) break;
      Impression imp;
      imp.session_id = "imp" + std::to_string(serial++);
      imp.query_key = query;
      for (std::size_t r = 0; r < docs.size(); ++r) {
        imp.doc_keys.push_back(docs[r].first);
        imp.clicks.push_back(unit(rng) < gamma[r] * docs[r].second ? 1 : 0);
      }
      log.impressions.push_back(std::move(imp));
    }
  }
  return log;
}

// gamma[r][rp] with rp = 1-based rank of the most recent click, 0 for none.
inline ClickLog sample_ubm(const DocPool& pool,
                           const std::vector<std::vector<double>>& gamma, int n_impressions,
                           std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  ClickLog log;
  int serial = 0;
  while (static_cast<int>(log.impressions.size()) < n_impressions) {
    for (const auto& [query, docs] : pool.docs) {
      if (static_cast<int>(log.impressions.size()) >= n_impressions) break;
      Impression imp;
      imp.session_id = "imp" + std::to_string(serial++);
      imp.query_key = query;
      std::size_t prev_click = 0;
      for (std::size_t r = 0; r < docs.size(); ++r) {
        imp.doc_keys.push_back(docs[r].first);
        const bool clicked = unit(rng) < gamma[r][prev_click] * docs[r].second;
        imp.clicks.push_back(clicked ? 1 : 0);
        if (clicked) prev_click = r + 1;
      }
      log.impressions.push_back(std::move(imp));
    }
  }
  return log;
}

// Cascade with continuation: always continue past a skip, continue after a
// click at rank r with probability lambda[r]. Optionally shuffles the doc
// order per impression so attractiveness is identified at every rank.
inline ClickLog sample_dcm(const DocPool& pool, const std::vector<double>& lambda,
                           int n_impressions, std::uint64_t seed, bool shuffle = false) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  ClickLog log;
  int serial = 0;
  while (static_cast<int>(log.impressions.size()) < n_impressions) {
    for (const auto& [query, docs] : pool.docs) {
      if (static_cast<int>(log.impressions.size()) >= n_impressions) break;
      std::vector<std::size_t> order(docs.size());
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
      if (shuffle) std::shuffle(order.begin(), order.end(), rng);
      Impression imp;
      imp.session_id = "imp" + std::to_string(serial++);
      imp.query_key = query;
      bool examining = true;
      for (std::size_t r = 0; r < order.size(); ++r) {
        imp.doc_keys.push_back(docs[order[r]].first);
        bool clicked = false;
        if (examining && unit(rng) < docs[order[r]].second) {
          clicked = true;
          examining = unit(rng) < lambda[r];
        }
        imp.clicks.push_back(clicked ? 1 : 0);
      }
      log.impressions.push_back(std::move(imp));
    }
  }
  return log;
}

// DBN chain with a per-doc (attract, satisfy) pair and a scalar continuation
// probability. Doc order is shuffled per impression so attractiveness is
// identified separately from position.
struct DbnDoc {
  std::string key;
  double attract;
  double satisfy;
};

inline ClickLog sample_dbn(const std::map<std::string, std::vector<DbnDoc>>& pool,
                           double gamma_continue, int n_impressions, std::uint64_t seed,
                           bool shuffle = true) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  ClickLog log;
  int serial = 0;
  while (static_cast<int>(log.impressions.size()) < n_impressions) {
    for (const auto& [query, docs] : pool) {
      if (static_cast<int>(log.impressions.size()) >= n_impressions) break;
      std::vector<std::size_t> order(docs.size());
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
      if (shuffle) std::shuffle(order.begin(), order.end(), rng);

      Impression imp;
      imp.session_id = "imp" + std::to_string(serial++);
      imp.query_key = query;
      bool examining = true;
      for (const std::size_t i : order) {
        imp.doc_keys.push_back(docs[i].key);
        bool clicked = false;
        if (examining) {
          if (unit(rng) < docs[i].attract) {
            clicked = true;
            if (unit(rng) < docs[i].satisfy) {
              examining = false;
            } else {
              examining = unit(rng) < gamma_continue;
            }
          } else {
            examining = unit(rng) < gamma_continue;
          }
        }
        imp.clicks.push_back(clicked ? 1 : 0);
      }
      log.impressions.push_back(std::move(imp));
    }
  }
  return log;
}

// ---- exhaustive latent-state enumeration oracles (lengths <= ~3) ----------

// DCM: latents are attraction coins A_r and post-click continuation coins
// B_r. The click vector is a deterministic function of (A, B).
inline double enumerate_dcm_likelihood(const Impression& imp,
                                       const std::function<double(std::size_t)>& alpha_at,
                                       const std::function<double(std::size_t)>& lambda_at) {
  const std::size_t n = imp.doc_keys.size();
  double total = 0.0;
  for (unsigned a_bits = 0; a_bits < (1u << n); ++a_bits) {
    for (unsigned b_bits = 0; b_bits < (1u << n); ++b_bits) {
      double prob = 1.0;
      bool examining = true;
      bool consistent = true;
      for (std::size_t r = 0; r < n; ++r) {
        const bool attracted = (a_bits >> r) & 1u;
        const bool continues = (b_bits >> r) & 1u;
        prob *= attracted ? alpha_at(r) : 1.0 - alpha_at(r);
        prob *= continues ? lambda_at(r) : 1.0 - lambda_at(r);
        const bool clicked = examining && attracted;
        if (clicked != (imp.clicks[r] != 0)) {
          consistent = false;
          break;
        }
        if (clicked) examining = continues;
      }
      if (consistent) total += prob;
    }
  }
  return std::log(total);
}

// DBN: latents are attraction A_r, satisfaction S_r, continuation B_r.
inline double enumerate_dbn_likelihood(const Impression& imp,
                                       const std::function<double(std::size_t)>& attract_at,
                                       const std::function<double(std::size_t)>& satisfy_at,
                                       double gamma_continue) {
  const std::size_t n = imp.doc_keys.size();
  double total = 0.0;
  for (unsigned a_bits = 0; a_bits < (1u << n); ++a_bits) {
    for (unsigned s_bits = 0; s_bits < (1u << n); ++s_bits) {
      for (unsigned b_bits = 0; b_bits < (1u << n); ++b_bits) {
        double prob = 1.0;
        bool examining = true;
        bool consistent = true;
        for (std::size_t r = 0; r < n; ++r) {
          const bool attracted = (a_bits >> r) & 1u;
          const bool satisfied = (s_bits >> r) & 1u;
          const bool continues = (b_bits >> r) & 1u;
          prob *= attracted ? attract_at(r) : 1.0 - attract_at(r);
          prob *= satisfied ? satisfy_at(r) : 1.0 - satisfy_at(r);
          prob *= continues ? gamma_continue : 1.0 - gamma_continue;
          const bool clicked = examining && attracted;
          if (clicked != (imp.clicks[r] != 0)) {
            consistent = false;
            break;
          }
          if (clicked) {
            examining = satisfied ? false : continues;
          } else if (examining) {
            examining = continues;
          }
        }
        if (consistent) total += prob;
      }
    }
  }
  return std::log(total);
}

}  // namespace usim::testing
