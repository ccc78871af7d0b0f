#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "support/synthetic_clicks.hpp"
#include "usim/click/models.hpp"

// Parameter recovery on data sampled from the model definitions. The
// acceptance harness runs the same checks at 50k impressions; these stay
// smaller to keep the unit suite quick.
namespace usim::click {
namespace {

using usim::testing::DbnDoc;
using usim::testing::make_pool;
using usim::testing::sample_dbn;
using usim::testing::sample_dcm;
using usim::testing::sample_pbm;
using usim::testing::sample_ubm;

TEST(Recovery, PbmProductsWithinTolerance) {
  const std::vector<double> gamma{0.9, 0.6, 0.3};
  const auto pool = make_pool(3, 3, {0.2, 0.5, 0.8});
  const ClickLog log = sample_pbm(pool, gamma, 20000, 42);
  TrainConfig config;
  config.max_iters = 100;
  const auto [params, report] = fit_pbm(log, config);

  double worst = 0.0;
  for (const auto& [query, docs] : pool.docs) {
    std::vector<std::string> keys;
    for (const auto& [doc, alpha] : docs) keys.push_back(doc);
    const auto probs = predict_click_probs(params, query, keys);
    for (std::size_t r = 0; r < docs.size(); ++r) {
      worst = std::max(worst, std::abs(probs[r] - gamma[r] * docs[r].second));
    }
  }
  EXPECT_LE(worst, 0.05);
}

TEST(Recovery, UbmObservedContextProductsWithinTolerance) {
  const std::vector<std::vector<double>> gamma{
      {0.95}, {0.65, 0.9}, {0.4, 0.6, 0.85}};
  const auto pool = make_pool(3, 3, {0.3, 0.55, 0.8});
  const ClickLog log = sample_ubm(pool, gamma, 20000, 7);
  TrainConfig config;
  config.max_iters = 150;
  const auto [params, report] = fit_ubm(log, config);

  // Count observed (rank, prev-click) contexts, then compare gamma*alpha on
  // the well-supported ones.
  std::map<std::pair<int, int>, int> support;
  for (const Impression& imp : log.impressions) {
    int prev = 0;
    for (std::size_t r = 0; r < imp.clicks.size(); ++r) {
      ++support[{static_cast<int>(r), prev}];
      if (imp.clicks[r] != 0) prev = static_cast<int>(r) + 1;
    }
  }
  double worst = 0.0;
  int checked = 0;
  for (const auto& [query, docs] : pool.docs) {
    for (std::size_t r = 0; r < docs.size(); ++r) {
      for (std::size_t rp = 0; rp <= r; ++rp) {
        if (support[{static_cast<int>(r), static_cast<int>(rp)}] < 500) continue;
        const auto slot = params.pairs.find(query, docs[r].first);
        ASSERT_TRUE(slot.has_value());
        const double fitted =
            params.gamma[r][rp] * params.alpha[static_cast<std::size_t>(*slot)];
        const double truth = gamma[r][rp] * docs[r].second;
        worst = std::max(worst, std::abs(fitted - truth));
        ++checked;
      }
    }
  }
  EXPECT_GT(checked, 0);
  EXPECT_LE(worst, 0.07);
}

TEST(Recovery, DcmLambdaWithinTolerance) {
  // High attractiveness keeps the last-click estimator consistent at the
  // shallow ranks; compare there.
  const std::vector<double> lambda{0.7, 0.5, 0.35, 0.6, 0.5};
  const auto pool = make_pool(2, 5, {0.9});
  const ClickLog log = sample_dcm(pool, lambda, 20000, 13);
  const DcmParams params = fit_dcm(log);
  for (std::size_t r = 0; r < 3; ++r) {
    EXPECT_NEAR(params.lambda[r], lambda[r], 0.05) << "rank " << (r + 1);
  }
}

TEST(Recovery, DbnAttractWithinTolerance) {
  std::map<std::string, std::vector<DbnDoc>> pool;
  for (int q = 0; q < 2; ++q) {
    auto& docs = pool["q" + std::to_string(q)];
    docs.push_back({"d" + std::to_string(q) + "_0", 0.75, 0.6});
    docs.push_back({"d" + std::to_string(q) + "_1", 0.5, 0.4});
    docs.push_back({"d" + std::to_string(q) + "_2", 0.3, 0.2});
  }
  const ClickLog log = sample_dbn(pool, 1.0, 20000, 17);
  TrainConfig config;
  config.max_iters = 150;
  const auto [params, report] = fit_dbn(log, 1.0, config);

  double worst = 0.0;
  for (const auto& [query, docs] : pool) {
    for (const DbnDoc& doc : docs) {
      const auto slot = params.pairs.find(query, doc.key);
      ASSERT_TRUE(slot.has_value());
      worst = std::max(worst,
                       std::abs(params.attract[static_cast<std::size_t>(*slot)] - doc.attract));
    }
  }
  EXPECT_LE(worst, 0.05);
}

// On data generated from model M, the fitted M should beat the other fitted
// models on held-out log-likelihood.
TEST(Recovery, ModelSelectionSanity) {
  TrainConfig config;
  config.max_iters = 80;

  const auto held_out_lls = [&](const ClickLog& train, const ClickLog& test) {
    std::map<std::string, double> lls;
    lls["pbm"] = log_likelihood(ClickModelParams{fit_pbm(train, config).first}, test);
    lls["dcm"] = log_likelihood(ClickModelParams{fit_dcm(train)}, test);
    lls["dbn"] = log_likelihood(ClickModelParams{fit_dbn(train, 1.0, config).first}, test);
    return lls;
  };
  const auto split = [](ClickLog log, ClickLog& train, ClickLog& test) {
    for (std::size_t i = 0; i < log.impressions.size(); ++i) {
      (i % 4 == 3 ? test : train).impressions.push_back(std::move(log.impressions[i]));
    }
  };

  {
    // PBM data with a non-monotone examination curve, which the cascade
    // models cannot express (their examination never rises with rank).
    std::map<std::string, std::vector<DbnDoc>> shuffled_pool;
    for (int q = 0; q < 3; ++q) {
      auto& docs = shuffled_pool["q" + std::to_string(q)];
      docs.push_back({"d" + std::to_string(q) + "_0", 0.7, 0.0});
      docs.push_back({"d" + std::to_string(q) + "_1", 0.4, 0.0});
      docs.push_back({"d" + std::to_string(q) + "_2", 0.6, 0.0});
    }
    // Sample PBM clicks manually over shuffled doc orders.
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const std::vector<double> gamma{1.0, 0.25, 0.9};
    ClickLog log;
    int serial = 0;
    while (log.impressions.size() < 12000) {
      for (auto& [query, docs] : shuffled_pool) {
        std::vector<std::size_t> order{0, 1, 2};
        std::shuffle(order.begin(), order.end(), rng);
        Impression imp;
        imp.session_id = "s" + std::to_string(serial++);
        imp.query_key = query;
        for (std::size_t r = 0; r < order.size(); ++r) {
          imp.doc_keys.push_back(docs[order[r]].key);
          imp.clicks.push_back(unit(rng) < gamma[r] * docs[order[r]].attract ? 1 : 0);
        }
        log.impressions.push_back(std::move(imp));
      }
    }
    ClickLog train, test;
    split(std::move(log), train, test);
    const auto lls = held_out_lls(train, test);
    EXPECT_GE(lls.at("pbm"), lls.at("dcm"));
    EXPECT_GE(lls.at("pbm"), lls.at("dbn"));
  }

  {
    // DBN data with strong doc-specific satisfaction over shuffled orders.
    std::map<std::string, std::vector<DbnDoc>> pool;
    for (int q = 0; q < 3; ++q) {
      auto& docs = pool["q" + std::to_string(q)];
      docs.push_back({"d" + std::to_string(q) + "_0", 0.8, 0.9});
      docs.push_back({"d" + std::to_string(q) + "_1", 0.6, 0.1});
      docs.push_back({"d" + std::to_string(q) + "_2", 0.5, 0.7});
    }
    ClickLog train, test;
    split(sample_dbn(pool, 1.0, 12000, 29), train, test);
    const auto lls = held_out_lls(train, test);
    EXPECT_GE(lls.at("dbn"), lls.at("pbm"));
    EXPECT_GE(lls.at("dbn"), lls.at("dcm"));
  }

  {
    // DCM data: rank-dependent continuation over shuffled doc orders, so the
    // per-doc satisfaction of DBN cannot absorb the per-rank lambdas.
    const auto pool = make_pool(3, 3, {0.75, 0.5, 0.65});
    ClickLog train, test;
    split(sample_dcm(pool, {0.8, 0.2, 0.5}, 12000, 31, /*shuffle=*/true), train, test);
    const auto lls = held_out_lls(train, test);
    EXPECT_GE(lls.at("dcm"), lls.at("pbm"));
    EXPECT_GE(lls.at("dcm"), lls.at("dbn"));
  }
}

}  // namespace
}  // namespace usim::click
