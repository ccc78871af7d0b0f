#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>

#include "usim/common/error.hpp"
#include "usim/eval/metrics.hpp"

namespace usim::eval {
namespace {

// Independent BLEU oracle written straight from the formula: n-gram multisets
// keyed by token vectors, explicit smoothing and brevity penalty.
double bleu_oracle(const std::vector<std::string>& cand, const std::vector<std::string>& ref,
                   int max_n = 4) {
  if (cand.empty()) return 0.0;
  const auto grams = [](const std::vector<std::string>& tokens, int n) {
    std::map<std::vector<std::string>, int> counts;
    for (int i = 0; i + n <= static_cast<int>(tokens.size()); ++i) {
      counts[std::vector<std::string>(tokens.begin() + i, tokens.begin() + i + n)] += 1;
    }
    return counts;
  };
  const int order = std::min<int>(max_n, static_cast<int>(cand.size()));
  double log_sum = 0.0;
  for (int n = 1; n <= order; ++n) {
    const auto cand_grams = grams(cand, n);
    const auto ref_grams = grams(ref, n);
    double matched = 0.0;
    double total = 0.0;
    for (const auto& [gram, count] : cand_grams) {
      total += count;
      const auto it = ref_grams.find(gram);
      if (it != ref_grams.end()) matched += std::min(count, it->second);
    }
    if (n >= 2) {
      matched += 1.0;
      total += 1.0;
    }
    if (matched == 0.0) return 0.0;
    log_sum += std::log(matched / total);
  }
  double score = std::exp(log_sum / order);
  if (cand.size() < ref.size()) {
    score *= std::exp(1.0 - static_cast<double>(ref.size()) / static_cast<double>(cand.size()));
  }
  return score;
}

std::vector<std::string> random_tokens(std::mt19937_64& rng, int max_len) {
  static const std::vector<std::string> vocab{"安", "装", "如", "何", "gcc", "linux",
                                              "make", "命", "令", "教", "程"};
  std::uniform_int_distribution<int> len(0, max_len);
  const int n = len(rng);
  std::vector<std::string> tokens;
  for (int i = 0; i < n; ++i) tokens.push_back(vocab[rng() % vocab.size()]);
  return tokens;
}

TEST(Bleu, IdentityScoresOne) {
  const std::vector<std::string> tokens{"如", "何", "安", "装", "gcc"};
  EXPECT_DOUBLE_EQ(bleu(tokens, tokens), 1.0);
}

TEST(Bleu, EmptyCandidateScoresZero) {
  const std::vector<std::string> ref{"a"};
  EXPECT_DOUBLE_EQ(bleu({}, ref), 0.0);
}

TEST(Bleu, BrevityPenaltyHandCase) {
  // cand = [a, b], ref = [a, b, c]: precisions are all 1, BP = exp(1 - 3/2).
  const std::vector<std::string> cand{"a", "b"};
  const std::vector<std::string> ref{"a", "b", "c"};
  EXPECT_NEAR(bleu(cand, ref), std::exp(-0.5), 1e-12);
}

TEST(Bleu, NoUnigramOverlapScoresZero) {
  const std::vector<std::string> cand{"x", "y"};
  const std::vector<std::string> ref{"a", "b"};
  EXPECT_DOUBLE_EQ(bleu(cand, ref), 0.0);
}

TEST(Bleu, MatchesIndependentOracleOnRandomPairs) {
  std::mt19937_64 rng(20240808);
  for (int i = 0; i < 20; ++i) {
    const auto cand = random_tokens(rng, 8);
    const auto ref = random_tokens(rng, 8);
    EXPECT_NEAR(bleu(cand, ref), bleu_oracle(cand, ref), 1e-9)
        << "pair " << i << " cand=" << cand.size() << " ref=" << ref.size();
  }
}

TEST(Bleu, AlwaysWithinUnitInterval) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 200; ++i) {
    const double score = bleu(random_tokens(rng, 6), random_tokens(rng, 6));
    EXPECT_GE(score, 0.0);
    EXPECT_LE(score, 1.0);
  }
}

// ------------------------------------------------------------ bert-style --

TEST(BertStyle, IdenticalListsScoreOne) {
  const EmbeddingSet set{{1.0, 0.0}, {0.5, 0.5}};
  const BertScore score = bert_style_score(set, set);
  EXPECT_DOUBLE_EQ(score.precision, 1.0);
  EXPECT_DOUBLE_EQ(score.recall, 1.0);
  EXPECT_DOUBLE_EQ(score.f1, 1.0);
}

TEST(BertStyle, OrthogonalSingleTokensScoreZero) {
  const BertScore score = bert_style_score({{1.0, 0.0}}, {{0.0, 1.0}});
  EXPECT_DOUBLE_EQ(score.f1, 0.0);
}

TEST(BertStyle, HandComputedThreeByTwoFixture) {
  const EmbeddingSet cand{{1.0, 0.0}, {0.6, 0.8}};
  const EmbeddingSet ref{{0.0, 1.0}, {1.0, 0.0}, {0.8, 0.6}};
  const BertScore score = bert_style_score(cand, ref);
  EXPECT_NEAR(score.precision, (1.0 + 0.96) / 2.0, 1e-9);
  EXPECT_NEAR(score.recall, (0.8 + 1.0 + 0.96) / 3.0, 1e-9);
  EXPECT_NEAR(score.f1, 2.0 * 0.98 * 0.92 / (0.98 + 0.92), 1e-9);
}

TEST(BertStyle, PrecisionRecallSymmetry) {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const auto sample = [&](int n) {
      EmbeddingSet set;
      for (int i = 0; i < n; ++i) set.push_back({normal(rng), normal(rng), normal(rng)});
      return set;
    };
    const EmbeddingSet a = sample(3 + static_cast<int>(rng() % 3));
    const EmbeddingSet b = sample(2 + static_cast<int>(rng() % 4));
    const BertScore ab = bert_style_score(a, b);
    const BertScore ba = bert_style_score(b, a);
    EXPECT_DOUBLE_EQ(ab.precision, ba.recall);
    EXPECT_DOUBLE_EQ(ab.recall, ba.precision);
  }
}

TEST(BertStyle, ZeroVectorCosineIsZero) {
  const BertScore score = bert_style_score({{0.0, 0.0}}, {{1.0, 0.0}});
  EXPECT_DOUBLE_EQ(score.f1, 0.0);
}

TEST(BertStyle, DimensionMismatchThrows) {
  EXPECT_THROW(bert_style_score({{1.0, 0.0}}, {{1.0, 0.0, 0.0}}), Error);
}

// -------------------------------------------------------- classification --

TEST(Classification, PerfectPredictions) {
  const std::vector<std::uint8_t> labels{1, 0, 1};
  const ClassificationReport report = classification_metrics(labels, labels);
  EXPECT_DOUBLE_EQ(report.accuracy, 1.0);
  EXPECT_DOUBLE_EQ(report.f1, 1.0);
}

TEST(Classification, AllNegativePredictionsFlagZeroDenominator) {
  const std::vector<std::uint8_t> preds{0, 0, 0};
  const std::vector<std::uint8_t> labels{1, 0, 1};
  const ClassificationReport report = classification_metrics(preds, labels);
  EXPECT_DOUBLE_EQ(report.recall, 0.0);
  EXPECT_DOUBLE_EQ(report.precision, 0.0);
  EXPECT_DOUBLE_EQ(report.f1, 0.0);
  EXPECT_TRUE(report.zero_denominator);
}

TEST(Classification, RandomFixtureMatchesBruteForceRecount) {
  std::mt19937_64 rng(404);
  std::vector<std::uint8_t> preds(100), labels(100);
  for (int i = 0; i < 100; ++i) {
    preds[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(rng() % 2);
    labels[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(rng() % 2);
  }
  const ClassificationReport report = classification_metrics(preds, labels);
  std::int64_t tp = 0, fp = 0, fn = 0, tn = 0;
  for (int i = 0; i < 100; ++i) {
    const bool p = preds[static_cast<std::size_t>(i)] != 0;
    const bool l = labels[static_cast<std::size_t>(i)] != 0;
    tp += p && l;
    fp += p && !l;
    fn += !p && l;
    tn += !p && !l;
  }
  EXPECT_EQ(report.confusion.tp, tp);
  EXPECT_EQ(report.confusion.fp, fp);
  EXPECT_EQ(report.confusion.fn, fn);
  EXPECT_EQ(report.confusion.tn, tn);
  EXPECT_DOUBLE_EQ(report.accuracy, static_cast<double>(tp + tn) / 100.0);
}

TEST(Classification, LengthMismatchAndEmptyThrow) {
  const std::vector<std::uint8_t> one{1};
  const std::vector<std::uint8_t> two{1, 0};
  EXPECT_THROW(classification_metrics(one, two), Error);
  EXPECT_THROW(classification_metrics({}, {}), Error);
}

}  // namespace
}  // namespace usim::eval
