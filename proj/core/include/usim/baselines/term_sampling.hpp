#pragma once

#include <cstdint>
#include <istream>
#include <random>
#include <string>
#include <unordered_set>
#include <vector>

#include "usim/model/types.hpp"

namespace usim::baselines {

// Term frequencies over task description plus associated document texts,
// with a deterministic (sorted) vocabulary order.
struct TermCorpus {
  std::vector<std::string> vocab;
  std::vector<std::int64_t> counts;  // aligned with vocab, all >= 1
  std::int64_t total = 0;
};

std::unordered_set<std::string> load_stopwords(std::istream& in);

// Tokenizes with the shared CJK-aware tokenizer and drops stopwords.
// Throws Error when no terms survive filtering.
TermCorpus build_corpus(const SearchTask& task, const std::vector<std::string>& docs,
                        const std::unordered_set<std::string>& stopwords = {});

enum class SampleMode { kRandom, kFrequent };

SampleMode sample_mode_from_string(const std::string& name);

// Draws `length` distinct terms without replacement (uniform or
// count-proportional) and joins them with single spaces. Deterministic for a
// fixed generator state. Throws Error when length exceeds the vocabulary.
std::string sample_query(const TermCorpus& corpus, int length, SampleMode mode,
                         std::mt19937_64& rng);

}  // namespace usim::baselines
