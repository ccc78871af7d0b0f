#include "usim/baselines/term_sampling.hpp"

#include <algorithm>
#include <map>

#include "usim/common/error.hpp"
#include "usim/text/tokenize.hpp"

namespace usim::baselines {

std::unordered_set<std::string> load_stopwords(std::istream& in) {
  std::unordered_set<std::string> stopwords;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) stopwords.insert(line);
  }
  return stopwords;
}

TermCorpus build_corpus(const SearchTask& task, const std::vector<std::string>& docs,
                        const std::unordered_set<std::string>& stopwords) {
  std::map<std::string, std::int64_t> counts;
  const auto add_text = [&](const std::string& text) {
    for (const std::string& token : text::tokenize(text)) {
      if (stopwords.find(token) != stopwords.end()) continue;
      ++counts[token];
    }
  };
  add_text(task.description);
  for (const std::string& doc : docs) add_text(doc);

  if (counts.empty()) {
    throw Error("term corpus is empty after stopword filtering (task " + task.task_id + ")");
  }
  TermCorpus corpus;
  corpus.vocab.reserve(counts.size());
  corpus.counts.reserve(counts.size());
  for (const auto& [term, count] : counts) {
    corpus.vocab.push_back(term);
    corpus.counts.push_back(count);
    corpus.total += count;
  }
  return corpus;
}

SampleMode sample_mode_from_string(const std::string& name) {
  if (name == "random") return SampleMode::kRandom;
  if (name == "frequent") return SampleMode::kFrequent;
  throw UsageError("unknown sampling mode: " + name);
}

std::string sample_query(const TermCorpus& corpus, int length, SampleMode mode,
                         std::mt19937_64& rng) {
  if (length < 1) throw Error("query length must be >= 1");
  if (static_cast<std::size_t>(length) > corpus.vocab.size()) {
    throw Error("query length exceeds vocabulary size");
  }

  std::vector<std::size_t> remaining(corpus.vocab.size());
  for (std::size_t i = 0; i < remaining.size(); ++i) remaining[i] = i;
  std::vector<double> weights;
  if (mode == SampleMode::kFrequent) {
    weights.reserve(remaining.size());
    for (const std::int64_t c : corpus.counts) weights.push_back(static_cast<double>(c));
  }

  std::string query;
  for (int drawn = 0; drawn < length; ++drawn) {
    std::size_t pick;
    if (mode == SampleMode::kRandom) {
      std::uniform_int_distribution<std::size_t> dist(0, remaining.size() - 1);
      pick = dist(rng);
    } else {
      double total = 0.0;
      for (const std::size_t idx : remaining) total += weights[idx];
      std::uniform_real_distribution<double> dist(0.0, total);
      double point = dist(rng);
      pick = remaining.size() - 1;
      for (std::size_t j = 0; j < remaining.size(); ++j) {
        point -= weights[remaining[j]];
        if (point <= 0.0) {
          pick = j;
          break;
        }
      }
    }
    if (!query.empty()) query += ' ';
    query += corpus.vocab[remaining[pick]];
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(pick));
  }
  return query;
}

}  // namespace usim::baselines
