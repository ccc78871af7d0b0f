#pragma once

#include <cstddef>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "usim/llm/provider.hpp"

namespace usim::llm {

// One scripted response rule: fires when every `if_contains` substring
// appears in the concatenated request text. Responses are consumed in order;
// the last one repeats once the list is exhausted.
struct MockRule {
  std::vector<std::string> if_contains;
  std::vector<std::string> responses;
};

struct MockScript {
  bool echo_last_user = false;        // respond with the last user message
  int fail_first = 0;                 // fail this many calls before succeeding
  bool fail_retryable = true;         // transient vs auth-style failure
  std::vector<MockRule> rules;
  std::string default_response;       // used when no rule matches (if non-empty)

  // Embedding behaviour.
  int embedding_dim = 0;                                   // 0 = no embedding support
  bool token_granularity = true;                           // supports kToken
  std::map<std::string, std::vector<double>> embedding_table;  // exact-text lookup
  bool hash_fallback = false;  // fall back to hash embeddings on table miss

  static MockScript from_json_text(const std::string& text);
  static MockScript load_file(const std::string& path);
};

class MockProvider : public Provider {
 public:
  explicit MockProvider(MockScript script) : script_(std::move(script)) {}

  std::string complete(const ChatRequest& request, const ProviderConfig& cfg) override;
  EmbeddingResult embed(std::string_view text, EmbeddingGranularity granularity,
                        const ProviderConfig& cfg) override;

  int calls_served() const;
  int failures_injected() const;

 private:
  MockScript script_;
  std::vector<std::size_t> rule_cursor_ = std::vector<std::size_t>(script_.rules.size(), 0);
  int calls_ = 0;
  int failures_ = 0;
  mutable std::mutex mutex_;
};

// Deterministic pseudo-embedding for a token: fixed-dimension vector seeded
// from the token bytes, L2-normalized. Text-granularity embeddings are the
// normalized mean of the token vectors.
std::vector<double> hash_token_embedding(std::string_view token, int dim);
EmbeddingResult hash_embed(std::string_view text, EmbeddingGranularity granularity, int dim);

// Provider that serves only hash embeddings (base_url "hash://<dim>").
class HashEmbeddingProvider : public Provider {
 public:
  explicit HashEmbeddingProvider(int dim) : dim_(dim) {}

  std::string complete(const ChatRequest& request, const ProviderConfig& cfg) override;
  EmbeddingResult embed(std::string_view text, EmbeddingGranularity granularity,
                        const ProviderConfig& cfg) override;

 private:
  int dim_;
};

}  // namespace usim::llm
