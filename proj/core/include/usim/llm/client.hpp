#pragma once

#include <memory>
#include <semaphore>
#include <string>
#include <string_view>

#include "usim/llm/cache.hpp"
#include "usim/llm/provider.hpp"

namespace usim::llm {

// Wraps a Provider with deterministic-run machinery: a content-addressed
// response cache, exponential-backoff retries for transient failures, and a
// limiter on in-flight requests. Safe for concurrent use.
class LlmClient {
 public:
  LlmClient(ProviderConfig cfg, std::unique_ptr<Provider> provider,
            std::shared_ptr<DiskCache> cache = nullptr);

  // Convenience constructor that picks a provider from the base_url scheme.
  explicit LlmClient(ProviderConfig cfg, std::shared_ptr<DiskCache> cache = nullptr);

  ChatResponse complete(const ChatRequest& request);
  EmbeddingResult embed(std::string_view text, EmbeddingGranularity granularity);

  const ProviderConfig& config() const { return cfg_; }
  Provider& provider() { return *provider_; }

  // Backoff base for retry sleeps; tests set this to zero.
  void set_backoff_ms(int ms) { backoff_ms_ = ms; }

 private:
  std::string call_with_retries(const ChatRequest& request, int& retries_out);

  ProviderConfig cfg_;
  std::unique_ptr<Provider> provider_;
  std::shared_ptr<DiskCache> cache_;
  int backoff_ms_ = 250;
  std::counting_semaphore<4096> in_flight_;
};

}  // namespace usim::llm
