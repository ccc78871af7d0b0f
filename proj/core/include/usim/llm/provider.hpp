#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "usim/llm/types.hpp"

namespace usim::llm {

// One backend for chat completions and embeddings. Implementations throw
// ProviderError (retryable flag set for transient failures) or
// CapabilityError when an operation is unsupported.
class Provider {
 public:
  virtual ~Provider() = default;

  virtual std::string complete(const ChatRequest& request, const ProviderConfig& cfg) = 0;

  virtual EmbeddingResult embed(std::string_view text, EmbeddingGranularity granularity,
                                const ProviderConfig& cfg) = 0;
};

// Dispatches on the base_url scheme: mock:// -> scripted mock provider,
// hash://<dim> -> deterministic hash embeddings, anything else -> HTTP.
std::unique_ptr<Provider> make_provider(const ProviderConfig& cfg);

}  // namespace usim::llm
