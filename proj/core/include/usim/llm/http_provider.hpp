#pragma once

#include "usim/llm/provider.hpp"

namespace usim::llm {

// Chat-completions/embeddings client for the de-facto JSON-over-HTTP shape:
// POST {base_url}/chat/completions and {base_url}/embeddings. The API key is
// read from the environment variable named in the config and sent as a
// bearer token.
class HttpProvider : public Provider {
 public:
  std::string complete(const ChatRequest& request, const ProviderConfig& cfg) override;
  EmbeddingResult embed(std::string_view text, EmbeddingGranularity granularity,
                        const ProviderConfig& cfg) override;
};

}  // namespace usim::llm
