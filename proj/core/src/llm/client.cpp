#include "usim/llm/client.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <thread>

#include "usim/common/error.hpp"
#include "usim/llm/http_provider.hpp"
#include "usim/llm/mock_provider.hpp"

namespace usim::llm {

namespace {

std::unique_ptr<Provider> provider_for(const ProviderConfig& cfg) {
  if (cfg.base_url.rfind("mock://", 0) == 0) {
    const std::string path = cfg.base_url.substr(7);
    return std::make_unique<MockProvider>(MockScript::load_file(path));
  }
  if (cfg.base_url.rfind("hash://", 0) == 0) {
    const int dim = std::max(1, std::atoi(cfg.base_url.substr(7).c_str()));
    return std::make_unique<HashEmbeddingProvider>(dim);
  }
  return std::make_unique<HttpProvider>();
}

}  // namespace

std::unique_ptr<Provider> make_provider(const ProviderConfig& cfg) { return provider_for(cfg); }

LlmClient::LlmClient(ProviderConfig cfg, std::unique_ptr<Provider> provider,
                     std::shared_ptr<DiskCache> cache)
    : cfg_(std::move(cfg)),
      provider_(std::move(provider)),
      cache_(std::move(cache)),
      in_flight_(std::max(1, cfg_.max_in_flight)) {}

LlmClient::LlmClient(ProviderConfig cfg, std::shared_ptr<DiskCache> cache)
    : LlmClient(cfg, provider_for(cfg), std::move(cache)) {}

std::string LlmClient::call_with_retries(const ChatRequest& request, int& retries_out) {
  retries_out = 0;
  for (int attempt = 0;; ++attempt) {
    try {
      in_flight_.acquire();
      struct Release {
        std::counting_semaphore<4096>& sem;
        ~Release() { sem.release(); }
      } release{in_flight_};
      return provider_->complete(request, cfg_);
    } catch (const ProviderError& e) {
      if (!e.retryable() || attempt >= cfg_.max_retries) throw;
      retries_out = attempt + 1;
      if (backoff_ms_ > 0) {
        std::this_thread::sleep_for(std::chrono::milliseconds(backoff_ms_ << attempt));
      }
    }
  }
}

ChatResponse LlmClient::complete(const ChatRequest& request) {
  ChatResponse response;
  response.provider_id = cfg_.provider_id;

  const std::string canonical = canonical_request(cfg_, request);
  const std::string key = cache_key(cfg_, request);
  if (cache_) {
    if (auto hit = cache_->get(key, canonical)) {
      response.content = std::move(*hit);
      response.cached = true;
      return response;
    }
  }

  const auto start = std::chrono::steady_clock::now();
  response.content = call_with_retries(request, response.retries);
  response.latency_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  if (cache_) cache_->put(key, canonical, response.content);
  return response;
}

EmbeddingResult LlmClient::embed(std::string_view text, EmbeddingGranularity granularity) {
  EmbeddingResult result = provider_->embed(text, granularity, cfg_);
  if (!result.vectors.empty()) {
    const std::size_t dim = result.vectors.front().size();
    for (const auto& vec : result.vectors) {
      if (vec.size() != dim) throw Error("dimension mismatch across embedding batch");
    }
  }
  if (result.granularity == EmbeddingGranularity::kToken && result.token_strings &&
      result.token_strings->size() != result.vectors.size()) {
    throw Error("token strings not aligned with vectors");
  }
  return result;
}

}  // namespace usim::llm
