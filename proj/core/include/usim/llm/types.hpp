#pragma once

#include <optional>
#include <string>
#include <vector>

namespace usim::llm {

struct ProviderConfig {
  std::string provider_id;
  std::string base_url;       // http(s)://..., "mock://<script path>", or "hash://<dim>"
  std::string model_name;
  std::string api_key_env;    // name of the environment variable holding the key
  double temperature = 0.0;
  double timeout_seconds = 30.0;
  int max_retries = 2;
  int max_in_flight = 4;      // limiter on concurrent requests to this provider
};

enum class Role { kSystem, kUser, kAssistant };

std::string to_string(Role role);

struct ChatMessage {
  Role role = Role::kUser;
  std::string content;
};

struct ChatRequest {
  std::vector<ChatMessage> messages;
  std::optional<double> temperature;  // overrides the provider default
};

struct ChatResponse {
  std::string content;
  std::string provider_id;
  bool cached = false;
  double latency_ms = 0.0;
  int retries = 0;
};

enum class EmbeddingGranularity { kText, kToken };

struct EmbeddingResult {
  std::vector<std::vector<double>> vectors;
  EmbeddingGranularity granularity = EmbeddingGranularity::kText;
  // Aligned with `vectors` when granularity is kToken.
  std::optional<std::vector<std::string>> token_strings;
};

// Stable content-addressed key: differs whenever provider_id, model_name,
// message list, or effective temperature differ; identical across restarts.
std::string cache_key(const ProviderConfig& cfg, const ChatRequest& req);

// Canonical serialization the cache key hashes; also stored in cache entries
// so a hit can be verified against the live request.
std::string canonical_request(const ProviderConfig& cfg, const ChatRequest& req);

}  // namespace usim::llm
