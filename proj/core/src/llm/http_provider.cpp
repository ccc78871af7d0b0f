#include "httplib.h"

#include "usim/llm/http_provider.hpp"

#include <cstdlib>
#include <cmath>

#include "json.hpp"
#include "usim/common/error.hpp"
#include "usim/text/tokenize.hpp"

namespace usim::llm {

namespace {

using nlohmann::json;

struct SplitUrl {
  std::string origin;  // scheme://host[:port]
  std::string path;    // optional prefix, no trailing slash
};

SplitUrl split_url(const std::string& base_url) {
  const std::size_t scheme_end = base_url.find("://");
  if (scheme_end == std::string::npos) {
    throw usim::Error("base_url must include a scheme: " + base_url);
  }
  const std::size_t path_start = base_url.find('/', scheme_end + 3);
  SplitUrl out;
  if (path_start == std::string::npos) {
    out.origin = base_url;
  } else {
    out.origin = base_url.substr(0, path_start);
    out.path = base_url.substr(path_start);
    while (!out.path.empty() && out.path.back() == '/') out.path.pop_back();
  }
  return out;
}

httplib::Headers auth_headers(const ProviderConfig& cfg) {
  httplib::Headers headers{{"Content-Type", "application/json"}};
  if (!cfg.api_key_env.empty()) {
    const char* key = std::getenv(cfg.api_key_env.c_str());
    if (key == nullptr || *key == '\0') {
      throw usim::ProviderError(
          "API key environment variable not set: " + cfg.api_key_env, /*retryable=*/false);
    }
    headers.emplace("Authorization", std::string("Bearer ") + key);
  }
  return headers;
}

json post_json(const ProviderConfig& cfg, const std::string& endpoint, const json& payload) {
  const SplitUrl url = split_url(cfg.base_url);
  httplib::Client client(url.origin);
  const auto seconds = static_cast<time_t>(cfg.timeout_seconds);
  const auto micros =
      static_cast<time_t>((cfg.timeout_seconds - std::floor(cfg.timeout_seconds)) * 1e6);
  client.set_connection_timeout(seconds, micros);
  client.set_read_timeout(seconds, micros);
  client.set_write_timeout(seconds, micros);

  const auto result =
      client.Post(url.path + endpoint, auth_headers(cfg), payload.dump(), "application/json");
  if (!result) {
    throw usim::ProviderError(
        "connection to " + cfg.base_url + " failed: " + httplib::to_string(result.error()),
        /*retryable=*/true);
  }
  const int status = result->status;
  if (status == 401 || status == 403) {
    throw usim::ProviderError("authentication failed (" + std::to_string(status) + ")",
                              /*retryable=*/false);
  }
  if (status == 408 || status == 429 || status >= 500) {
    throw usim::ProviderError("transient HTTP " + std::to_string(status), /*retryable=*/true);
  }
  if (status != 200) {
    throw usim::ProviderError("HTTP " + std::to_string(status) + ": " + result->body,
                              /*retryable=*/false);
  }
  json body = json::parse(result->body, nullptr, false);
  if (body.is_discarded()) {
    throw usim::ProviderError("malformed provider payload (not JSON)", /*retryable=*/false);
  }
  return body;
}

}  // namespace

std::string HttpProvider::complete(const ChatRequest& request, const ProviderConfig& cfg) {
  json messages = json::array();
  for (const ChatMessage& message : request.messages) {
    messages.push_back({{"role", to_string(message.role)}, {"content", message.content}});
  }
  const json payload{{"model", cfg.model_name},
                     {"messages", std::move(messages)},
                     {"temperature", request.temperature.value_or(cfg.temperature)}};
  const json body = post_json(cfg, "/chat/completions", payload);
  if (!body.contains("choices") || body["choices"].empty() ||
      !body["choices"][0].contains("message") ||
      !body["choices"][0]["message"].contains("content")) {
    throw usim::ProviderError("malformed provider payload (missing choices[0].message.content)",
                              /*retryable=*/false);
  }
  return body["choices"][0]["message"]["content"].get<std::string>();
}

EmbeddingResult HttpProvider::embed(std::string_view text, EmbeddingGranularity granularity,
                                    const ProviderConfig& cfg) {
  EmbeddingResult result;
  result.granularity = granularity;

  std::vector<std::string> inputs;
  if (granularity == EmbeddingGranularity::kToken) {
    // Per-token vectors are obtained by embedding each token separately.
    inputs = text::tokenize(text);
    result.token_strings = inputs;
  } else if (!text.empty()) {
    inputs.emplace_back(text);
  }
  if (inputs.empty()) return result;

  const json payload{{"model", cfg.model_name}, {"input", inputs}};
  const json body = post_json(cfg, "/embeddings", payload);
  if (!body.contains("data") || !body["data"].is_array()) {
    throw usim::ProviderError("malformed provider payload (missing data)", /*retryable=*/false);
  }
  std::size_t dim = 0;
  for (const json& item : body["data"]) {
    if (!item.contains("embedding")) {
      throw usim::ProviderError("malformed provider payload (missing embedding)",
                                /*retryable=*/false);
    }
    auto vec = item["embedding"].get<std::vector<double>>();
    if (dim == 0) dim = vec.size();
    if (vec.size() != dim) {
      throw usim::Error("dimension mismatch across embedding batch");
    }
    result.vectors.push_back(std::move(vec));
  }
  if (result.vectors.size() != inputs.size()) {
    throw usim::ProviderError("embedding count does not match input count", /*retryable=*/false);
  }
  return result;
}

}  // namespace usim::llm
