#include "usim/llm/mock_provider.hpp"

#include <cmath>
#include <random>

#include "json.hpp"
#include "usim/common/error.hpp"
#include "usim/common/jsonl.hpp"
#include "usim/text/tokenize.hpp"

namespace usim::llm {

namespace {

using nlohmann::json;

std::string concatenated_text(const ChatRequest& request) {
  std::string all;
  for (const ChatMessage& message : request.messages) {
    all += message.content;
    all += "\n";
  }
  return all;
}

}  // namespace

MockScript MockScript::from_json_text(const std::string& text) {
  const json doc = json::parse(text);
  MockScript script;
  script.echo_last_user = doc.value("echo", false);
  script.fail_first = doc.value("fail_first", 0);
  script.fail_retryable = doc.value("fail_retryable", true);
  script.default_response = doc.value("default", std::string{});
  if (doc.contains("rules")) {
    for (const json& jrule : doc["rules"]) {
      MockRule rule;
      for (const json& s : jrule.value("if_contains", json::array())) {
        rule.if_contains.push_back(s.get<std::string>());
      }
      if (jrule.contains("responses")) {
        for (const json& s : jrule["responses"]) rule.responses.push_back(s.get<std::string>());
      } else if (jrule.contains("response")) {
        rule.responses.push_back(jrule["response"].get<std::string>());
      }
      script.rules.push_back(std::move(rule));
    }
  }
  if (doc.contains("embeddings")) {
    const json& je = doc["embeddings"];
    script.embedding_dim = je.value("dim", 8);
    script.token_granularity = je.value("token_granularity", true);
    script.hash_fallback = je.value("hash_fallback", true);
    if (je.contains("table")) {
      for (const auto& [key, value] : je["table"].items()) {
        script.embedding_table[key] = value.get<std::vector<double>>();
      }
    }
  }
  return script;
}

MockScript MockScript::load_file(const std::string& path) {
  return from_json_text(read_file(path));
}

std::string MockProvider::complete(const ChatRequest& request, const ProviderConfig& cfg) {
  (void)cfg;
  std::lock_guard<std::mutex> lock(mutex_);
  ++calls_;
  if (failures_ < script_.fail_first) {
    ++failures_;
    throw ProviderError("scripted failure " + std::to_string(failures_), script_.fail_retryable);
  }
  if (script_.echo_last_user) {
    for (auto it = request.messages.rbegin(); it != request.messages.rend(); ++it) {
      if (it->role == Role::kUser) return it->content;
    }
    return request.messages.empty() ? std::string{} : request.messages.back().content;
  }
  const std::string text = concatenated_text(request);
  for (std::size_t i = 0; i < script_.rules.size(); ++i) {
    const MockRule& rule = script_.rules[i];
    bool matches = true;
    for (const std::string& needle : rule.if_contains) {
      if (text.find(needle) == std::string::npos) {
        matches = false;
        break;
      }
    }
    if (!matches || rule.responses.empty()) continue;
    std::size_t& cursor = rule_cursor_[i];
    const std::string& response = rule.responses[std::min(cursor, rule.responses.size() - 1)];
    ++cursor;
    return response;
  }
  if (!script_.default_response.empty()) return script_.default_response;
  throw ProviderError("mock script has no matching rule", /*retryable=*/false);
}

EmbeddingResult MockProvider::embed(std::string_view text, EmbeddingGranularity granularity,
                                    const ProviderConfig& cfg) {
  (void)cfg;
  std::lock_guard<std::mutex> lock(mutex_);
  if (script_.embedding_dim <= 0) {
    throw CapabilityError("mock provider has no embedding support");
  }
  if (granularity == EmbeddingGranularity::kToken && !script_.token_granularity) {
    throw CapabilityError("provider does not support token-granularity embeddings");
  }

  EmbeddingResult result;
  result.granularity = granularity;
  const auto lookup = [&](const std::string& unit) -> std::vector<double> {
    const auto it = script_.embedding_table.find(unit);
    if (it != script_.embedding_table.end()) return it->second;
    if (script_.hash_fallback) return hash_token_embedding(unit, script_.embedding_dim);
    throw CapabilityError("no embedding for: " + unit);
  };

  if (granularity == EmbeddingGranularity::kToken) {
    result.token_strings.emplace();
    for (const std::string& token : text::tokenize(text)) {
      result.vectors.push_back(lookup(token));
      result.token_strings->push_back(token);
    }
  } else if (!text.empty()) {
    result.vectors.push_back(lookup(std::string(text)));
  }
  return result;
}

int MockProvider::calls_served() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return calls_;
}

int MockProvider::failures_injected() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return failures_;
}

std::vector<double> hash_token_embedding(std::string_view token, int dim) {
  // FNV-1a over the token bytes seeds a fixed-width Gaussian draw.
  std::uint64_t seed = 1469598103934665603ULL;
  for (const char c : token) {
    seed ^= static_cast<unsigned char>(c);
    seed *= 1099511628211ULL;
  }
  std::mt19937_64 rng(seed);
  std::vector<double> vec(static_cast<std::size_t>(dim));
  // Box-Muller keeps the draw independent of library distribution internals.
  for (std::size_t i = 0; i < vec.size(); i += 2) {
    const double u1 = (static_cast<double>(rng()) + 1.0) / (static_cast<double>(rng.max()) + 2.0);
    const double u2 = (static_cast<double>(rng()) + 1.0) / (static_cast<double>(rng.max()) + 2.0);
    const double radius = std::sqrt(-2.0 * std::log(u1));
    vec[i] = radius * std::cos(2.0 * M_PI * u2);
    if (i + 1 < vec.size()) vec[i + 1] = radius * std::sin(2.0 * M_PI * u2);
  }
  double norm = 0.0;
  for (const double v : vec) norm += v * v;
  norm = std::sqrt(norm);
  if (norm > 0) {
    for (double& v : vec) v /= norm;
  }
  return vec;
}

EmbeddingResult hash_embed(std::string_view text, EmbeddingGranularity granularity, int dim) {
  EmbeddingResult result;
  result.granularity = granularity;
  const std::vector<std::string> tokens = text::tokenize(text);
  if (granularity == EmbeddingGranularity::kToken) {
    result.token_strings.emplace();
    for (const std::string& token : tokens) {
      result.vectors.push_back(hash_token_embedding(token, dim));
      result.token_strings->push_back(token);
    }
    return result;
  }
  if (text.empty()) return result;
  std::vector<double> mean(static_cast<std::size_t>(dim), 0.0);
  if (tokens.empty()) {
    mean = hash_token_embedding(text, dim);
  } else {
    for (const std::string& token : tokens) {
      const std::vector<double> vec = hash_token_embedding(token, dim);
      for (std::size_t i = 0; i < mean.size(); ++i) mean[i] += vec[i];
    }
    double norm = 0.0;
    for (const double v : mean) norm += v * v;
    norm = std::sqrt(norm);
    if (norm > 0) {
      for (double& v : mean) v /= norm;
    }
  }
  result.vectors.push_back(std::move(mean));
  return result;
}

std::string HashEmbeddingProvider::complete(const ChatRequest& request, const ProviderConfig& cfg) {
  (void)request;
  (void)cfg;
  throw CapabilityError("hash embedding provider does not serve chat completions");
}

EmbeddingResult HashEmbeddingProvider::embed(std::string_view text,
                                             EmbeddingGranularity granularity,
                                             const ProviderConfig& cfg) {
  (void)cfg;
  return hash_embed(text, granularity, dim_);
}

}  // namespace usim::llm
