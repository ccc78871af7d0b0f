#include "usim/llm/types.hpp"

#include "json.hpp"
#include "usim/llm/sha256.hpp"

namespace usim::llm {

std::string to_string(Role role) {
  switch (role) {
    case Role::kSystem: return "system";
    case Role::kUser: return "user";
    case Role::kAssistant: return "assistant";
  }
  return "user";
}

std::string canonical_request(const ProviderConfig& cfg, const ChatRequest& req) {
  nlohmann::ordered_json messages = nlohmann::ordered_json::array();
  for (const ChatMessage& message : req.messages) {
    messages.push_back({{"role", to_string(message.role)}, {"content", message.content}});
  }
  const nlohmann::ordered_json doc{
      {"provider", cfg.provider_id},
      {"model", cfg.model_name},
      {"temperature", req.temperature.value_or(cfg.temperature)},
      {"messages", std::move(messages)}};
  return doc.dump();
}

std::string cache_key(const ProviderConfig& cfg, const ChatRequest& req) {
  return sha256_hex(canonical_request(cfg, req));
}

}  // namespace usim::llm
