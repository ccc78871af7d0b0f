#include "usim/agent/transcript.hpp"

#include "usim/common/jsonl.hpp"

namespace usim::agent {

void TranscriptWriter::append(const TranscriptEntry& entry) {
  const nlohmann::ordered_json record{{"session_id", entry.session_id},
                                      {"stage", entry.stage},
                                      {"request", entry.request},
                                      {"response", entry.response},
                                      {"cached", entry.cached}};
  std::lock_guard<std::mutex> lock(mutex_);
  out_ << record.dump() << "\n";
}

nlohmann::ordered_json TranscriptWriter::request_json(const llm::ChatRequest& request,
                                                      const llm::ProviderConfig& cfg) {
  nlohmann::ordered_json messages = nlohmann::ordered_json::array();
  for (const llm::ChatMessage& message : request.messages) {
    messages.push_back({{"role", llm::to_string(message.role)}, {"content", message.content}});
  }
  return {{"messages", std::move(messages)},
          {"temperature", request.temperature.value_or(cfg.temperature)}};
}

std::vector<TranscriptEntry> TranscriptWriter::read(std::istream& in) {
  std::vector<TranscriptEntry> entries;
  for_each_jsonl(in, [&](const nlohmann::json& record, std::size_t) {
    TranscriptEntry entry;
    entry.session_id = record.value("session_id", std::string{});
    entry.stage = record.value("stage", std::string{});
    if (record.contains("request")) entry.request = record["request"];
    entry.response = record.value("response", std::string{});
    entry.cached = record.value("cached", false);
    entries.push_back(std::move(entry));
  });
  return entries;
}

}  // namespace usim::agent
