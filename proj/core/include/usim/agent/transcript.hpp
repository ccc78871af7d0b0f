#pragma once

#include <istream>
#include <mutex>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "usim/llm/types.hpp"

namespace usim::agent {

// One provider exchange. `stage` carries both the simulation stage and the
// role of the exchange, e.g. "query_thought" or "stop_action".
struct TranscriptEntry {
  std::string session_id;
  std::string stage;
  nlohmann::ordered_json request;  // {"messages": [...], "temperature": ...}
  std::string response;
  bool cached = false;
};

// Append-only line-delimited JSON log; writes are serialized.
class TranscriptWriter {
 public:
  explicit TranscriptWriter(std::ostream& out) : out_(out) {}

  void append(const TranscriptEntry& entry);

  static nlohmann::ordered_json request_json(const llm::ChatRequest& request,
                                             const llm::ProviderConfig& cfg);
  static std::vector<TranscriptEntry> read(std::istream& in);

 private:
  std::ostream& out_;
  std::mutex mutex_;
};

}  // namespace usim::agent
