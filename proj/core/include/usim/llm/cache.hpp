#pragma once

#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>

#include "json.hpp"

namespace usim::llm {

// Content-addressed on-disk store: one JSON file per cache key holding the
// canonical request and the recorded response. Access is serialized per key.
class DiskCache {
 public:
  explicit DiskCache(std::string directory);

  // Returns the stored response only when the stored canonical request
  // matches `canonical`; a key collision therefore can never surface a
  // response recorded under a different request.
  std::optional<std::string> get(const std::string& key, const std::string& canonical);

  void put(const std::string& key, const std::string& canonical, const std::string& response);

  const std::string& directory() const { return directory_; }

 private:
  std::mutex& key_mutex(const std::string& key);

  std::string directory_;
  std::mutex map_mutex_;
  std::unordered_map<std::string, std::mutex> key_mutexes_;
};

}  // namespace usim::llm
