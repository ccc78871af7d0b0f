#include "usim/llm/cache.hpp"

#include <filesystem>
#include <fstream>

#include "usim/common/error.hpp"
#include "usim/common/jsonl.hpp"

namespace usim::llm {

DiskCache::DiskCache(std::string directory) : directory_(std::move(directory)) {
  std::filesystem::create_directories(directory_);
}

std::mutex& DiskCache::key_mutex(const std::string& key) {
  std::lock_guard<std::mutex> lock(map_mutex_);
  return key_mutexes_[key];
}

std::optional<std::string> DiskCache::get(const std::string& key, const std::string& canonical) {
  std::lock_guard<std::mutex> lock(key_mutex(key));
  const std::string path = directory_ + "/" + key + ".json";
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  nlohmann::json entry = nlohmann::json::parse(in, nullptr, false);
  if (entry.is_discarded() || !entry.contains("request") || !entry.contains("response")) {
    return std::nullopt;
  }
  if (entry["request"].get<std::string>() != canonical) return std::nullopt;
  return entry["response"].get<std::string>();
}

void DiskCache::put(const std::string& key, const std::string& canonical,
                    const std::string& response) {
  std::lock_guard<std::mutex> lock(key_mutex(key));
  const nlohmann::ordered_json entry{
      {"key", key}, {"request", canonical}, {"response", response}};
  atomic_write_file(directory_ + "/" + key + ".json", entry.dump());
}

}  // namespace usim::llm
