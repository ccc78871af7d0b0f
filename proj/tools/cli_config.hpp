#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>

#include "usim/agent/agent.hpp"
#include "usim/llm/cache.hpp"
#include "usim/llm/types.hpp"

namespace usim::cli {

// Structured run configuration (--config file plus flag overrides).
struct RunConfig {
  std::map<std::string, llm::ProviderConfig> providers;
  std::string templates_dir = "templates";
  std::string cache_dir;          // empty = caching off
  std::string embedding_provider; // provider id; empty = built-in hash://64
  std::string stopwords_path;
  agent::Budget budget;
  std::uint64_t seed = 1;
  int jobs = 1;

  static RunConfig load_file(const std::string& path);

  const llm::ProviderConfig& provider(const std::string& id) const;

  // Fresh clients for one session/run. Mock providers get fresh script state
  // each time so sequential scripts behave identically session to session.
  agent::ClientMap make_clients(const std::shared_ptr<llm::DiskCache>& cache) const;

  std::shared_ptr<llm::DiskCache> make_cache() const;
};

}  // namespace usim::cli
