#include "cli_config.hpp"

#include "json.hpp"
#include "usim/common/error.hpp"
#include "usim/common/jsonl.hpp"

namespace usim::cli {

namespace {

using nlohmann::json;

llm::ProviderConfig provider_from_json(const std::string& id, const json& doc) {
  llm::ProviderConfig cfg;
  cfg.provider_id = id;
  cfg.base_url = doc.value("base_url", std::string{});
  cfg.model_name = doc.value("model_name", id);
  cfg.api_key_env = doc.value("api_key_env", std::string{});
  cfg.temperature = doc.value("temperature", 0.0);
  cfg.timeout_seconds = doc.value("timeout_seconds", 30.0);
  cfg.max_retries = doc.value("max_retries", 2);
  cfg.max_in_flight = doc.value("max_in_flight", 4);
  if (cfg.base_url.empty()) {
    throw Error("provider '" + id + "' needs a base_url");
  }
  return cfg;
}

}  // namespace

RunConfig RunConfig::load_file(const std::string& path) {
  const json doc = json::parse(read_file(path));
  RunConfig config;
  if (doc.contains("providers")) {
    for (const auto& [id, body] : doc["providers"].items()) {
      config.providers.emplace(id, provider_from_json(id, body));
    }
  }
  config.templates_dir = doc.value("templates_dir", config.templates_dir);
  config.cache_dir = doc.value("cache_dir", config.cache_dir);
  config.embedding_provider = doc.value("embedding_provider", config.embedding_provider);
  config.stopwords_path = doc.value("stopwords", config.stopwords_path);
  if (doc.contains("budget")) {
    config.budget.max_rounds = doc["budget"].value("max_rounds", config.budget.max_rounds);
    config.budget.max_clicks_per_round =
        doc["budget"].value("max_clicks_per_round", config.budget.max_clicks_per_round);
  }
  config.seed = doc.value("seed", config.seed);
  config.jobs = doc.value("jobs", config.jobs);
  return config;
}

const llm::ProviderConfig& RunConfig::provider(const std::string& id) const {
  const auto it = providers.find(id);
  if (it == providers.end()) {
    throw UsageError("provider '" + id + "' not present in the config file");
  }
  return it->second;
}

std::shared_ptr<llm::DiskCache> RunConfig::make_cache() const {
  if (cache_dir.empty()) return nullptr;
  return std::make_shared<llm::DiskCache>(cache_dir);
}

agent::ClientMap RunConfig::make_clients(const std::shared_ptr<llm::DiskCache>& cache) const {
  agent::ClientMap clients;
  for (const auto& [id, cfg] : providers) {
    clients.emplace(id, std::make_shared<llm::LlmClient>(cfg, cache));
  }
  return clients;
}

}  // namespace usim::cli
