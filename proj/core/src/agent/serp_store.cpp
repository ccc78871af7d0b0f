#include "usim/agent/serp_store.hpp"

#include "json.hpp"
#include "usim/common/error.hpp"
#include "usim/common/jsonl.hpp"
#include "usim/model/session_log.hpp"
#include "usim/text/tokenize.hpp"

namespace usim::agent {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::vector<SerpItem> serp_from_json(const json& array) {
  std::vector<SerpItem> serp;
  int next_rank = 1;
  for (const json& jitem : array) {
    SerpItem item;
    item.rank = jitem.value("rank", next_rank);
    item.title = jitem.value("title", std::string{});
    item.snippet = jitem.value("snippet", std::string{});
    item.url = jitem.value("url", std::string{});
    if (jitem.contains("content") && jitem["content"].is_string()) {
      item.content = jitem["content"].get<std::string>();
    }
    serp.push_back(std::move(item));
    ++next_rank;
  }
  return serp;
}

}  // namespace

SerpStore SerpStore::load(std::istream& in) {
  SerpStore store;
  for_each_jsonl(in, [&](const json& record, std::size_t line) {
    if (!record.contains("query") || !record.contains("serp")) {
      throw ParseError("SERP store record needs query and serp", line);
    }
    store.add(record["query"].get<std::string>(), serp_from_json(record["serp"]));
  });
  return store;
}

void SerpStore::add(const std::string& query, std::vector<SerpItem> serp) {
  const std::string key = text::trim_casefold(query);
  if (by_query_.find(key) == by_query_.end()) insertion_order_.push_back(query);
  by_query_[key] = std::move(serp);
}

std::optional<std::vector<SerpItem>> SerpStore::lookup(const std::string& query) const {
  const auto it = by_query_.find(text::trim_casefold(query));
  if (it == by_query_.end()) return std::nullopt;
  return it->second;
}

SerpStore SerpStore::from_dataset(const Dataset& dataset) {
  SerpStore store;
  for (const Session& session : dataset.sessions) {
    for (const QueryRound& round : session.rounds) {
      if (!round.serp.empty()) store.add(round.query, round.serp);
    }
  }
  return store;
}

void SerpStore::write(std::ostream& out) const {
  for (const std::string& query : insertion_order_) {
    const auto it = by_query_.find(text::trim_casefold(query));
    if (it == by_query_.end()) continue;
    ordered_json serp = ordered_json::array();
    for (const SerpItem& item : it->second) {
      ordered_json jitem{{"rank", item.rank},
                         {"title", item.title},
                         {"snippet", item.snippet},
                         {"url", item.url}};
      if (item.content) jitem["content"] = *item.content;
      serp.push_back(std::move(jitem));
    }
    out << ordered_json{{"query", query}, {"serp", std::move(serp)}}.dump() << "\n";
  }
}

}  // namespace usim::agent
