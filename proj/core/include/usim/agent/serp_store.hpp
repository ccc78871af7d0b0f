#pragma once

#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <unordered_map>
#include <vector>

#include "usim/model/types.hpp"

namespace usim::agent {

// Recorded SERPs keyed by query text (trimmed and ASCII-casefolded for
// lookup). Replaces a live search engine so simulations are reproducible.
class SerpStore {
 public:
  // Line-delimited JSON: {"query": ..., "serp": [SerpItem...]}.
  static SerpStore load(std::istream& in);

  void add(const std::string& query, std::vector<SerpItem> serp);
  std::optional<std::vector<SerpItem>> lookup(const std::string& query) const;

  // A store built from a dataset's recorded rounds.
  static SerpStore from_dataset(const Dataset& dataset);

  void write(std::ostream& out) const;
  std::size_t size() const { return by_query_.size(); }

 private:
  std::unordered_map<std::string, std::vector<SerpItem>> by_query_;
  std::vector<std::string> insertion_order_;
};

}  // namespace usim::agent
