#include "usim/click/params.hpp"

#include <algorithm>

namespace usim::click {

std::string PairTable::joined(const std::string& q, const std::string& d) {
  std::string key;
  key.reserve(q.size() + d.size() + 1);
  key += q;
  key += '\x1f';
  key += d;
  return key;
}

int PairTable::intern(const std::string& query_key, const std::string& doc_key) {
  const std::string key = joined(query_key, doc_key);
  const auto it = index_.find(key);
  if (it != index_.end()) return it->second;
  const int slot = static_cast<int>(keys_.size());
  index_.emplace(key, slot);
  keys_.emplace_back(query_key, doc_key);
  return slot;
}

std::optional<int> PairTable::find(const std::string& query_key,
                                   const std::string& doc_key) const {
  const auto it = index_.find(joined(query_key, doc_key));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

double clamp_prob(double p) { return std::clamp(p, kProbFloor, kProbCeil); }

std::string model_name(const ClickModelParams& params) {
  switch (params.index()) {
    case 0: return "pbm";
    case 1: return "ubm";
    case 2: return "dcm";
    case 3: return "dbn";
  }
  return "unknown";
}

}  // namespace usim::click
