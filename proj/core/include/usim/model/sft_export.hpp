#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "usim/model/types.hpp"
#include "usim/prompt/template.hpp"

namespace usim {

struct SftRecord {
  std::string input;   // fully rendered prompt
  std::string output;  // "Reasoning: " + recorded thought
  Stage stage = Stage::kQuery;
};

// One record per action of `stage` that carries a non-empty recorded thought.
// Query-stage inputs see the history of prior rounds; click-stage inputs add
// the round's SERP listing (one record per clicked result with a thought);
// stop-stage inputs see the history including the just-completed round.
std::vector<SftRecord> export_sft_records(const Dataset& dataset, Stage stage,
                                          const PromptTemplate& tmpl);

void write_sft_records(std::ostream& out, const std::vector<SftRecord>& records);

}  // namespace usim
