#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "usim/eval/evaluate.hpp"

namespace usim::eval {

nlohmann::ordered_json report_to_json(const MetricReport& report);
MetricReport report_from_json(const nlohmann::json& doc);

// Column-aligned methods-by-metrics table for one stage (query reports show
// bleu / bert / mauve / fid; click and stop reports show the classification
// metrics).
std::string render_report_table(const std::string& stage,
                                const std::vector<MetricReport>& reports);

}  // namespace usim::eval
