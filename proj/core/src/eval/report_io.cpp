#include "usim/eval/report_io.hpp"

#include <iomanip>
#include <sstream>

#include "usim/common/error.hpp"

namespace usim::eval {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string formatted(double value) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(4) << value;
  return out.str();
}

}  // namespace

nlohmann::ordered_json report_to_json(const MetricReport& report) {
  ordered_json doc{{"method", report.method},
                   {"stage", report.stage},
                   {"count", report.count},
                   {"overall", report.overall}};
  if (!report.per_task.empty()) doc["per_task"] = report.per_task;
  if (!report.flags.empty()) doc["flags"] = report.flags;
  return doc;
}

MetricReport report_from_json(const nlohmann::json& doc) {
  MetricReport report;
  report.method = doc.value("method", std::string{});
  report.stage = doc.value("stage", std::string{});
  report.count = doc.value("count", std::int64_t{0});
  if (doc.contains("overall")) {
    for (const auto& [key, value] : doc["overall"].items()) {
      report.overall[key] = value.get<double>();
    }
  }
  if (doc.contains("per_task")) {
    for (const auto& [task, metrics] : doc["per_task"].items()) {
      for (const auto& [key, value] : metrics.items()) {
        report.per_task[task][key] = value.get<double>();
      }
    }
  }
  if (doc.contains("flags")) {
    for (const auto& flag : doc["flags"]) report.flags.push_back(flag.get<std::string>());
  }
  return report;
}

std::string render_report_table(const std::string& stage,
                                const std::vector<MetricReport>& reports) {
  std::vector<std::pair<std::string, std::string>> columns;  // header, metric key
  if (stage == "query") {
    columns = {{"Bleu", "bleu"}, {"Bert", "bert_f1"}, {"MAUVE", "mauve"}, {"FID", "fid"}};
  } else {
    columns = {{"Accuracy", "accuracy"},
               {"Precision", "precision"},
               {"Recall", "recall"},
               {"F1", "f1"}};
  }

  std::size_t method_width = std::string("Methods").size();
  for (const MetricReport& report : reports) {
    method_width = std::max(method_width, report.method.size());
  }
  constexpr std::size_t kColWidth = 10;

  std::ostringstream out;
  out << std::left << std::setw(static_cast<int>(method_width + 2)) << "Methods";
  for (const auto& [header, key] : columns) {
    out << std::right << std::setw(kColWidth) << header;
  }
  out << "\n";
  for (const MetricReport& report : reports) {
    if (report.stage != stage) {
      throw Error("report for method '" + report.method + "' has stage '" + report.stage +
                  "', expected '" + stage + "'");
    }
    out << std::left << std::setw(static_cast<int>(method_width + 2)) << report.method;
    for (const auto& [header, key] : columns) {
      const auto it = report.overall.find(key);
      out << std::right << std::setw(kColWidth)
          << (it == report.overall.end() ? std::string("-") : formatted(it->second));
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace usim::eval
