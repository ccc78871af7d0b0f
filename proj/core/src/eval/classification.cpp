#include "usim/common/error.hpp"
#include "usim/eval/metrics.hpp"

namespace usim::eval {

ClassificationReport classification_metrics(std::span<const std::uint8_t> predictions,
                                            std::span<const std::uint8_t> labels) {
  if (predictions.size() != labels.size()) {
    throw Error("classification_metrics: length mismatch");
  }
  if (predictions.empty()) {
    throw Error("classification_metrics: empty input");
  }

  ClassificationReport report;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const bool pred = predictions[i] != 0;
    const bool truth = labels[i] != 0;
    if (pred && truth) ++report.confusion.tp;
    else if (pred && !truth) ++report.confusion.fp;
    else if (!pred && truth) ++report.confusion.fn;
    else ++report.confusion.tn;
  }

  const auto& cm = report.confusion;
  const double total = static_cast<double>(cm.tp + cm.fp + cm.fn + cm.tn);
  report.accuracy = static_cast<double>(cm.tp + cm.tn) / total;
  if (cm.tp + cm.fp > 0) {
    report.precision = static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fp);
  } else {
    report.zero_denominator = true;
  }
  if (cm.tp + cm.fn > 0) {
    report.recall = static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fn);
  } else {
    report.zero_denominator = true;
  }
  report.f1 = report.precision + report.recall > 0.0
                  ? 2.0 * report.precision * report.recall / (report.precision + report.recall)
                  : 0.0;
  return report;
}

}  // namespace usim::eval
