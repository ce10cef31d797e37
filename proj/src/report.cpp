#include <json.hpp>

#include "fovr/error.hpp"
#include "fovr/simulator.hpp"
#include "text.hpp"

namespace fovr {

ReportFormat parse_report_format(std::string_view name) {
  if (name == "rows") return ReportFormat::rows;
  if (name == "summary") return ReportFormat::summary;
  throw InvalidInput("unknown report format '" + std::string(name) + "' (rows, summary)");
}

std::string emit_report(const SimReport& r, ReportFormat format) {
  if (format == ReportFormat::rows) {
    std::string out = "clip,request_ms,ready_ms,display_ms,stall_ms,bits,scheduled_qoe,actual_qoe,correct\n";
    for (const auto& rec : r.records) {
      out += std::to_string(rec.clip_index) + ',' + text::fixed(rec.request_ms, 3) + ',' +
             text::fixed(rec.ready_ms, 3) + ',' + text::fixed(rec.display_ms, 3) + ',' +
             text::fixed(rec.stall_ms, 3) + ',' + text::fixed(rec.plan.total_bits, 0) + ',' +
             text::fixed(rec.plan.scheduled_qoe, 6) + ',' + text::fixed(rec.qoe_actual, 6) + ',' +
             (rec.prediction_correct ? '1' : '0') + '\n';
    }
    return out;
  }
  // Reals go through fixed-point text so the summary is byte-stable.
  auto num = [](double v, int digits) { return nlohmann::json::parse(text::fixed(v, digits)); };
  const SimAggregates& a = r.aggregates;
  nlohmann::json doc = {
      {"scheme", std::string(scheme_name(r.scheme))},
      {"clips", r.records.size()},
      {"mean_qoe", num(a.mean_qoe, 6)},
      {"stddev_qoe", num(a.stddev_qoe, 6)},
      {"total_stall_ms", num(a.total_stall_ms, 3)},
      {"stall_count", a.stall_count},
      {"total_bits", num(a.total_bits, 0)},
      {"mean_compression", num(a.mean_compression, 6)},
      {"prediction_accuracy", num(a.prediction_accuracy, 6)},
  };
  return doc.dump(2) + "\n";
}

}  // namespace fovr
