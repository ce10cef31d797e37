#include "fovr/simulator.hpp"

#include <algorithm>
#include <cmath>

#include "fovr/error.hpp"
#include "text.hpp"

namespace fovr {

Scheme parse_scheme(std::string_view name) {
  if (name == "fovr") return Scheme::fovr;
  if (name == "full") return Scheme::full;
  if (name == "head_only") return Scheme::head_only;
  if (name == "gaze_only") return Scheme::gaze_only;
  throw InvalidInput("unknown scheme '" + std::string(name) + "' (fovr, full, head_only, gaze_only)");
}

std::string_view scheme_name(Scheme s) noexcept {
  switch (s) {
    case Scheme::fovr: return "fovr";
    case Scheme::full: return "full";
    case Scheme::head_only: return "head_only";
    case Scheme::gaze_only: return "gaze_only";
  }
  return "?";
}

void SimConfig::validate() const {
  predictor.validate();
  svr.validate();
  weights.validate();
  for (double d : {processing_delay_ms, prediction_delay_ms, network_latency_ms}) {
    if (!(d >= 0.0) || !std::isfinite(d)) throw InvalidInput("delays must be finite and >= 0 ms");
  }
  if (startup_clips < 1) throw InvalidInput("startup clips must be >= 1");
}

SimAggregates aggregate(const std::vector<ClipRecord>& records) {
  SimAggregates a;
  if (records.empty()) return a;
  const double n = static_cast<double>(records.size());
  std::size_t correct = 0;
  for (const auto& r : records) {
    a.mean_qoe += r.qoe_actual;
    a.total_stall_ms += r.stall_ms;
    if (r.stall_ms > 0.0) ++a.stall_count;
    a.total_bits += r.plan.total_bits;
    a.mean_compression += r.compression;
    if (r.prediction_correct) ++correct;
  }
  a.mean_qoe /= n;
  a.mean_compression /= n;
  double var = 0.0;
  for (const auto& r : records) var += (r.qoe_actual - a.mean_qoe) * (r.qoe_actual - a.mean_qoe);
  a.stddev_qoe = std::sqrt(var / n);
  a.prediction_accuracy = static_cast<double>(correct) / n;
  return a;
}

std::string verify_report(const SimReport& r, double tolerance_ms) {
  const double start = r.startup_clips * r.clip_duration_ms;
  double stalls = 0.0;
  for (std::size_t k = 0; k < r.records.size(); ++k) {
    const auto& rec = r.records[k];
    const std::string at = "clip " + std::to_string(k) + ": ";
    if (rec.clip_index != static_cast<int>(k)) return at + "records out of order";
    if (rec.stall_ms < 0.0) return at + "negative stall";
    if (rec.ready_ms < rec.request_ms) return at + "ready before request";
    stalls += rec.stall_ms;
    const double expect = start + static_cast<double>(k) * r.clip_duration_ms + stalls;
    if (std::abs(rec.display_ms - expect) > tolerance_ms) return at + "playback clock breaks conservation";
    if (rec.ready_ms > rec.display_ms + tolerance_ms) return at + "displayed before ready";
  }
  const SimAggregates a = aggregate(r.records);
  const SimAggregates& b = r.aggregates;
  auto same = [](double x, double y) { return std::abs(x - y) <= 1e-9 * std::max(1.0, std::abs(x)); };
  if (!same(a.mean_qoe, b.mean_qoe) || !same(a.stddev_qoe, b.stddev_qoe) ||
      !same(a.total_stall_ms, b.total_stall_ms) || a.stall_count != b.stall_count ||
      !same(a.total_bits, b.total_bits) || !same(a.mean_compression, b.mean_compression) ||
      !same(a.prediction_accuracy, b.prediction_accuracy)) {
    return "aggregates do not match the records";
  }
  return {};
}

SimReport simulate(const Trace& trace, const TileCatalog& cat, const BandwidthModel& bw, const SimConfig& cfg,
                   Scheme scheme) {
  cfg.validate();
  const double d = static_cast<double>(cat.clip_duration_ms());
  const int clips = cat.clip_count();
  const std::int64_t content0 = trace.front_ms() + cfg.predictor.window_ms();
  const std::int64_t needed = cfg.predictor.window_ms() + static_cast<std::int64_t>(clips) * cat.clip_duration_ms();
  if (trace.span_ms() < needed) {
    throw InvalidInput("trace spans " + std::to_string(trace.span_ms()) + " ms but the window plus " +
                       std::to_string(clips) + " clips need " + std::to_string(needed) + " ms");
  }

  SimReport rep;
  rep.scheme = scheme;
  rep.clip_duration_ms = d;
  rep.startup_clips = cfg.startup_clips;
  rep.records.reserve(static_cast<std::size_t>(clips));

  const double start = cfg.startup_clips * d;
  double stalls = 0.0;
  double link_free = 0.0;
  for (int k = 0; k < clips; ++k) {
    ClipRecord rec;
    rec.clip_index = k;
    const double deadline = start + k * d + stalls;
    rec.request_ms = k < cfg.startup_clips ? 0.0 : deadline - d;

    const std::int64_t lead = (k >= cfg.startup_clips && k >= 1) ? static_cast<std::int64_t>(k - 1) * cat.clip_duration_ms() : 0;
    const std::int64_t tau = content0 + lead;
    SpherePoint attention;
    if (scheme == Scheme::head_only) {
      attention = head_direction(trace, static_cast<double>(tau));
    } else {
      attention = predict_at(trace, tau, cfg.predictor, cfg.svr, cfg.model).mean;
    }
    rec.predicted = attention;

    const BandwidthBudget budget(bw.rate_at(rec.request_ms) * d / 1000.0);
    switch (scheme) {
      case Scheme::fovr:
        rec.plan = schedule_clip(classify_areas(attention, cat.grid()), cat, k, budget, cfg.weights);
        break;
      case Scheme::full:
        rec.plan = baseline_plan(BaselineScheme::full, attention, attention, cat, k, cfg.weights);
        break;
      case Scheme::head_only:
        rec.plan = baseline_plan(BaselineScheme::head_only, attention, attention, cat, k, cfg.weights);
        break;
      case Scheme::gaze_only:
        rec.plan = baseline_plan(BaselineScheme::gaze_only, attention, attention, cat, k, cfg.weights);
        break;
    }
    rec.compression = compression_ratio(rec.plan, cat, k);

    const double send = std::max(
        rec.request_ms + cfg.prediction_delay_ms + cfg.processing_delay_ms + cfg.network_latency_ms, link_free);
    link_free = bw.transfer_end(send, rec.plan.total_bits);
    rec.ready_ms = link_free;
    rec.stall_ms = std::max(0.0, rec.ready_ms - deadline);
    rec.display_ms = deadline + rec.stall_ms;
    stalls += rec.stall_ms;

    const double mid = static_cast<double>(content0) + k * d + d / 2.0;
    const SpherePoint truth = ground_truth_attention(trace, mid);
    rec.actual = classify_areas(truth, cat.grid());
    rec.qoe_actual = delivered_qoe(rec.plan.choice, rec.actual, cfg.weights);
    rec.prediction_correct = angular_distance(attention, truth) <= cfg.predictor.tolerance_deg;
    rep.records.push_back(std::move(rec));
  }
  rep.aggregates = aggregate(rep.records);
  if (const std::string bad = verify_report(rep); !bad.empty()) throw Error("simulation inconsistent: " + bad);
  return rep;
}

}  // namespace fovr
