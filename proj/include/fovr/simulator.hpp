#pragma once
// Clip-by-clip streaming playout: predict, schedule, download, display.
//
// Timeline (D = clip duration, S = startup clips, all times in ms of wall
// clock, playback begins at S*D):
//
//   deadline_k = S*D + k*D + sum(stall_j, j < k)
//   request_k  = 0 for k < S, else deadline_k - D
//   ready_k    = max(request_k + prediction + processing + latency,
//                    end of the previous transfer) + transfer time
//   stall_k    = max(0, ready_k - deadline_k)
//   display_k  = deadline_k + stall_k
//
// Trace time at the request of clip k is front + window + (k-1)*D (or
// front + window for the first clip and the startup clips). The user is
// scored on the ground-truth gaze at the middle of the clip's content,
// front + window + k*D + D/2.

#include <string>
#include <string_view>
#include <vector>

#include "fovr/bandwidth.hpp"
#include "fovr/catalog.hpp"
#include "fovr/prediction.hpp"
#include "fovr/scheduler.hpp"
#include "fovr/svr.hpp"
#include "fovr/trace.hpp"

namespace fovr {

enum class Scheme { fovr, full, head_only, gaze_only };

Scheme parse_scheme(std::string_view name);
std::string_view scheme_name(Scheme s) noexcept;

struct SimConfig {
  PredictorConfig predictor{};
  SvrConfig svr{};
  PredictorModel model = PredictorModel::svr;
  double processing_delay_ms = 90.0;
  double prediction_delay_ms = 0.066;
  double network_latency_ms = 20.0;
  int startup_clips = 1;
  QoeWeights weights{};

  void validate() const;
};

struct ClipRecord {
  int clip_index = 0;
  double request_ms = 0.0;
  double ready_ms = 0.0;
  double display_ms = 0.0;
  double stall_ms = 0.0;
  ClipPlan plan;
  AreaMap actual;
  SpherePoint predicted;
  double qoe_actual = 0.0;
  double compression = 0.0;
  bool prediction_correct = false;
};

struct SimAggregates {
  double mean_qoe = 0.0;
  double stddev_qoe = 0.0;  // population
  double total_stall_ms = 0.0;
  std::size_t stall_count = 0;
  double total_bits = 0.0;
  double mean_compression = 0.0;
  double prediction_accuracy = 0.0;
};

struct SimReport {
  Scheme scheme = Scheme::fovr;
  double clip_duration_ms = 1000.0;
  int startup_clips = 1;
  std::vector<ClipRecord> records;
  SimAggregates aggregates;
};

SimAggregates aggregate(const std::vector<ClipRecord>& records);

/// Recomputes the aggregates and checks the playback-clock conservation
/// law and record invariants. Returns an empty string when consistent,
/// otherwise the first violation.
std::string verify_report(const SimReport& r, double tolerance_ms = 1e-6);

/// Throws InvalidInput when the trace cannot cover window + all clips.
SimReport simulate(const Trace& trace, const TileCatalog& cat, const BandwidthModel& bw, const SimConfig& cfg,
                   Scheme scheme);

enum class ReportFormat { rows, summary };

ReportFormat parse_report_format(std::string_view name);

/// rows: header
///   clip,request_ms,ready_ms,display_ms,stall_ms,bits,scheduled_qoe,actual_qoe,correct
/// then one line per clip (ms with 3 decimals, bits as an integer, QoE with
/// 6 decimals, correct as 0/1).
/// summary: one JSON object with sorted keys.
std::string emit_report(const SimReport& r, ReportFormat format);

}  // namespace fovr
