#pragma once
// Online attention prediction over a sliding window of gaze samples.
//
// Per window: time is normalized to [0, 1] over the window, yaw is unwrapped,
// and yaw and pitch are each fitted as a least-squares trend plus an SVR on
// the trend residual. The fitted curves are evaluated at the horizon
// timestamps, yaw is re-wrapped, and the horizon points are clustered into a
// single mean direction with spherical_mean.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "fovr/geometry.hpp"
#include "fovr/svr.hpp"
#include "fovr/trace.hpp"

namespace fovr {

struct PredictorConfig {
  double window_s = 5.0;
  double horizon_s = 1.0;
  double rate_hz = 10.0;
  double tolerance_deg = 5.0;

  void validate() const;
  std::int64_t window_ms() const noexcept;
  std::int64_t horizon_ms() const noexcept;
};

struct HorizonPoint {
  std::int64_t t_ms = 0;
  SpherePoint point;
};

struct AttentionEstimate {
  SpherePoint mean;
  std::vector<HorizonPoint> horizon_points;
  double tolerance_deg = 5.0;
  /// Window end, i.e. the instant the prediction is made.
  std::int64_t issued_ms = 0;
  /// The horizon points cancelled out; `mean` is the last horizon point.
  bool degenerate_mean = false;
};

enum class PredictorModel { svr, linear };

/// `window` must span cfg.window_s within 10% and be sampled at cfg.rate_hz.
AttentionEstimate predict_attention(const Trace& window, const PredictorConfig& cfg,
                                    const SvrConfig& svr_cfg);

/// Same pipeline with ordinary least squares only.
AttentionEstimate linear_predict_attention(const Trace& window, const PredictorConfig& cfg);

/// Cuts the window ending at end_ms out of `tr` (resampled to cfg.rate_hz)
/// and predicts with the chosen model.
AttentionEstimate predict_at(const Trace& tr, std::int64_t end_ms, const PredictorConfig& cfg,
                             const SvrConfig& svr_cfg, PredictorModel model);

struct EstimateAccuracy {
  std::size_t correct = 0;
  std::size_t total = 0;
  double accuracy() const noexcept {
    return total == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(total);
  }
  bool all_correct() const noexcept { return correct == total; }
};

struct AccuracyReport {
  std::vector<EstimateAccuracy> per_estimate;
  std::size_t correct = 0;
  std::size_t total = 0;
  double accuracy = 0.0;
};

/// A horizon instant is correct iff the estimate's mean is within
/// tolerance_deg (inclusive) of the ground-truth gaze at that instant.
AccuracyReport eval_accuracy(std::span<const AttentionEstimate> estimates, const Trace& truth,
                             double tolerance_deg);

/// Windows ending at front + window, then every step_ms, while the horizon
/// still fits inside the trace. Throws InvalidInput if not even one fits.
std::vector<AttentionEstimate> sliding_predictions(const Trace& tr, const PredictorConfig& cfg,
                                                   const SvrConfig& svr_cfg, PredictorModel model,
                                                   std::int64_t step_ms);

/// Prediction dump: `clip_index t_ms yaw_deg pitch_deg correct` per estimate,
/// where t_ms is the window end and correct is 1 when every horizon instant
/// is within tolerance.
std::string format_prediction_dump(std::span<const AttentionEstimate> estimates,
                                   const AccuracyReport& report);

/// Least-squares line y = slope * x + intercept.
struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double operator()(double x) const noexcept { return slope * x + intercept; }
};
LinearFit fit_line(std::span<const double> xs, std::span<const double> ys);

/// Removes +-360 jumps between consecutive yaw samples.
std::vector<double> unwrap_yaw(std::span<const double> yaw_deg);

}  // namespace fovr
