#pragma once
// Head/gaze traces: file format, validation, resampling, synthesis.
//
// Trace file (UTF-8, one record per line, single-space separated):
//
//   t_ms qw qx qy qz gx gy gz [ox oy oz]
//
// t_ms is a non-negative integer, strictly increasing. (qw..qz) is the head
// orientation, (gx, gy, gz) the gaze direction in the world frame, and the
// optional (ox, oy, oz) the gaze ray origin in meters, which must be the
// sphere center (|origin| <= 1e-6). Reals carry at most 9 fractional digits.
// Lines starting with '#' are comments.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fovr/geometry.hpp"

namespace fovr {

struct GazeOrigin {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  friend bool operator==(const GazeOrigin&, const GazeOrigin&) = default;
};

struct TraceSample {
  std::int64_t t_ms = 0;
  Quaternion head{};
  UnitVec3 gaze{};
  std::optional<GazeOrigin> gaze_origin;
  friend bool operator==(const TraceSample&, const TraceSample&) = default;
};

/// Time-ordered samples. At least two, strictly increasing timestamps.
class Trace {
 public:
  /// Throws ValidationError when the invariants do not hold.
  Trace(std::vector<TraceSample> samples, double nominal_rate_hz);

  const std::vector<TraceSample>& samples() const noexcept { return samples_; }
  std::size_t size() const noexcept { return samples_.size(); }
  std::int64_t front_ms() const noexcept { return samples_.front().t_ms; }
  std::int64_t back_ms() const noexcept { return samples_.back().t_ms; }
  std::int64_t span_ms() const noexcept { return back_ms() - front_ms(); }
  double nominal_rate_hz() const noexcept { return rate_hz_; }

  friend bool operator==(const Trace&, const Trace&) = default;

 private:
  std::vector<TraceSample> samples_;
  double rate_hz_;
};

Trace load_trace(std::istream& in);
Trace load_trace(std::string_view text);
void save_trace(const Trace& tr, std::ostream& out);
std::string serialize_trace(const Trace& tr);

/// Uniform grid t0 + round(k * 1000 / rate_hz) over the trace span; the last
/// timestamp is appended when the grid does not land on it. Orientation is
/// slerped on quaternions, gaze on directions. rate_hz must be in (0, 1000].
Trace resample(const Trace& tr, double rate_hz);

/// Same grid construction over [from_ms, to_ms], which must lie inside the
/// trace span (RangeError otherwise).
Trace resample_span(const Trace& tr, std::int64_t from_ms, std::int64_t to_ms, double rate_hz);

/// Interpolated sample at time t_ms (RangeError outside the span).
TraceSample sample_at(const Trace& tr, double t_ms);

/// Gaze direction at t_ms on the sphere; gaze is the attention ground truth.
SpherePoint ground_truth_attention(const Trace& tr, double t_ms);

/// Head forward direction at t_ms.
SpherePoint head_direction(const Trace& tr, double t_ms);

enum class MotionKind { static_scene, pursuit, saccade };

/// Throws InvalidInput for anything but "static", "pursuit" or "saccade".
MotionKind parse_motion_kind(std::string_view name);
std::string_view motion_kind_name(MotionKind k) noexcept;

struct SyntheticParams {
  double duration_s = 10.0;
  double rate_hz = 10.0;
  double center_yaw_deg = 0.0;
  double center_pitch_deg = 0.0;
  /// Isotropic angular gaze noise. Unset: 0.5 deg for static, 0 otherwise.
  std::optional<double> sigma_deg;
  // pursuit
  double amplitude_yaw_deg = 30.0;
  double amplitude_pitch_deg = 10.0;
  double period_s = 8.0;
  double phase_deg = 0.0;
  // saccade
  double dwell_mean_s = 2.0;
  double jump_deg = 40.0;
  /// Head orientation follows the noise-free attention path this much later.
  double head_lag_ms = 200.0;
};

/// Deterministic for a given (kind, params, seed).
Trace gen_synthetic(MotionKind kind, const SyntheticParams& params, std::uint64_t seed);

}  // namespace fovr
