#pragma once
// Link capacity over time: a constant rate or a step function.
//
// Trace file: one `t_ms,bps` pair per line, first timestamp 0, timestamps
// strictly increasing, rates > 0. The rate of a step holds until the next
// timestamp; the last one holds forever. Blank lines and lines starting
// with '#' are skipped.

#include <cstdint>
#include <iosfwd>
#include <string_view>
#include <vector>

namespace fovr {

struct BandwidthStep {
  double t_ms = 0.0;
  double bps = 0.0;
  friend bool operator==(const BandwidthStep&, const BandwidthStep&) = default;
};

class BandwidthModel {
 public:
  static BandwidthModel constant(double bps);
  /// Throws ValidationError on an empty list, a first step not at 0,
  /// non-increasing timestamps or non-positive rates.
  static BandwidthModel steps(std::vector<BandwidthStep> steps);

  bool is_constant() const noexcept { return steps_.size() == 1; }
  const std::vector<BandwidthStep>& step_list() const noexcept { return steps_; }

  /// Rate in bits per second at t_ms (t < 0 reads the first step).
  double rate_at(double t_ms) const noexcept;

  /// Time at which `bits` finish when sent from start_ms at full link rate.
  double transfer_end(double start_ms, double bits) const;

 private:
  explicit BandwidthModel(std::vector<BandwidthStep> s) : steps_(std::move(s)) {}
  std::vector<BandwidthStep> steps_;
};

BandwidthModel load_bandwidth_trace(std::istream& in);
BandwidthModel load_bandwidth_trace(std::string_view text);

}  // namespace fovr
