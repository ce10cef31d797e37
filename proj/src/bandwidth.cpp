#include "fovr/bandwidth.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <iterator>
#include <string>

#include "fovr/error.hpp"
#include "text.hpp"

namespace fovr {

BandwidthModel BandwidthModel::constant(double bps) {
  return steps({{0.0, bps}});
}

BandwidthModel BandwidthModel::steps(std::vector<BandwidthStep> s) {
  if (s.empty()) throw ValidationError("bandwidth trace has no steps");
  if (s.front().t_ms != 0.0) throw ValidationError("bandwidth trace must start at t = 0");
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!(s[i].bps > 0.0) || !std::isfinite(s[i].bps)) throw ValidationError("bandwidth must be finite and > 0");
    if (i > 0 && !(s[i].t_ms > s[i - 1].t_ms)) throw ValidationError("bandwidth timestamps must strictly increase");
  }
  return BandwidthModel(std::move(s));
}

double BandwidthModel::rate_at(double t_ms) const noexcept {
  auto it = std::upper_bound(steps_.begin(), steps_.end(), t_ms,
                             [](double t, const BandwidthStep& s) { return t < s.t_ms; });
  return it == steps_.begin() ? steps_.front().bps : std::prev(it)->bps;
}

double BandwidthModel::transfer_end(double start_ms, double bits) const {
  if (!(bits >= 0.0) || !std::isfinite(bits)) throw InvalidInput("transfer size must be finite and >= 0");
  double t = start_ms;
  double left = bits;
  auto it = std::upper_bound(steps_.begin(), steps_.end(), t,
                             [](double x, const BandwidthStep& s) { return x < s.t_ms; });
  std::size_t i = it == steps_.begin() ? 0 : static_cast<std::size_t>(std::prev(it) - steps_.begin());
  while (left > 0.0) {
    const double rate = steps_[i].bps;  // bits per second = bits per 1000 ms
    if (i + 1 < steps_.size()) {
      const double step_end = steps_[i + 1].t_ms;
      const double can = (step_end - t) * rate / 1000.0;
      if (can < left) {
        left -= can;
        t = step_end;
        ++i;
        continue;
      }
    }
    t += left * 1000.0 / rate;
    left = 0.0;
  }
  return t;
}

BandwidthModel load_bandwidth_trace(std::istream& in) {
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return load_bandwidth_trace(std::string_view(text));
}

BandwidthModel load_bandwidth_trace(std::string_view text) {
  std::vector<BandwidthStep> steps;
  std::size_t line_no = 0;
  for (std::string_view raw : text::split(text, '\n')) {
    ++line_no;
    const std::string_view line = text::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto f = text::split(line, ',');
    if (f.size() != 2) throw ParseError(line_no, "expected 't_ms,bps'");
    const auto t = text::parse_double(text::trim(f[0]));
    const auto r = text::parse_double(text::trim(f[1]));
    if (!t || !r) throw ParseError(line_no, "bad number in bandwidth trace");
    steps.push_back({*t, *r});
  }
  return BandwidthModel::steps(std::move(steps));
}

}  // namespace fovr
