#include "fovr/trace.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include "text.hpp"

namespace fovr {
namespace {

constexpr double kNormGate = 1e-3;     // reject inputs this far from unit norm
constexpr double kNormKeep = 1e-9;     // inside this, values are kept verbatim
constexpr double kOriginTol = 1e-6;
constexpr int kDigits = 9;

double median_interval_ms(const std::vector<TraceSample>& s) {
  std::vector<double> dt;
  dt.reserve(s.size() - 1);
  for (std::size_t i = 1; i < s.size(); ++i) dt.push_back(static_cast<double>(s[i].t_ms - s[i - 1].t_ms));
  std::nth_element(dt.begin(), dt.begin() + static_cast<std::ptrdiff_t>(dt.size() / 2), dt.end());
  return dt[dt.size() / 2];
}

std::vector<std::int64_t> uniform_grid(std::int64_t from, std::int64_t to, double rate_hz) {
  if (!(rate_hz > 0.0) || !std::isfinite(rate_hz)) throw InvalidInput("resample rate must be > 0");
  if (rate_hz > 1000.0) throw InvalidInput("resample rate above 1000 Hz collapses millisecond timestamps");
  const double period = 1000.0 / rate_hz;
  std::vector<std::int64_t> grid;
  for (std::int64_t k = 0;; ++k) {
    const std::int64_t t = from + std::llround(static_cast<double>(k) * period);
    if (t > to) break;
    grid.push_back(t);
  }
  if (grid.back() != to) grid.push_back(to);
  return grid;
}

// Index i such that s[i].t <= t < s[i+1].t (or the last pair when t == back).
std::size_t bracket(const std::vector<TraceSample>& s, double t) {
  auto it = std::upper_bound(s.begin(), s.end(), t,
                             [](double v, const TraceSample& x) { return v < static_cast<double>(x.t_ms); });
  std::size_t hi = static_cast<std::size_t>(it - s.begin());
  if (hi >= s.size()) hi = s.size() - 1;
  return hi == 0 ? 0 : hi - 1;
}

Quaternion checked_quaternion(double w, double x, double y, double z, std::size_t line) {
  const Quaternion q{w, x, y, z};
  const double n = q.norm();
  if (!(std::abs(n - 1.0) <= kNormGate)) {
    throw ValidationError("line " + std::to_string(line) + ": head quaternion norm " +
                          text::fixed(n, 6) + " is not unit");
  }
  return std::abs(n - 1.0) <= kNormKeep ? q : q.normalized();
}

UnitVec3 checked_direction(double x, double y, double z, std::size_t line) {
  const double n = std::sqrt(x * x + y * y + z * z);
  if (!(std::abs(n - 1.0) <= kNormGate)) {
    throw ValidationError("line " + std::to_string(line) + ": gaze direction norm " +
                          text::fixed(n, 6) + " is not unit");
  }
  return std::abs(n - 1.0) <= kNormKeep ? UnitVec3{x, y, z} : UnitVec3::normalized(x, y, z);
}

}  // namespace

Trace::Trace(std::vector<TraceSample> samples, double nominal_rate_hz)
    : samples_(std::move(samples)), rate_hz_(nominal_rate_hz) {
  if (samples_.size() < 2) throw ValidationError("trace needs at least two samples");
  if (!(rate_hz_ > 0.0) || !std::isfinite(rate_hz_)) throw ValidationError("trace rate must be positive");
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    const auto& s = samples_[i];
    if (s.t_ms < 0) throw ValidationError("negative timestamp");
    if (i > 0 && s.t_ms <= samples_[i - 1].t_ms) {
      throw ValidationError("timestamps not strictly increasing at " + std::to_string(s.t_ms) + " ms");
    }
    if (std::abs(s.head.norm() - 1.0) > 1e-6) throw ValidationError("head quaternion not unit");
    if (std::abs(std::sqrt(s.gaze.dot(s.gaze)) - 1.0) > kNormKeep) {
      throw ValidationError("gaze direction not unit");
    }
  }
}

Trace load_trace(std::istream& in) {
  std::vector<TraceSample> samples;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;

    const auto fields = text::split(line, ' ');
    if (fields.size() != 8 && fields.size() != 11) {
      throw ParseError(line_no, "expected 8 or 11 space-separated fields, got " +
                                    std::to_string(fields.size()));
    }
    const auto t = text::parse_int(fields[0]);
    if (!t || *t < 0) throw ParseError(line_no, "bad timestamp '" + std::string(fields[0]) + "'");
    double v[10];
    for (std::size_t i = 1; i < fields.size(); ++i) {
      const auto d = text::parse_double(fields[i]);
      if (!d) throw ParseError(line_no, "bad number '" + std::string(fields[i]) + "'");
      v[i - 1] = *d;
    }

    TraceSample s;
    s.t_ms = *t;
    s.head = checked_quaternion(v[0], v[1], v[2], v[3], line_no);
    s.gaze = checked_direction(v[4], v[5], v[6], line_no);
    if (fields.size() == 11) {
      const GazeOrigin o{v[7], v[8], v[9]};
      if (std::sqrt(o.x * o.x + o.y * o.y + o.z * o.z) > kOriginTol) {
        throw ValidationError("line " + std::to_string(line_no) +
                              ": gaze origin is not the sphere center");
      }
      s.gaze_origin = o;
    }
    if (!samples.empty() && s.t_ms <= samples.back().t_ms) {
      throw ValidationError("line " + std::to_string(line_no) +
                            ": timestamps must be strictly increasing");
    }
    samples.push_back(s);
  }
  if (samples.size() < 2) throw ValidationError("trace needs at least two samples");
  const double rate = 1000.0 / median_interval_ms(samples);
  return Trace(std::move(samples), rate);
}

Trace load_trace(std::string_view text) {
  std::istringstream in{std::string(text)};
  return load_trace(in);
}

void save_trace(const Trace& tr, std::ostream& out) { out << serialize_trace(tr); }

std::string serialize_trace(const Trace& tr) {
  std::string out;
  out.reserve(tr.size() * 110);
  for (const auto& s : tr.samples()) {
    out += std::to_string(s.t_ms);
    for (double v : {s.head.w, s.head.x, s.head.y, s.head.z, s.gaze.x, s.gaze.y, s.gaze.z}) {
      out += ' ';
      out += text::fixed(v, kDigits);
    }
    if (s.gaze_origin) {
      for (double v : {s.gaze_origin->x, s.gaze_origin->y, s.gaze_origin->z}) {
        out += ' ';
        out += text::fixed(v, kDigits);
      }
    }
    out += '\n';
  }
  return out;
}

TraceSample sample_at(const Trace& tr, double t_ms) {
  const auto& s = tr.samples();
  if (!(t_ms >= static_cast<double>(tr.front_ms()) && t_ms <= static_cast<double>(tr.back_ms()))) {
    throw RangeError("time " + text::fixed(t_ms, 3) + " ms outside trace span [" +
                     std::to_string(tr.front_ms()) + ", " + std::to_string(tr.back_ms()) + "]");
  }
  const std::size_t i = bracket(s, t_ms);
  const auto& a = s[i];
  if (static_cast<double>(a.t_ms) == t_ms) return a;
  const auto& b = s[i + 1];
  if (static_cast<double>(b.t_ms) == t_ms) return b;
  const double f = (t_ms - static_cast<double>(a.t_ms)) / static_cast<double>(b.t_ms - a.t_ms);
  TraceSample out;
  out.t_ms = static_cast<std::int64_t>(std::llround(t_ms));
  out.head = slerp(a.head, b.head, f);
  out.gaze = slerp(a.gaze, b.gaze, f);
  return out;
}

SpherePoint ground_truth_attention(const Trace& tr, double t_ms) {
  return dir_to_sphere(sample_at(tr, t_ms).gaze);
}

SpherePoint head_direction(const Trace& tr, double t_ms) {
  return dir_to_sphere(quat_to_forward(sample_at(tr, t_ms).head));
}

Trace resample_span(const Trace& tr, std::int64_t from_ms, std::int64_t to_ms, double rate_hz) {
  if (from_ms < tr.front_ms() || to_ms > tr.back_ms() || from_ms >= to_ms) {
    throw RangeError("resample span [" + std::to_string(from_ms) + ", " + std::to_string(to_ms) +
                     "] not inside the trace");
  }
  const auto grid = uniform_grid(from_ms, to_ms, rate_hz);
  std::vector<TraceSample> out;
  out.reserve(grid.size());
  for (std::int64_t t : grid) {
    TraceSample s = sample_at(tr, static_cast<double>(t));
    s.t_ms = t;
    s.gaze_origin.reset();
    out.push_back(s);
  }
  return Trace(std::move(out), rate_hz);
}

Trace resample(const Trace& tr, double rate_hz) {
  return resample_span(tr, tr.front_ms(), tr.back_ms(), rate_hz);
}

MotionKind parse_motion_kind(std::string_view name) {
  if (name == "static") return MotionKind::static_scene;
  if (name == "pursuit") return MotionKind::pursuit;
  if (name == "saccade") return MotionKind::saccade;
  throw InvalidInput("unknown motion kind '" + std::string(name) + "'");
}

std::string_view motion_kind_name(MotionKind k) noexcept {
  switch (k) {
    case MotionKind::static_scene: return "static";
    case MotionKind::pursuit: return "pursuit";
    case MotionKind::saccade: return "saccade";
  }
  return "static";
}

namespace {

struct Fixation {
  double start_ms;
  double yaw;
  double pitch;
};

class AttentionPath {
 public:
  AttentionPath(MotionKind kind, const SyntheticParams& p, std::mt19937_64& rng) : kind_(kind), p_(p) {
    if (kind_ != MotionKind::saccade) return;
    std::exponential_distribution<double> dwell(1.0 / p_.dwell_mean_s);
    std::uniform_real_distribution<double> jump(-p_.jump_deg, p_.jump_deg);
    double t = 0.0;
    double yaw = p_.center_yaw_deg;
    double pitch = p_.center_pitch_deg;
    const double end = p_.duration_s * 1000.0;
    fixations_.push_back({0.0, yaw, pitch});
    while (true) {
      t += dwell(rng) * 1000.0;
      if (t > end) break;
      yaw = wrap_yaw(yaw + jump(rng));
      pitch = std::clamp(pitch + 0.5 * jump(rng), -60.0, 60.0);
      fixations_.push_back({t, yaw, pitch});
    }
  }

  SpherePoint at(double t_ms) const {
    switch (kind_) {
      case MotionKind::static_scene:
        return SpherePoint(p_.center_yaw_deg, p_.center_pitch_deg);
      case MotionKind::pursuit: {
        const double phase = 2.0 * std::numbers::pi * (t_ms / 1000.0) / p_.period_s +
                             p_.phase_deg * std::numbers::pi / 180.0;
        const double s = std::sin(phase);
        return SpherePoint(p_.center_yaw_deg + p_.amplitude_yaw_deg * s,
                           std::clamp(p_.center_pitch_deg + p_.amplitude_pitch_deg * s, -90.0, 90.0));
      }
      case MotionKind::saccade: {
        auto it = std::upper_bound(fixations_.begin(), fixations_.end(), t_ms,
                                   [](double v, const Fixation& f) { return v < f.start_ms; });
        const Fixation& f = *(it == fixations_.begin() ? it : it - 1);
        return SpherePoint(f.yaw, f.pitch);
      }
    }
    return {};
  }

 private:
  MotionKind kind_;
  SyntheticParams p_;
  std::vector<Fixation> fixations_;
};

UnitVec3 perturb(const SpherePoint& p, double sigma_deg, std::mt19937_64& rng) {
  const UnitVec3 d = sphere_to_dir(p);
  if (sigma_deg <= 0.0) return d;
  std::normal_distribution<double> normal(0.0, 1.0);
  const double n1 = normal(rng);
  const double n2 = normal(rng);
  const double y = p.yaw() * std::numbers::pi / 180.0;
  const double pt = p.pitch() * std::numbers::pi / 180.0;
  const double s = sigma_deg * std::numbers::pi / 180.0;
  // Tangent basis: east (yaw) and north (pitch).
  const double ex = -std::sin(y), ey = std::cos(y);
  const double nx = -std::sin(pt) * std::cos(y), ny = -std::sin(pt) * std::sin(y), nz = std::cos(pt);
  return UnitVec3::normalized(d.x + s * (n1 * ex + n2 * nx), d.y + s * (n1 * ey + n2 * ny),
                              d.z + s * n2 * nz);
}

}  // namespace

Trace gen_synthetic(MotionKind kind, const SyntheticParams& params, std::uint64_t seed) {
  if (!(params.duration_s > 0.0) || !(params.rate_hz > 0.0) || params.rate_hz > 1000.0) {
    throw InvalidInput("synthetic trace needs duration > 0 and rate in (0, 1000] Hz");
  }
  if (kind == MotionKind::pursuit && !(params.period_s > 0.0)) throw InvalidInput("pursuit period must be > 0");
  if (kind == MotionKind::saccade && !(params.dwell_mean_s > 0.0)) throw InvalidInput("dwell mean must be > 0");
  if (params.center_pitch_deg < -90.0 || params.center_pitch_deg > 90.0) {
    throw InvalidInput("center pitch outside [-90, 90]");
  }
  const double sigma = params.sigma_deg.value_or(kind == MotionKind::static_scene ? 0.5 : 0.0);
  if (sigma < 0.0) throw InvalidInput("noise sigma must be >= 0");

  // Separate streams so the noise level does not change the motion path.
  std::seed_seq seq{seed, std::uint64_t{0x9e3779b97f4a7c15ULL}};
  std::uint64_t sub[2];
  {
    std::uint32_t words[4];
    seq.generate(words, words + 4);
    sub[0] = (std::uint64_t{words[0]} << 32) | words[1];
    sub[1] = (std::uint64_t{words[2]} << 32) | words[3];
  }
  std::mt19937_64 path_rng(sub[0]);
  std::mt19937_64 noise_rng(sub[1]);

  const AttentionPath path(kind, params, path_rng);
  const auto n = static_cast<std::int64_t>(std::floor(params.duration_s * params.rate_hz + 1e-9)) + 1;
  const double period = 1000.0 / params.rate_hz;

  std::vector<TraceSample> samples;
  samples.reserve(static_cast<std::size_t>(n));
  for (std::int64_t k = 0; k < n; ++k) {
    const std::int64_t t = std::llround(static_cast<double>(k) * period);
    const SpherePoint att = path.at(static_cast<double>(t));
    const SpherePoint head = path.at(std::max(0.0, static_cast<double>(t) - params.head_lag_ms));
    TraceSample s;
    s.t_ms = t;
    s.head = Quaternion::from_yaw_pitch(head.yaw(), head.pitch());
    s.gaze = perturb(att, sigma, noise_rng);
    samples.push_back(s);
  }
  return Trace(std::move(samples), params.rate_hz);
}

}  // namespace fovr
