#include "fovr/prediction.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "fovr/error.hpp"
#include "text.hpp"

namespace fovr {
namespace {

// Fits one angle series as a function of normalized time and returns the
// curve to evaluate on the horizon.
using SeriesFit = std::function<std::function<double(double)>(std::span<const double>, std::span<const double>)>;

AttentionEstimate predict_with(const Trace& window, const PredictorConfig& cfg, const SeriesFit& fit) {
  cfg.validate();
  const auto& s = window.samples();
  const double span = static_cast<double>(window.span_ms());
  const double want = static_cast<double>(cfg.window_ms());
  if (s.size() < 2 || std::abs(span - want) > 0.1 * want) {
    throw InvalidInput("prediction window spans " + std::to_string(window.span_ms()) +
                       " ms; expected " + std::to_string(cfg.window_ms()) + " ms (+-10%)");
  }

  std::vector<double> xs(s.size()), yaw(s.size()), pitch(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    xs[i] = static_cast<double>(s[i].t_ms - window.front_ms()) / span;
    const SpherePoint p = dir_to_sphere(s[i].gaze);
    yaw[i] = p.yaw();
    pitch[i] = p.pitch();
  }
  const auto yaw_fn = fit(xs, unwrap_yaw(yaw));
  const auto pitch_fn = fit(xs, pitch);

  const auto steps = std::llround(cfg.horizon_s * cfg.rate_hz);
  if (steps < 1) throw InvalidInput("horizon shorter than one sample period");
  const double period = 1000.0 / cfg.rate_hz;

  AttentionEstimate est;
  est.tolerance_deg = cfg.tolerance_deg;
  est.issued_ms = window.back_ms();
  est.horizon_points.reserve(static_cast<std::size_t>(steps));
  std::vector<SpherePoint> pts;
  pts.reserve(static_cast<std::size_t>(steps));
  for (long long k = 1; k <= steps; ++k) {
    const std::int64_t t = window.back_ms() + std::llround(static_cast<double>(k) * period);
    const double x = static_cast<double>(t - window.front_ms()) / span;
    const SpherePoint p(wrap_yaw(yaw_fn(x)), std::clamp(pitch_fn(x), -90.0, 90.0));
    est.horizon_points.push_back({t, p});
    pts.push_back(p);
  }
  try {
    est.mean = spherical_mean(pts);
  } catch (const DegenerateMean&) {
    est.mean = pts.back();
    est.degenerate_mean = true;
  }
  return est;
}

}  // namespace

void PredictorConfig::validate() const {
  if (!(window_s > 0.0) || !(horizon_s > 0.0) || !(rate_hz > 0.0) || rate_hz > 1000.0) {
    throw InvalidInput("predictor needs window > 0, horizon > 0 and rate in (0, 1000] Hz");
  }
  if (!(tolerance_deg >= 0.0)) throw InvalidInput("tolerance must be >= 0");
  if (window_s * rate_hz < 1.0) throw InvalidInput("window must hold at least two samples");
}

std::int64_t PredictorConfig::window_ms() const noexcept { return std::llround(window_s * 1000.0); }
std::int64_t PredictorConfig::horizon_ms() const noexcept { return std::llround(horizon_s * 1000.0); }

LinearFit fit_line(std::span<const double> xs, std::span<const double> ys) {
  if (xs.empty() || xs.size() != ys.size()) throw InvalidInput("line fit needs equal, non-empty inputs");
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  LinearFit f;
  f.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  f.intercept = my - f.slope * mx;
  return f;
}

std::vector<double> unwrap_yaw(std::span<const double> yaw_deg) {
  std::vector<double> out(yaw_deg.size());
  double turns = 0.0;
  for (std::size_t i = 0; i < yaw_deg.size(); ++i) {
    if (i > 0) {
      while (yaw_deg[i] + 360.0 * turns - out[i - 1] > 180.0) turns -= 1.0;
      while (yaw_deg[i] + 360.0 * turns - out[i - 1] < -180.0) turns += 1.0;
    }
    out[i] = yaw_deg[i] + 360.0 * turns;
  }
  return out;
}

AttentionEstimate predict_attention(const Trace& window, const PredictorConfig& cfg,
                                    const SvrConfig& svr_cfg) {
  svr_cfg.validate();
  return predict_with(window, cfg, [&](std::span<const double> xs, std::span<const double> ys) {
    // An RBF expansion decays to its bias outside the data, so the trend is
    // carried by the line and the SVR models what the line misses.
    const LinearFit trend = fit_line(xs, ys);
    std::vector<double> resid(ys.size());
    for (std::size_t i = 0; i < ys.size(); ++i) resid[i] = ys[i] - trend(xs[i]);
    SvrModel m = svr_train(xs, resid, svr_cfg);
    return std::function<double(double)>(
        [trend, m = std::move(m)](double x) { return trend(x) + svr_predict(m, x); });
  });
}

AttentionEstimate linear_predict_attention(const Trace& window, const PredictorConfig& cfg) {
  return predict_with(window, cfg, [](std::span<const double> xs, std::span<const double> ys) {
    const LinearFit f = fit_line(xs, ys);
    return std::function<double(double)>([f](double x) { return f(x); });
  });
}

AttentionEstimate predict_at(const Trace& tr, std::int64_t end_ms, const PredictorConfig& cfg,
                             const SvrConfig& svr_cfg, PredictorModel model) {
  cfg.validate();
  const Trace window = resample_span(tr, end_ms - cfg.window_ms(), end_ms, cfg.rate_hz);
  return model == PredictorModel::svr ? predict_attention(window, cfg, svr_cfg)
                                      : linear_predict_attention(window, cfg);
}

AccuracyReport eval_accuracy(std::span<const AttentionEstimate> estimates, const Trace& truth,
                             double tolerance_deg) {
  if (estimates.empty()) throw InvalidInput("no estimates to evaluate");
  AccuracyReport r;
  r.per_estimate.reserve(estimates.size());
  for (const auto& e : estimates) {
    EstimateAccuracy a;
    for (const auto& hp : e.horizon_points) {
      const SpherePoint actual = ground_truth_attention(truth, static_cast<double>(hp.t_ms));
      if (angular_distance(e.mean, actual) <= tolerance_deg) ++a.correct;
      ++a.total;
    }
    r.correct += a.correct;
    r.total += a.total;
    r.per_estimate.push_back(a);
  }
  r.accuracy = r.total == 0 ? 0.0 : static_cast<double>(r.correct) / static_cast<double>(r.total);
  return r;
}

std::vector<AttentionEstimate> sliding_predictions(const Trace& tr, const PredictorConfig& cfg,
                                                   const SvrConfig& svr_cfg, PredictorModel model,
                                                   std::int64_t step_ms) {
  cfg.validate();
  if (step_ms <= 0) throw InvalidInput("prediction step must be > 0");
  std::vector<AttentionEstimate> out;
  for (std::int64_t end = tr.front_ms() + cfg.window_ms(); end + cfg.horizon_ms() <= tr.back_ms();
       end += step_ms) {
    out.push_back(predict_at(tr, end, cfg, svr_cfg, model));
  }
  if (out.empty()) {
    throw InvalidInput("trace of " + std::to_string(tr.span_ms()) +
                       " ms is shorter than window + horizon");
  }
  return out;
}

std::string format_prediction_dump(std::span<const AttentionEstimate> estimates,
                                   const AccuracyReport& report) {
  std::string out;
  for (std::size_t i = 0; i < estimates.size(); ++i) {
    const auto& e = estimates[i];
    const bool ok = i < report.per_estimate.size() && report.per_estimate[i].all_correct();
    out += std::to_string(i) + ' ' + std::to_string(e.issued_ms) + ' ' + text::fixed(e.mean.yaw(), 6) +
           ' ' + text::fixed(e.mean.pitch(), 6) + ' ' + (ok ? '1' : '0') + '\n';
  }
  return out;
}

}  // namespace fovr
