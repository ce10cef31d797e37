#include "fovr/qoe.hpp"

#include <algorithm>
#include <cmath>

#include "fovr/error.hpp"
#include "fovr/simd/kernels.hpp"

namespace fovr {

std::string_view area_class_name(AreaClass c) noexcept {
  switch (c) {
    case AreaClass::HD: return "HD";
    case AreaClass::SD: return "SD";
    case AreaClass::LD: return "LD";
  }
  return "?";
}

void QoeWeights::validate() const {
  if (!(hd >= 0.0) || !(sd >= 0.0) || !(ld >= 0.0)) throw InvalidInput("QoE weights must be >= 0");
  if (std::abs(hd + sd + ld - 1.0) > 1e-9) throw InvalidInput("QoE weights must sum to 1");
}

double QoeWeights::of(AreaClass c) const noexcept {
  switch (c) {
    case AreaClass::HD: return hd;
    case AreaClass::SD: return sd;
    case AreaClass::LD: return ld;
  }
  return 0.0;
}

double bvqa(double bitrate_kbps, AreaClass area) {
  if (!(bitrate_kbps >= 0.0) || !std::isfinite(bitrate_kbps)) {
    throw InvalidInput("bitrate must be finite and >= 0");
  }
  return 1.0 - std::exp(-bvqa_rate(area) * bitrate_kbps);
}

TileField<double> bvqa_tiles(const TileField<double>& bitrate_kbps, const TileField<AreaClass>& areas) {
  if (!bitrate_kbps.covers(areas.grid()) || !areas.covers(areas.grid())) {
    throw InvalidInput("bitrate and area fields must cover the same grid");
  }
  std::vector<double> rate(areas.size());
  for (std::size_t i = 0; i < rate.size(); ++i) {
    const double b = bitrate_kbps.at_flat(i);
    if (!(b >= 0.0) || !std::isfinite(b)) throw InvalidInput("bitrate must be finite and >= 0");
    rate[i] = bvqa_rate(areas.at_flat(i));
  }
  TileField<double> out(areas.grid(), 0.0);
  simd::saturating_exp(bitrate_kbps.values(), rate, out.values());
  return out;
}

TileField<double> tile_weights(const TileField<AreaClass>& areas, const QoeWeights& w) {
  w.validate();
  std::array<std::size_t, 3> count{};
  for (AreaClass c : areas.values()) ++count[static_cast<std::size_t>(c)];

  double present = 0.0;
  for (AreaClass c : {AreaClass::HD, AreaClass::SD, AreaClass::LD}) {
    if (count[static_cast<std::size_t>(c)] > 0) present += w.of(c);
  }
  std::size_t classes = 0;
  for (auto n : count) classes += n > 0 ? 1 : 0;
  std::array<double, 3> per_tile{};
  for (AreaClass c : {AreaClass::HD, AreaClass::SD, AreaClass::LD}) {
    const auto k = static_cast<std::size_t>(c);
    if (count[k] == 0) continue;
    // Present classes that all carry zero weight share evenly.
    const double share = present > 0.0 ? w.of(c) / present : 1.0 / static_cast<double>(classes);
    per_tile[k] = share / static_cast<double>(count[k]);
  }

  TileField<double> out(areas.grid(), 0.0);
  for (std::size_t i = 0; i < out.size(); ++i) out.at_flat(i) = per_tile[static_cast<std::size_t>(areas.at_flat(i))];
  return out;
}

double clip_qoe(const TileField<double>& tile_bvqa, const TileField<AreaClass>& areas, const QoeWeights& w) {
  if (tile_bvqa.size() == 0 || !tile_bvqa.covers(areas.grid()) || !areas.covers(tile_bvqa.grid())) {
    throw InvalidInput("BVQA and area maps must cover the same complete grid");
  }
  const TileField<double> weights = tile_weights(areas, w);
  return simd::dot(tile_bvqa.values(), weights.values());
}

double mos(std::span<const double> scores) {
  if (scores.empty()) throw InvalidInput("MOS of no scores");
  return simd::sum(scores) / static_cast<double>(scores.size());
}

double pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw InvalidInput("pearson needs two equal-length series of at least two points");
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx <= 0.0 || syy <= 0.0) throw InvalidInput("pearson undefined for a zero-variance series");
  const double r = sxy / std::sqrt(sxx * syy);
  return std::clamp(r, -1.0, 1.0);
}

}  // namespace fovr
