#pragma once
// Tile quality (BVQA), per-clip weighted QoE, MOS and Pearson correlation.

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "fovr/geometry.hpp"

namespace fovr {

enum class AreaClass : std::uint8_t { HD = 0, SD = 1, LD = 2 };

std::string_view area_class_name(AreaClass c) noexcept;

/// BVQA saturation rate per kbps for tiles lying in an area of this class.
constexpr double bvqa_rate(AreaClass c) noexcept {
  switch (c) {
    case AreaClass::HD: return 0.081e-3;
    case AreaClass::SD: return 0.324e-3;
    case AreaClass::LD: return 0.648e-3;
  }
  return 0.0;
}

struct QoeWeights {
  double hd = 0.5;
  double sd = 0.3;
  double ld = 0.2;

  /// Non-negative and summing to 1 within 1e-9, else InvalidInput.
  void validate() const;
  double of(AreaClass c) const noexcept;
};

/// 1 - exp(-k * bitrate) with k chosen by the area the tile lies in.
/// Throws InvalidInput for a negative or non-finite bitrate.
double bvqa(double bitrate_kbps, AreaClass area);

/// Batch form over a whole tile field (SIMD kernel).
TileField<double> bvqa_tiles(const TileField<double>& bitrate_kbps, const TileField<AreaClass>& areas);

/// Per-tile weights: each class weight split evenly over that class's tiles.
/// Weights of empty classes are redistributed proportionally, so the field
/// always sums to 1.
TileField<double> tile_weights(const TileField<AreaClass>& areas, const QoeWeights& w = {});

/// Sum of BVQA_ij * Weight_ij. Throws InvalidInput unless both fields cover
/// the same grid.
double clip_qoe(const TileField<double>& tile_bvqa, const TileField<AreaClass>& areas,
                const QoeWeights& w = {});

/// Mean opinion score: arithmetic mean. Throws InvalidInput when empty.
double mos(std::span<const double> scores);

/// Sample Pearson correlation. Throws InvalidInput on length mismatch,
/// fewer than two points, or zero variance.
double pearson(std::span<const double> xs, std::span<const double> ys);

}  // namespace fovr
