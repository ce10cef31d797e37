#pragma once
// Tile bitrate catalog: the stand-in for offline-sliced, closed-GOP video.
//
// Each clip is an independent entry; each tile of each clip carries one
// bitrate per ladder rung. Rungs are identified by class and position within
// the class (0 = highest bitrate).
//
// Manifest (JSON, keys sorted, reals rounded to 3 fractional digits):
//
//   {
//     "clip_count": 2,
//     "clip_duration_ms": 1000,
//     "format": "fovr-manifest/1",
//     "grid": {"cols": 36, "rows": 36},
//     "ladder": {"hd": [1.0], "ld": [0.12, 0.06], "sd": [0.66, 0.33]},
//     "table": [                       // one array per clip
//       [                              // one object per tile, row-major
//         {"hd": [1.0], "ld": [0.12, 0.06], "sd": [0.66, 0.33]},
//         ...
//       ],
//       ...
//     ]
//   }
//
// All bitrates are kbps. The ladder holds nominal per-tile rates; the table
// holds the actual ones. Within each class rates strictly decrease, and the
// HD class has exactly one rung.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fovr/geometry.hpp"
#include "fovr/qoe.hpp"

namespace fovr {

struct Rung {
  AreaClass cls = AreaClass::HD;
  double bitrate_kbps = 0.0;
  friend bool operator==(const Rung&, const Rung&) = default;
};

struct DefinitionLadder {
  double hd = 1.0;
  std::vector<double> sd;
  std::vector<double> ld;

  /// Throws ValidationError on empty classes, non-positive or
  /// non-decreasing rates.
  void validate() const;
  std::size_t rungs(AreaClass c) const noexcept;
  std::size_t total_rungs() const noexcept { return 1 + sd.size() + ld.size(); }
  friend bool operator==(const DefinitionLadder&, const DefinitionLadder&) = default;
};

class TileCatalog {
 public:
  /// `table` is laid out [clip][tile][rung] with rungs ordered hd, sd..., ld...
  /// Throws ValidationError when anything is inconsistent.
  TileCatalog(TileGrid grid, int clip_count, std::int64_t clip_duration_ms, DefinitionLadder ladder,
              std::vector<double> table);

  const TileGrid& grid() const noexcept { return grid_; }
  int clip_count() const noexcept { return clip_count_; }
  std::int64_t clip_duration_ms() const noexcept { return clip_duration_ms_; }
  const DefinitionLadder& ladder() const noexcept { return ladder_; }

  double bitrate(int clip, std::size_t tile, AreaClass cls, std::size_t rung) const;
  Rung rung(int clip, std::size_t tile, AreaClass cls, std::size_t rung) const {
    return {cls, bitrate(clip, tile, cls, rung)};
  }

  friend bool operator==(const TileCatalog&, const TileCatalog&) = default;

 private:
  std::size_t offset(AreaClass cls, std::size_t rung) const noexcept;

  TileGrid grid_;
  int clip_count_;
  std::int64_t clip_duration_ms_;
  DefinitionLadder ladder_;
  std::vector<double> table_;
};

TileCatalog load_manifest(std::istream& in);
TileCatalog load_manifest(std::string_view text);
std::string save_manifest(const TileCatalog& cat);

struct SynthCatalogParams {
  TileGrid grid{};
  int clips = 10;
  std::int64_t clip_duration_ms = 1000;
  double base_kbps = 1296.0;
  std::vector<double> sd_ratios{0.66, 0.33};
  std::vector<double> ld_ratios{0.12, 0.06};
  double jitter = 0.0;
};

/// Per-tile HD rate = base_kbps / tile_count * (1 + U(-jitter, jitter)),
/// SD/LD rungs = HD rate * ratio. Ratios must lie in (0, 1) and strictly
/// decrease; jitter in [0, 0.5). Deterministic per seed.
TileCatalog synth_catalog(const SynthCatalogParams& p, std::uint64_t seed);

/// Bits needed to ship the chosen rungs for one clip:
/// sum(kbps) * clip_duration_ms. Throws InvalidInput on an incomplete choice
/// or an out-of-range clip.
double selection_bits(const TileCatalog& cat, int clip, const TileField<Rung>& choice);

/// Rounds to the manifest resolution (0.001 kbps).
double quantize_kbps(double kbps) noexcept;

}  // namespace fovr
