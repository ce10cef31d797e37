#pragma once
// Area classification around an attention point and per-clip rung selection.
//
// Rungs are chosen per area class, not per tile: every SD tile uses the same
// SD rung index and every LD tile the same LD rung index. HD is fixed.

#include <cstddef>
#include <string>
#include <string_view>

#include "fovr/catalog.hpp"
#include "fovr/geometry.hpp"
#include "fovr/qoe.hpp"

namespace fovr {

struct AreaMap {
  TileField<AreaClass> assignment;
  TileIndex attention_tile;

  const TileGrid& grid() const noexcept { return assignment.grid(); }
  std::size_t count(AreaClass c) const noexcept;
  friend bool operator==(const AreaMap&, const AreaMap&) = default;
};

/// HD at the attention tile, SD on its 3x3 neighbourhood (columns wrap,
/// rows clip at the poles), LD elsewhere.
AreaMap classify_areas(const SpherePoint& attention, const TileGrid& grid);

/// Rung index per class; 0 is the highest bitrate.
struct ClassRungs {
  std::size_t sd = 0;
  std::size_t ld = 0;
  friend bool operator==(const ClassRungs&, const ClassRungs&) = default;
};

struct BandwidthBudget {
  double w_bits = 0.0;
  explicit BandwidthBudget(double bits);
};

struct ClipPlan {
  int clip_index = 0;
  TileField<Rung> choice;
  ClassRungs rungs;
  double total_bits = 0.0;
  double scheduled_qoe = 0.0;
  bool feasible = true;
};

/// Greedy descent: lower LD one rung at a time until it fits or LD is
/// exhausted, then SD. An over-budget lowest plan comes back with
/// feasible = false.
ClipPlan schedule_clip(const AreaMap& areas, const TileCatalog& cat, int clip, const BandwidthBudget& budget,
                       const QoeWeights& w = {});

/// Exact optimum over all class-rung pairs. Ties go to fewer bits, then to
/// the smaller (LD rung, SD rung) pair. Throws CapacityError above 10^6
/// combinations.
ClipPlan exhaustive_schedule(const AreaMap& areas, const TileCatalog& cat, int clip, const BandwidthBudget& budget,
                             const QoeWeights& w = {});

/// The plan for a fixed class-rung pair, with bits and QoE filled in.
/// `feasible` is left true; callers compare against their own budget.
ClipPlan plan_for(const AreaMap& areas, const TileCatalog& cat, int clip, ClassRungs rungs, const QoeWeights& w = {});

enum class BaselineScheme { full, head_only, gaze_only };

BaselineScheme parse_baseline_scheme(std::string_view name);
std::string_view baseline_scheme_name(BaselineScheme s) noexcept;

/// full: every tile HD. head_only / gaze_only: HD at the tile of the
/// respective attention, top SD rung everywhere else. Never budget-limited.
/// scheduled_qoe is scored on classify_areas() of the attention the scheme
/// uses (gaze for full).
ClipPlan baseline_plan(BaselineScheme scheme, const SpherePoint& head_attention, const SpherePoint& gaze_attention,
                       const TileCatalog& cat, int clip, const QoeWeights& w = {});

/// 1 - plan bits / all-HD bits for the clip.
double compression_ratio(const ClipPlan& plan, const TileCatalog& cat, int clip);

/// QoE of delivered rungs scored against an area map: clip_qoe with per-tile
/// BVQA taken from the delivered bitrate under the map's classes.
double delivered_qoe(const TileField<Rung>& choice, const AreaMap& areas, const QoeWeights& w = {});

/// `clip col row class rung_kbps` per tile, then
/// `# total_bits=<int> scheduled_qoe=<6dp> feasible=<0|1>`.
std::string format_plan(const ClipPlan& plan);

}  // namespace fovr
