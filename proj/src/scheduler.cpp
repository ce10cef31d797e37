#include "fovr/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "fovr/error.hpp"
#include "text.hpp"

namespace fovr {
namespace {

constexpr std::size_t kMaxCombinations = 1'000'000;

void check_clip(const TileCatalog& cat, int clip, const TileGrid& areas_grid) {
  if (clip < 0 || clip >= cat.clip_count()) throw InvalidInput("clip " + std::to_string(clip) + " not in catalog");
  if (!(areas_grid == cat.grid())) throw InvalidInput("area map grid differs from catalog grid");
}

ClipPlan lowest_plan(const AreaMap& areas, const TileCatalog& cat, int clip, const BandwidthBudget& budget,
                     const QoeWeights& w) {
  const auto& l = cat.ladder();
  ClipPlan p = plan_for(areas, cat, clip, {l.sd.size() - 1, l.ld.size() - 1}, w);
  p.feasible = p.total_bits <= budget.w_bits;
  return p;
}

}  // namespace

std::size_t AreaMap::count(AreaClass c) const noexcept {
  const auto v = assignment.values();
  return static_cast<std::size_t>(std::count(v.begin(), v.end(), c));
}

AreaMap classify_areas(const SpherePoint& attention, const TileGrid& grid) {
  grid.validate();
  AreaMap m{TileField<AreaClass>(grid, AreaClass::LD), point_to_tile(attention, grid)};
  const TileIndex hd = m.attention_tile;
  for (int dr = -1; dr <= 1; ++dr) {
    const int row = hd.row + dr;
    if (row < 0 || row >= grid.rows) continue;
    for (int dc = -1; dc <= 1; ++dc) {
      const int col = ((hd.col + dc) % grid.cols + grid.cols) % grid.cols;
      m.assignment[{col, row}] = AreaClass::SD;
    }
  }
  // Narrow grids can wrap a neighbour onto the centre; HD wins.
  m.assignment[hd] = AreaClass::HD;
  return m;
}

BandwidthBudget::BandwidthBudget(double bits) : w_bits(bits) {
  if (!(bits > 0.0) || !std::isfinite(bits)) throw InvalidInput("bandwidth budget must be finite and > 0 bits");
}

double delivered_qoe(const TileField<Rung>& choice, const AreaMap& areas, const QoeWeights& w) {
  if (!choice.covers(areas.grid())) throw InvalidInput("rung choice does not cover the area map");
  TileField<double> kbps(areas.grid(), 0.0);
  for (std::size_t i = 0; i < kbps.size(); ++i) kbps.at_flat(i) = choice.at_flat(i).bitrate_kbps;
  return clip_qoe(bvqa_tiles(kbps, areas.assignment), areas.assignment, w);
}

ClipPlan plan_for(const AreaMap& areas, const TileCatalog& cat, int clip, ClassRungs rungs, const QoeWeights& w) {
  check_clip(cat, clip, areas.grid());
  ClipPlan p;
  p.clip_index = clip;
  p.rungs = rungs;
  p.choice = TileField<Rung>(areas.grid(), Rung{});
  for (std::size_t i = 0; i < p.choice.size(); ++i) {
    const AreaClass c = areas.assignment.at_flat(i);
    const std::size_t r = c == AreaClass::SD ? rungs.sd : c == AreaClass::LD ? rungs.ld : 0;
    p.choice.at_flat(i) = cat.rung(clip, i, c, r);
  }
  p.total_bits = selection_bits(cat, clip, p.choice);
  p.scheduled_qoe = delivered_qoe(p.choice, areas, w);
  return p;
}

ClipPlan schedule_clip(const AreaMap& areas, const TileCatalog& cat, int clip, const BandwidthBudget& budget,
                       const QoeWeights& w) {
  const auto& l = cat.ladder();
  ClassRungs r;
  ClipPlan p = plan_for(areas, cat, clip, r, w);
  while (p.total_bits > budget.w_bits) {
    if (r.ld + 1 < l.ld.size()) {
      ++r.ld;
    } else if (r.sd + 1 < l.sd.size()) {
      ++r.sd;
    } else {
      p.feasible = false;
      return p;
    }
    p = plan_for(areas, cat, clip, r, w);
  }
  p.feasible = true;
  return p;
}

ClipPlan exhaustive_schedule(const AreaMap& areas, const TileCatalog& cat, int clip, const BandwidthBudget& budget,
                             const QoeWeights& w) {
  const auto& l = cat.ladder();
  if (l.sd.size() * l.ld.size() > kMaxCombinations) {
    throw CapacityError("exhaustive schedule over " + std::to_string(l.sd.size() * l.ld.size()) +
                        " class-rung pairs exceeds the 10^6 bound");
  }
  std::optional<ClipPlan> best;
  // ld outer, sd inner: the first plan seen among exact ties is the
  // lexicographically smallest (LD, SD) pair.
  for (std::size_t ld = 0; ld < l.ld.size(); ++ld) {
    for (std::size_t sd = 0; sd < l.sd.size(); ++sd) {
      ClipPlan p = plan_for(areas, cat, clip, {sd, ld}, w);
      if (p.total_bits > budget.w_bits) continue;
      if (!best || p.scheduled_qoe > best->scheduled_qoe ||
          (p.scheduled_qoe == best->scheduled_qoe && p.total_bits < best->total_bits)) {
        best = std::move(p);
      }
    }
  }
  if (!best) return lowest_plan(areas, cat, clip, budget, w);
  best->feasible = true;
  return *best;
}

BaselineScheme parse_baseline_scheme(std::string_view name) {
  if (name == "full") return BaselineScheme::full;
  if (name == "head_only") return BaselineScheme::head_only;
  if (name == "gaze_only") return BaselineScheme::gaze_only;
  throw InvalidInput("unknown baseline scheme '" + std::string(name) + "'");
}

std::string_view baseline_scheme_name(BaselineScheme s) noexcept {
  switch (s) {
    case BaselineScheme::full: return "full";
    case BaselineScheme::head_only: return "head_only";
    case BaselineScheme::gaze_only: return "gaze_only";
  }
  return "?";
}

ClipPlan baseline_plan(BaselineScheme scheme, const SpherePoint& head_attention, const SpherePoint& gaze_attention,
                       const TileCatalog& cat, int clip, const QoeWeights& w) {
  const SpherePoint& focus = scheme == BaselineScheme::head_only ? head_attention : gaze_attention;
  const AreaMap scored = classify_areas(focus, cat.grid());
  check_clip(cat, clip, scored.grid());
  ClipPlan p;
  p.clip_index = clip;
  p.choice = TileField<Rung>(cat.grid(), Rung{});
  for (std::size_t i = 0; i < p.choice.size(); ++i) {
    const bool hd = scheme == BaselineScheme::full || i == scored.attention_tile.flat(cat.grid());
    p.choice.at_flat(i) = hd ? cat.rung(clip, i, AreaClass::HD, 0) : cat.rung(clip, i, AreaClass::SD, 0);
  }
  p.total_bits = selection_bits(cat, clip, p.choice);
  p.scheduled_qoe = delivered_qoe(p.choice, scored, w);
  p.feasible = true;
  return p;
}

double compression_ratio(const ClipPlan& plan, const TileCatalog& cat, int clip) {
  TileField<Rung> all_hd(cat.grid(), Rung{});
  for (std::size_t i = 0; i < all_hd.size(); ++i) all_hd.at_flat(i) = cat.rung(clip, i, AreaClass::HD, 0);
  return 1.0 - plan.total_bits / selection_bits(cat, clip, all_hd);
}

std::string format_plan(const ClipPlan& plan) {
  std::string out;
  const TileGrid& g = plan.choice.grid();
  for (std::size_t i = 0; i < plan.choice.size(); ++i) {
    const TileIndex t = TileIndex::from_flat(i, g);
    const Rung& r = plan.choice.at_flat(i);
    out += std::to_string(plan.clip_index) + ' ' + std::to_string(t.col) + ' ' + std::to_string(t.row) + ' ' +
           std::string(area_class_name(r.cls)) + ' ' + text::fixed(r.bitrate_kbps, 3) + '\n';
  }
  out += "# total_bits=" + text::fixed(plan.total_bits, 0) + " scheduled_qoe=" + text::fixed(plan.scheduled_qoe, 6) +
         " feasible=" + (plan.feasible ? "1" : "0") + '\n';
  return out;
}

}  // namespace fovr
