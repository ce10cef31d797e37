#include "fovr/catalog.hpp"

#include <cmath>
#include <istream>
#include <iterator>
#include <random>

#include <json.hpp>

#include "fovr/error.hpp"
#include "fovr/simd/kernels.hpp"

namespace fovr {
namespace {

using json = nlohmann::json;

constexpr std::string_view kFormat = "fovr-manifest/1";

void check_descending(const std::vector<double>& v, std::string_view what) {
  if (v.empty()) throw ValidationError(std::string(what) + " needs at least one rung");
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!(v[i] > 0.0) || !std::isfinite(v[i])) {
      throw ValidationError(std::string(what) + " bitrates must be finite and > 0");
    }
    if (i > 0 && !(v[i] < v[i - 1])) {
      throw ValidationError(std::string(what) + " rungs must strictly decrease");
    }
  }
}

std::string tile_key(int clip, std::size_t tile, const TileGrid& g) {
  const TileIndex t = TileIndex::from_flat(tile, g);
  return "clip " + std::to_string(clip) + " tile (col " + std::to_string(t.col) + ", row " +
         std::to_string(t.row) + ")";
}

std::vector<double> rates_of(const json& obj, const char* key, std::size_t expect, const std::string& where) {
  if (!obj.contains(key) || !obj.at(key).is_array()) {
    throw ValidationError("missing entry " + where + " " + key + "[0]");
  }
  const auto& arr = obj.at(key);
  std::vector<double> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_number()) throw ValidationError(where + " " + key + "[" + std::to_string(i) + "] is not a number");
    out.push_back(quantize_kbps(arr[i].get<double>()));
  }
  if (out.size() < expect) {
    throw ValidationError("missing entry " + where + " " + key + "[" + std::to_string(out.size()) + "]");
  }
  if (out.size() > expect) {
    throw ValidationError(where + " " + key + " has more rungs than the ladder");
  }
  return out;
}

json rates_json(std::span<const double> v) {
  json arr = json::array();
  for (double x : v) arr.push_back(x);
  return arr;
}

}  // namespace

double quantize_kbps(double kbps) noexcept { return std::round(kbps * 1000.0) / 1000.0; }

void DefinitionLadder::validate() const {
  if (!(hd > 0.0) || !std::isfinite(hd)) throw ValidationError("HD bitrate must be finite and > 0");
  check_descending(sd, "SD");
  check_descending(ld, "LD");
}

std::size_t DefinitionLadder::rungs(AreaClass c) const noexcept {
  switch (c) {
    case AreaClass::HD: return 1;
    case AreaClass::SD: return sd.size();
    case AreaClass::LD: return ld.size();
  }
  return 0;
}

TileCatalog::TileCatalog(TileGrid grid, int clip_count, std::int64_t clip_duration_ms,
                         DefinitionLadder ladder, std::vector<double> table)
    : grid_(grid),
      clip_count_(clip_count),
      clip_duration_ms_(clip_duration_ms),
      ladder_(std::move(ladder)),
      table_(std::move(table)) {
  if (grid_.cols < 1 || grid_.rows < 1) throw ValidationError("grid needs at least one tile");
  if (clip_count_ < 1) throw ValidationError("catalog needs at least one clip");
  if (clip_duration_ms_ <= 0) throw ValidationError("clip duration must be > 0 ms");
  ladder_.validate();
  const std::size_t rungs = ladder_.total_rungs();
  const std::size_t tiles = grid_.tile_count();
  if (table_.size() != static_cast<std::size_t>(clip_count_) * tiles * rungs) {
    throw ValidationError("bitrate table is incomplete");
  }
  for (int c = 0; c < clip_count_; ++c) {
    for (std::size_t t = 0; t < tiles; ++t) {
      const double* row = table_.data() + (static_cast<std::size_t>(c) * tiles + t) * rungs;
      const std::string where = tile_key(c, t, grid_);
      if (!(row[0] > 0.0) || !std::isfinite(row[0])) throw ValidationError(where + ": HD bitrate must be > 0");
      check_descending(std::vector<double>(row + 1, row + 1 + ladder_.sd.size()), where + " SD");
      check_descending(std::vector<double>(row + 1 + ladder_.sd.size(), row + rungs), where + " LD");
    }
  }
}

std::size_t TileCatalog::offset(AreaClass cls, std::size_t rung) const noexcept {
  switch (cls) {
    case AreaClass::HD: return 0;
    case AreaClass::SD: return 1 + rung;
    case AreaClass::LD: return 1 + ladder_.sd.size() + rung;
  }
  return 0;
}

double TileCatalog::bitrate(int clip, std::size_t tile, AreaClass cls, std::size_t rung) const {
  if (clip < 0 || clip >= clip_count_) throw InvalidInput("clip " + std::to_string(clip) + " not in catalog");
  if (tile >= grid_.tile_count()) throw InvalidInput("tile index out of range");
  if (rung >= ladder_.rungs(cls)) throw InvalidInput("rung index out of range");
  const std::size_t rungs = ladder_.total_rungs();
  return table_[(static_cast<std::size_t>(clip) * grid_.tile_count() + tile) * rungs + offset(cls, rung)];
}

TileCatalog load_manifest(std::istream& in) {
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return load_manifest(std::string_view(text));
}

TileCatalog load_manifest(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(0, std::string("manifest is not valid JSON: ") + e.what());
  }
  try {
    if (!doc.is_object()) throw ValidationError("manifest must be a JSON object");
    if (doc.value("format", std::string()) != kFormat) {
      throw ValidationError("manifest format must be \"" + std::string(kFormat) + "\"");
    }
    TileGrid grid{doc.at("grid").at("cols").get<int>(), doc.at("grid").at("rows").get<int>()};
    if (grid.cols < 1 || grid.rows < 1) throw ValidationError("grid needs at least one tile");
    const int clips = doc.at("clip_count").get<int>();
    const auto duration = doc.at("clip_duration_ms").get<std::int64_t>();

    DefinitionLadder ladder;
    const auto& l = doc.at("ladder");
    const auto hd = rates_of(l, "hd", 1, "ladder");
    ladder.hd = hd[0];
    ladder.sd = rates_of(l, "sd", l.contains("sd") ? l.at("sd").size() : 0, "ladder");
    ladder.ld = rates_of(l, "ld", l.contains("ld") ? l.at("ld").size() : 0, "ladder");
    ladder.validate();
    if (clips < 1) throw ValidationError("catalog needs at least one clip");

    const auto& table = doc.at("table");
    if (!table.is_array()) throw ValidationError("table must be an array of clips");
    if (table.size() > static_cast<std::size_t>(clips)) throw ValidationError("table has more clips than clip_count");
    const std::size_t tiles = grid.tile_count();
    std::vector<double> flat;
    flat.reserve(static_cast<std::size_t>(clips) * tiles * ladder.total_rungs());
    for (int c = 0; c < clips; ++c) {
      if (static_cast<std::size_t>(c) >= table.size()) {
        throw ValidationError("missing entry " + tile_key(c, 0, grid) + " hd[0]");
      }
      const auto& tiles_json = table[static_cast<std::size_t>(c)];
      if (!tiles_json.is_array()) throw ValidationError("table clip " + std::to_string(c) + " must be an array");
      if (tiles_json.size() > tiles) throw ValidationError("clip " + std::to_string(c) + " has more tiles than the grid");
      for (std::size_t t = 0; t < tiles; ++t) {
        const std::string where = tile_key(c, t, grid);
        if (t >= tiles_json.size()) throw ValidationError("missing entry " + where + " hd[0]");
        const auto& obj = tiles_json[t];
        if (!obj.is_object()) throw ValidationError(where + " must be an object");
        const auto h = rates_of(obj, "hd", 1, where);
        const auto s = rates_of(obj, "sd", ladder.sd.size(), where);
        const auto d = rates_of(obj, "ld", ladder.ld.size(), where);
        flat.push_back(h[0]);
        flat.insert(flat.end(), s.begin(), s.end());
        flat.insert(flat.end(), d.begin(), d.end());
      }
    }
    return TileCatalog(grid, clips, duration, std::move(ladder), std::move(flat));
  } catch (const json::exception& e) {
    throw ValidationError(std::string("manifest schema: ") + e.what());
  }
}

std::string save_manifest(const TileCatalog& cat) {
  const auto& ladder = cat.ladder();
  json doc;
  doc["format"] = std::string(kFormat);
  doc["grid"] = {{"cols", cat.grid().cols}, {"rows", cat.grid().rows}};
  doc["clip_count"] = cat.clip_count();
  doc["clip_duration_ms"] = cat.clip_duration_ms();
  doc["ladder"] = {{"hd", rates_json(std::vector<double>{ladder.hd})},
                   {"sd", rates_json(ladder.sd)},
                   {"ld", rates_json(ladder.ld)}};
  json table = json::array();
  const std::size_t tiles = cat.grid().tile_count();
  for (int c = 0; c < cat.clip_count(); ++c) {
    json clip = json::array();
    for (std::size_t t = 0; t < tiles; ++t) {
      std::vector<double> sd, ld;
      for (std::size_t r = 0; r < ladder.sd.size(); ++r) sd.push_back(cat.bitrate(c, t, AreaClass::SD, r));
      for (std::size_t r = 0; r < ladder.ld.size(); ++r) ld.push_back(cat.bitrate(c, t, AreaClass::LD, r));
      clip.push_back({{"hd", rates_json(std::vector<double>{cat.bitrate(c, t, AreaClass::HD, 0)})},
                      {"sd", rates_json(sd)},
                      {"ld", rates_json(ld)}});
    }
    table.push_back(std::move(clip));
  }
  doc["table"] = std::move(table);
  return doc.dump() + "\n";
}

TileCatalog synth_catalog(const SynthCatalogParams& p, std::uint64_t seed) {
  p.grid.validate();
  if (p.clips < 1) throw InvalidInput("need at least one clip");
  if (p.clip_duration_ms <= 0) throw InvalidInput("clip duration must be > 0 ms");
  if (!(p.base_kbps > 0.0) || !std::isfinite(p.base_kbps)) throw InvalidInput("base bitrate must be > 0");
  if (!(p.jitter >= 0.0 && p.jitter < 0.5)) throw InvalidInput("jitter must be in [0, 0.5)");
  for (const auto* ratios : {&p.sd_ratios, &p.ld_ratios}) {
    if (ratios->empty()) throw InvalidInput("each class needs at least one ratio");
    for (std::size_t i = 0; i < ratios->size(); ++i) {
      const double r = (*ratios)[i];
      if (!(r > 0.0 && r < 1.0)) throw InvalidInput("ratios must lie in (0, 1)");
      if (i > 0 && !(r < (*ratios)[i - 1])) throw InvalidInput("ratios must strictly decrease");
    }
  }

  const std::size_t tiles = p.grid.tile_count();
  const double nominal = p.base_kbps / static_cast<double>(tiles);
  DefinitionLadder ladder;
  ladder.hd = quantize_kbps(nominal);
  for (double r : p.sd_ratios) ladder.sd.push_back(quantize_kbps(nominal * r));
  for (double r : p.ld_ratios) ladder.ld.push_back(quantize_kbps(nominal * r));

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> jitter(-p.jitter, p.jitter);
  std::vector<double> table;
  table.reserve(static_cast<std::size_t>(p.clips) * tiles * ladder.total_rungs());
  for (int c = 0; c < p.clips; ++c) {
    for (std::size_t t = 0; t < tiles; ++t) {
      const double hd = p.jitter > 0.0 ? nominal * (1.0 + jitter(rng)) : nominal;
      table.push_back(quantize_kbps(hd));
      for (double r : p.sd_ratios) table.push_back(quantize_kbps(hd * r));
      for (double r : p.ld_ratios) table.push_back(quantize_kbps(hd * r));
    }
  }
  try {
    return TileCatalog(p.grid, p.clips, p.clip_duration_ms, std::move(ladder), std::move(table));
  } catch (const ValidationError& e) {
    throw InvalidInput(std::string("synthetic catalog degenerates at 0.001 kbps resolution: ") + e.what());
  }
}

double selection_bits(const TileCatalog& cat, int clip, const TileField<Rung>& choice) {
  if (clip < 0 || clip >= cat.clip_count()) throw InvalidInput("clip " + std::to_string(clip) + " not in catalog");
  if (!choice.covers(cat.grid())) throw InvalidInput("rung choice does not cover the grid");
  std::vector<double> kbps(choice.size());
  for (std::size_t i = 0; i < kbps.size(); ++i) kbps[i] = choice.at_flat(i).bitrate_kbps;
  // kbps * ms = bits
  return simd::sum(kbps) * static_cast<double>(cat.clip_duration_ms());
}

}  // namespace fovr
