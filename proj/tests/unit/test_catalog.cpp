#include <doctest.h>

#include <random>
#include <string>

#include "fovr/catalog.hpp"
#include "fovr/error.hpp"

using namespace fovr;

namespace {

const char* kMinimal = R"({"clip_count":1,"clip_duration_ms":1000,"format":"fovr-manifest/1","grid":{"cols":2,"rows":2},
"ladder":{"hd":[100],"ld":[12,6],"sd":[66,33]},
"table":[[{"hd":[100],"ld":[12,6],"sd":[66,33]},{"hd":[90],"ld":[11,5],"sd":[60,30]},
{"hd":[80],"ld":[10,4],"sd":[50,25]},{"hd":[70],"ld":[9,3],"sd":[40,20]}]]})";

TileCatalog flat_catalog(TileGrid g, double tile_kbps) {
  SynthCatalogParams p;
  p.grid = g;
  p.clips = 1;
  p.base_kbps = tile_kbps * static_cast<double>(g.tile_count());
  p.sd_ratios = {0.66};
  p.ld_ratios = {0.12};
  return synth_catalog(p, 0);
}

}  // namespace

TEST_SUITE("catalog") {
  TEST_CASE("minimal manifest loads") {
    const TileCatalog cat = load_manifest(std::string_view(kMinimal));
    CHECK(cat.grid().tile_count() == 4);
    CHECK(cat.clip_count() == 1);
    CHECK(cat.bitrate(0, 1, AreaClass::SD, 1) == 30.0);
    CHECK(cat.bitrate(0, 3, AreaClass::LD, 0) == 9.0);
    CHECK(cat.ladder().ld == std::vector<double>{12, 6});
    CHECK_THROWS_AS(cat.bitrate(1, 0, AreaClass::HD, 0), InvalidInput);
    CHECK_THROWS_AS(cat.bitrate(0, 0, AreaClass::HD, 1), InvalidInput);
  }

  TEST_CASE("missing entries are named") {
    std::string text = kMinimal;
    const std::string victim = R"({"hd":[80],"ld":[10,4],"sd":[50,25]})";
    text.replace(text.find(victim), victim.size(), R"({"hd":[80],"sd":[50,25]})");
    try {
      load_manifest(std::string_view(text));
      FAIL("expected validation error");
    } catch (const ValidationError& e) {
      const std::string msg = e.what();
      CHECK(msg.find("clip 0 tile (col 0, row 1) ld[0]") != std::string::npos);
    }
    std::string short_rungs = kMinimal;
    const std::string ld = R"("ld":[9,3])";
    short_rungs.replace(short_rungs.find(ld), ld.size(), R"("ld":[9])");
    try {
      load_manifest(std::string_view(short_rungs));
      FAIL("expected validation error");
    } catch (const ValidationError& e) {
      CHECK(std::string(e.what()).find("clip 0 tile (col 1, row 1) ld[1]") != std::string::npos);
    }
  }

  TEST_CASE("invalid manifests") {
    std::string up = kMinimal;
    const std::string sd = R"("sd":[50,25])";
    up.replace(up.find(sd), sd.size(), R"("sd":[25,50])");
    CHECK_THROWS_AS(load_manifest(std::string_view(up)), ValidationError);
    CHECK_THROWS_AS(load_manifest(std::string_view("{not json")), ParseError);
    std::string two_hd = kMinimal;
    two_hd.replace(two_hd.find(R"("hd":[100],"ld")"), 10, R"("hd":[100,50])");
    CHECK_THROWS_AS(load_manifest(std::string_view(two_hd)), ValidationError);
    std::string zero_ms = kMinimal;
    zero_ms.replace(zero_ms.find("1000"), 4, "0");
    CHECK_THROWS_AS(load_manifest(std::string_view(zero_ms)), ValidationError);
  }

  TEST_CASE("save and load round-trip byte-identically") {
    const std::string once = save_manifest(load_manifest(std::string_view(kMinimal)));
    CHECK(save_manifest(load_manifest(std::string_view(once))) == once);
    SynthCatalogParams p;
    p.grid = {6, 3};
    p.clips = 3;
    p.jitter = 0.3;
    const std::string s = save_manifest(synth_catalog(p, 42));
    CHECK(save_manifest(load_manifest(std::string_view(s))) == s);
    CHECK(load_manifest(std::string_view(s)) == synth_catalog(p, 42));
  }

  TEST_CASE("synth_catalog with no jitter divides evenly") {
    SynthCatalogParams p;
    p.clips = 2;
    p.sd_ratios = {0.66};
    p.ld_ratios = {0.12};
    const TileCatalog cat = synth_catalog(p, 5);
    for (int c = 0; c < 2; ++c) {
      for (std::size_t t = 0; t < cat.grid().tile_count(); ++t) {
        CHECK(cat.bitrate(c, t, AreaClass::HD, 0) == 1.0);
        CHECK(cat.bitrate(c, t, AreaClass::SD, 0) == 0.66);
        CHECK(cat.bitrate(c, t, AreaClass::LD, 0) == 0.12);
      }
    }
  }

  TEST_CASE("synth_catalog jitter stays in range and is seeded") {
    SynthCatalogParams p;
    p.grid = {8, 4};
    p.base_kbps = 32000;
    p.jitter = 0.25;
    const TileCatalog a = synth_catalog(p, 1);
    CHECK(a == synth_catalog(p, 1));
    CHECK_FALSE(a == synth_catalog(p, 2));
    for (std::size_t t = 0; t < 32; ++t) {
      const double hd = a.bitrate(0, t, AreaClass::HD, 0);
      CHECK(hd >= 750.0 - 1e-3);
      CHECK(hd <= 1250.0 + 1e-3);
      CHECK(a.bitrate(0, t, AreaClass::SD, 1) == doctest::Approx(hd * 0.33).epsilon(1e-5));
    }
  }

  TEST_CASE("synth_catalog rejects bad parameters") {
    SynthCatalogParams p;
    p.sd_ratios = {1.5};
    CHECK_THROWS_AS(synth_catalog(p, 0), InvalidInput);
    p = {};
    p.ld_ratios = {0.06, 0.12};
    CHECK_THROWS_AS(synth_catalog(p, 0), InvalidInput);
    p = {};
    p.jitter = 0.5;
    CHECK_THROWS_AS(synth_catalog(p, 0), InvalidInput);
    p = {};
    p.clip_duration_ms = 0;
    CHECK_THROWS_AS(synth_catalog(p, 0), InvalidInput);
  }

  TEST_CASE("selection_bits examples") {
    const TileGrid g{2, 2};
    const TileCatalog cat = flat_catalog(g, 100);
    TileField<Rung> all(g, Rung{AreaClass::HD, 100});
    CHECK(selection_bits(cat, 0, all) == 400000.0);
    TileField<Rung> mixed(g, std::vector<Rung>{{AreaClass::HD, 100}, {AreaClass::SD, 66}, {AreaClass::LD, 12},
                                               {AreaClass::LD, 12}});
    CHECK(selection_bits(cat, 0, mixed) == 190000.0);
    CHECK_THROWS_AS(selection_bits(cat, 0, TileField<Rung>(TileGrid{1, 2}, Rung{})), InvalidInput);
    CHECK_THROWS_AS(selection_bits(cat, 3, all), InvalidInput);
  }

  TEST_CASE("all-HD is the largest selection and all-lowest-LD the smallest") {
    SynthCatalogParams p;
    p.grid = {4, 3};
    p.clips = 1;
    p.base_kbps = 12000;
    p.jitter = 0.3;
    const TileCatalog cat = synth_catalog(p, 9);
    const TileGrid g = cat.grid();
    TileField<Rung> hi(g, Rung{}), lo(g, Rung{});
    for (std::size_t i = 0; i < g.tile_count(); ++i) {
      hi.at_flat(i) = cat.rung(0, i, AreaClass::HD, 0);
      lo.at_flat(i) = cat.rung(0, i, AreaClass::LD, 1);
    }
    const double max_bits = selection_bits(cat, 0, hi), min_bits = selection_bits(cat, 0, lo);
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> pick(0, 4);
    for (int trial = 0; trial < 100; ++trial) {
      TileField<Rung> any(g, Rung{});
      for (std::size_t i = 0; i < g.tile_count(); ++i) {
        const int k = pick(rng);
        any.at_flat(i) = k == 0 ? cat.rung(0, i, AreaClass::HD, 0)
                         : k < 3 ? cat.rung(0, i, AreaClass::SD, static_cast<std::size_t>(k - 1))
                                 : cat.rung(0, i, AreaClass::LD, static_cast<std::size_t>(k - 3));
      }
      const double b = selection_bits(cat, 0, any);
      CHECK(b <= max_bits);
      CHECK(b >= min_bits);
    }
  }
}
