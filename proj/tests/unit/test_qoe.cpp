#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "fovr/error.hpp"
#include "fovr/qoe.hpp"

using namespace fovr;

TEST_SUITE("qoe") {
  TEST_CASE("bvqa examples") {
    for (auto c : {AreaClass::HD, AreaClass::SD, AreaClass::LD}) CHECK(bvqa(0.0, c) == 0.0);
    CHECK(std::abs(bvqa(4529, AreaClass::HD) - (1.0 - std::exp(-0.36685))) < 1e-6);
    CHECK(std::abs(bvqa(4529, AreaClass::HD) - 0.3071) < 1e-4);
    CHECK(std::abs(bvqa(3554, AreaClass::LD) - 0.9001) < 1e-4);
    // 0.9 is crossed just below 3554 kbps: x = ln(10) / 0.648e-3.
    const double cross = std::log(10.0) / 0.648e-3;
    CHECK(bvqa(cross - 1.0, AreaClass::LD) < 0.9);
    CHECK(bvqa(cross + 1.0, AreaClass::LD) > 0.9);
    CHECK_THROWS_AS(bvqa(-1.0, AreaClass::HD), InvalidInput);
    CHECK_THROWS_AS(bvqa(INFINITY, AreaClass::HD), InvalidInput);
  }

  TEST_CASE("bvqa ordering across classes at equal bitrate") {
    for (double b : {1.0, 100.0, 1000.0, 5000.0}) {
      CHECK(bvqa(b, AreaClass::LD) >= bvqa(b, AreaClass::SD));
      CHECK(bvqa(b, AreaClass::SD) >= bvqa(b, AreaClass::HD));
    }
  }

  TEST_CASE("bvqa_tiles matches the scalar formula") {
    const TileGrid g{5, 4};
    TileField<double> kbps(g, 0.0);
    TileField<AreaClass> areas(g, AreaClass::LD);
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0, 8000);
    for (std::size_t i = 0; i < kbps.size(); ++i) {
      kbps.at_flat(i) = u(rng);
      areas.at_flat(i) = static_cast<AreaClass>(i % 3);
    }
    const auto out = bvqa_tiles(kbps, areas);
    for (std::size_t i = 0; i < out.size(); ++i) {
      CHECK(std::abs(out.at_flat(i) - bvqa(kbps.at_flat(i), areas.at_flat(i))) < 1e-14);
    }
  }

  TEST_CASE("clip_qoe examples") {
    const TileGrid g{3, 1};
    TileField<AreaClass> areas(g, std::vector<AreaClass>{AreaClass::HD, AreaClass::SD, AreaClass::LD});
    CHECK(clip_qoe(TileField<double>(g, std::vector<double>{1.0, 0.5, 0.2}), areas) == doctest::Approx(0.69));
    CHECK(clip_qoe(TileField<double>(g, 1.0), areas) == doctest::Approx(1.0));
    CHECK(clip_qoe(TileField<double>(g, 0.0), areas) == 0.0);
    CHECK_THROWS_AS(clip_qoe(TileField<double>(TileGrid{1, 3}, 1.0), areas), InvalidInput);
  }

  TEST_CASE("tile weights split each class evenly and renormalise empty classes") {
    const TileGrid g{4, 1};
    TileField<AreaClass> areas(g, std::vector<AreaClass>{AreaClass::HD, AreaClass::SD, AreaClass::SD, AreaClass::LD});
    auto w = tile_weights(areas);
    CHECK(w.at_flat(0) == doctest::Approx(0.5));
    CHECK(w.at_flat(1) == doctest::Approx(0.15));
    CHECK(w.at_flat(3) == doctest::Approx(0.2));

    TileField<AreaClass> no_sd(g, std::vector<AreaClass>{AreaClass::HD, AreaClass::LD, AreaClass::LD, AreaClass::LD});
    w = tile_weights(no_sd);
    CHECK(w.at_flat(0) == doctest::Approx(0.5 / 0.7));
    CHECK(w.at_flat(1) == doctest::Approx(0.2 / 0.7 / 3));

    QoeWeights only_hd{1.0, 0.0, 0.0};
    TileField<AreaClass> all_ld(g, AreaClass::LD);
    w = tile_weights(all_ld, only_hd);
    double total = 0;
    for (double x : w.values()) total += x;
    CHECK(total == doctest::Approx(1.0));
  }

  TEST_CASE("weight validation") {
    CHECK_THROWS_AS((QoeWeights{0.5, 0.5, 0.5}.validate()), InvalidInput);
    CHECK_THROWS_AS((QoeWeights{1.2, -0.1, -0.1}.validate()), InvalidInput);
    CHECK_NOTHROW(QoeWeights{}.validate());
  }

  TEST_CASE("clip_qoe is monotone in each tile and bounded") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0, 1);
    std::uniform_int_distribution<int> cls(0, 2);
    const TileGrid g{6, 4};
    for (int trial = 0; trial < 200; ++trial) {
      TileField<AreaClass> areas(g, AreaClass::LD);
      TileField<double> b(g, 0.0);
      for (std::size_t i = 0; i < b.size(); ++i) {
        areas.at_flat(i) = static_cast<AreaClass>(cls(rng));
        b.at_flat(i) = u(rng) * 0.999;
      }
      const double q = clip_qoe(b, areas);
      CHECK(q >= 0.0);
      CHECK(q <= 1.0);
      const std::size_t k = static_cast<std::size_t>(trial) % b.size();
      b.at_flat(k) = std::min(0.999, b.at_flat(k) + 0.1);
      CHECK(clip_qoe(b, areas) >= q - 1e-15);
    }
  }

  TEST_CASE("mos examples") {
    CHECK(mos(std::vector<double>{4, 5, 3}) == 4.0);
    CHECK(mos(std::vector<double>{2.5}) == 2.5);
    CHECK(mos(std::vector<double>{1, 1, 1, 5}) == 2.0);
    CHECK_THROWS_AS(mos(std::vector<double>{}), InvalidInput);
  }

  TEST_CASE("pearson examples") {
    const std::vector<double> xs{1, 2, 3, 4};
    std::vector<double> ys;
    for (double x : xs) ys.push_back(2 * x + 1);
    CHECK(pearson(xs, ys) == doctest::Approx(1.0));
    std::vector<double> neg;
    for (double x : xs) neg.push_back(-x);
    CHECK(pearson(xs, neg) == doctest::Approx(-1.0));
    CHECK(pearson(std::vector<double>{1, 2, 3}, std::vector<double>{1, 3, 2}) == doctest::Approx(0.5));
    CHECK_THROWS_AS(pearson(std::vector<double>{1, 2}, std::vector<double>{1, 2, 3}), InvalidInput);
    CHECK_THROWS_AS(pearson(std::vector<double>{1, 1, 1}, std::vector<double>{1, 2, 3}), InvalidInput);
  }
}
