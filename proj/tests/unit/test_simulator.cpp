#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <string>

#include "fovr/error.hpp"
#include "fovr/simulator.hpp"

using namespace fovr;

namespace {

Trace static_trace(double seconds) {
  SyntheticParams p;
  p.duration_s = seconds;
  p.center_yaw_deg = 23;
  p.center_pitch_deg = -7;
  p.sigma_deg = 0.0;
  return gen_synthetic(MotionKind::static_scene, p, 0);
}

// 20x20 tiles at 100 kbps HD: a 40 Mbit all-HD clip.
TileCatalog forty_mbit(int clips) {
  SynthCatalogParams p;
  p.grid = {20, 20};
  p.clips = clips;
  p.base_kbps = 40000;
  p.sd_ratios = {0.66};
  p.ld_ratios = {0.12};
  return synth_catalog(p, 0);
}

}  // namespace

TEST_SUITE("simulator") {
  TEST_CASE("perfect prediction with ample bandwidth") {
    const SimReport r = simulate(static_trace(20), forty_mbit(8), BandwidthModel::constant(1e9), {}, Scheme::fovr);
    REQUIRE(r.records.size() == 8);
    CHECK(r.aggregates.stall_count == 0);
    CHECK(r.aggregates.total_stall_ms == 0.0);
    for (const auto& rec : r.records) {
      CHECK(rec.qoe_actual == doctest::Approx(rec.plan.scheduled_qoe).epsilon(1e-12));
      CHECK(std::abs(rec.qoe_actual - rec.plan.scheduled_qoe) <= 1e-9);
      CHECK(rec.prediction_correct);
      CHECK(rec.plan.rungs == ClassRungs{0, 0});
    }
    CHECK(r.aggregates.prediction_accuracy == 1.0);
    CHECK(verify_report(r).empty());
  }

  TEST_CASE("full scheme on a 10 Mbps link stalls every clip") {
    const int clips = 5;
    SimConfig cfg;
    const SimReport r = simulate(static_trace(20), forty_mbit(clips), BandwidthModel::constant(10e6), cfg, Scheme::full);
    // Hand timeline: the first request at 0 finishes at fixed delays + 4 s,
    // later requests wait for the playback slot of the previous clip.
    const double fixed = cfg.prediction_delay_ms + cfg.processing_delay_ms + cfg.network_latency_ms;
    double stalls = 0.0, link = 0.0;
    for (int k = 0; k < clips; ++k) {
      const double deadline = 1000.0 + 1000.0 * k + stalls;
      const double request = k == 0 ? 0.0 : deadline - 1000.0;
      const double ready = std::max(request + fixed, link) + 4000.0;
      link = ready;
      const double stall = std::max(0.0, ready - deadline);
      stalls += stall;
      const auto& rec = r.records[static_cast<std::size_t>(k)];
      CHECK(rec.request_ms == doctest::Approx(request));
      CHECK(rec.ready_ms == doctest::Approx(ready));
      CHECK(rec.stall_ms == doctest::Approx(stall));
      CHECK(rec.stall_ms >= 3000.0);
      CHECK(rec.plan.total_bits == 40e6);
    }
    CHECK(r.aggregates.stall_count == static_cast<std::size_t>(clips));
    CHECK(verify_report(r).empty());
  }

  TEST_CASE("fovr on the same link fits the budget") {
    const SimReport r = simulate(static_trace(20), forty_mbit(5), BandwidthModel::constant(10e6), {}, Scheme::fovr);
    CHECK(r.aggregates.stall_count == 0);
    for (const auto& rec : r.records) {
      CHECK(rec.plan.feasible);
      CHECK(rec.plan.total_bits <= 10e6);
      CHECK(rec.qoe_actual == rec.plan.scheduled_qoe);
    }
    CHECK(r.aggregates.mean_compression == doctest::Approx(1.0 - (100 + 8 * 66 + 391 * 12) / 40000.0));
  }

  TEST_CASE("startup buffering requests the first clips at once") {
    SimConfig cfg;
    cfg.startup_clips = 3;
    const SimReport r = simulate(static_trace(20), forty_mbit(6), BandwidthModel::constant(1e9), cfg, Scheme::fovr);
    CHECK(r.records[0].request_ms == 0.0);
    CHECK(r.records[2].request_ms == 0.0);
    // Clip 3 is requested as clip 2 starts playing.
    CHECK(r.records[3].request_ms == doctest::Approx(5000.0));
    CHECK(r.records[0].display_ms == doctest::Approx(3000.0));
    CHECK(verify_report(r).empty());
  }

  TEST_CASE("misprediction lowers actual QoE") {
    SyntheticParams p;
    p.duration_s = 30;
    std::size_t lower = 0, wrong = 0;
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
      const Trace tr = gen_synthetic(MotionKind::saccade, p, seed);
      const SimReport r = simulate(tr, forty_mbit(20), BandwidthModel::constant(1e9), {}, Scheme::fovr);
      for (const auto& rec : r.records) {
        if (rec.actual == classify_areas(rec.predicted, rec.actual.grid())) {
          CHECK(rec.qoe_actual <= rec.plan.scheduled_qoe + 1e-9);
        } else {
          ++wrong;
          if (rec.qoe_actual < rec.plan.scheduled_qoe) ++lower;
        }
      }
    }
    CHECK(wrong > 0);
    CHECK(lower == wrong);
  }

  TEST_CASE("raising bandwidth never adds stall or lowers QoE") {
    const TileCatalog cat = forty_mbit(10);
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      SyntheticParams p;
      p.duration_s = 20;
      const Trace tr = gen_synthetic(MotionKind::pursuit, p, seed);
      double prev_stall = INFINITY, prev_qoe = -1.0;
      for (double mbps : {2.0, 5.0, 10.0}) {
        const SimReport r = simulate(tr, cat, BandwidthModel::constant(mbps * 1e6), {}, Scheme::fovr);
        CHECK(r.aggregates.total_stall_ms <= prev_stall);
        CHECK(r.aggregates.mean_qoe >= prev_qoe - 1e-12);
        prev_stall = r.aggregates.total_stall_ms;
        prev_qoe = r.aggregates.mean_qoe;
      }
    }
  }

  TEST_CASE("head_only uses the head direction") {
    SyntheticParams p;
    p.duration_s = 20;
    p.head_lag_ms = 0;
    p.sigma_deg = 0.0;
    const Trace tr = gen_synthetic(MotionKind::pursuit, p, 0);
    const SimReport r = simulate(tr, forty_mbit(5), BandwidthModel::constant(1e9), {}, Scheme::head_only);
    CHECK(angular_distance(r.records[0].predicted, head_direction(tr, 5000)) < 1e-9);
    CHECK(angular_distance(r.records[3].predicted, head_direction(tr, 7000)) < 1e-9);
    CHECK(r.aggregates.mean_compression == doctest::Approx(1.0 - (1 + 399 * 0.66) / 400));
  }

  TEST_CASE("inconsistent durations are rejected") {
    CHECK_THROWS_AS(simulate(static_trace(9), forty_mbit(5), BandwidthModel::constant(1e7), {}, Scheme::fovr),
                    InvalidInput);
    SimConfig bad;
    bad.startup_clips = 0;
    CHECK_THROWS_AS(simulate(static_trace(20), forty_mbit(2), BandwidthModel::constant(1e7), bad, Scheme::fovr),
                    InvalidInput);
    CHECK_THROWS_AS(parse_scheme("x"), InvalidInput);
  }

  TEST_CASE("verify_report catches tampering") {
    SimReport r = simulate(static_trace(20), forty_mbit(4), BandwidthModel::constant(10e6), {}, Scheme::full);
    SimReport clock = r;
    clock.records[2].display_ms += 1.0;
    CHECK_FALSE(verify_report(clock).empty());
    SimReport agg = r;
    agg.aggregates.total_bits += 1.0;
    CHECK_FALSE(verify_report(agg).empty());
  }

  TEST_CASE("report emission") {
    SimReport empty;
    CHECK(emit_report(empty, ReportFormat::rows) ==
          "clip,request_ms,ready_ms,display_ms,stall_ms,bits,scheduled_qoe,actual_qoe,correct\n");

    const SimReport one = simulate(static_trace(10), forty_mbit(1), BandwidthModel::constant(10e6), {}, Scheme::full);
    const auto& rec = one.records[0];
    CHECK(one.aggregates.mean_qoe == rec.qoe_actual);
    CHECK(one.aggregates.stddev_qoe == 0.0);
    CHECK(one.aggregates.total_stall_ms == rec.stall_ms);
    CHECK(one.aggregates.total_bits == rec.plan.total_bits);
    const std::string rows = emit_report(one, ReportFormat::rows);
    CHECK(rows.find("\n0,0.000,4110.066,4110.066,3110.066,40000000,") != std::string::npos);
    CHECK(emit_report(one, ReportFormat::rows) == rows);
    const std::string summary = emit_report(one, ReportFormat::summary);
    CHECK(summary.find("\"stall_count\": 1") != std::string::npos);
    CHECK(summary.find("\"scheme\": \"full\"") != std::string::npos);
    CHECK(emit_report(one, ReportFormat::summary) == summary);
    CHECK_THROWS_AS(parse_report_format("xml"), InvalidInput);
  }

  TEST_CASE("identical inputs give identical reports") {
    SyntheticParams p;
    p.duration_s = 15;
    const Trace tr = gen_synthetic(MotionKind::saccade, p, 3);
    const auto a = simulate(tr, forty_mbit(8), BandwidthModel::constant(5e6), {}, Scheme::fovr);
    const auto b = simulate(tr, forty_mbit(8), BandwidthModel::constant(5e6), {}, Scheme::fovr);
    CHECK(emit_report(a, ReportFormat::rows) == emit_report(b, ReportFormat::rows));
    CHECK(emit_report(a, ReportFormat::summary) == emit_report(b, ReportFormat::summary));
  }
}
