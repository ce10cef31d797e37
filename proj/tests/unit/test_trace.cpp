#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>

#include "fovr/error.hpp"
#include "fovr/trace.hpp"

using namespace fovr;

namespace {

std::string line(std::int64_t t, const SpherePoint& gaze) {
  const UnitVec3 d = sphere_to_dir(gaze);
  std::ostringstream ss;
  ss.precision(17);
  ss << t << " 1 0 0 0 " << d.x << ' ' << d.y << ' ' << d.z << '\n';
  return ss.str();
}

Trace equator_sweep(double yaw0, double yaw1, std::int64_t t1) {
  return load_trace(line(0, {yaw0, 0}) + line(t1, {yaw1, 0}));
}

}  // namespace

TEST_SUITE("trace") {
  TEST_CASE("load_trace accepts well-formed lines and comments") {
    const Trace tr = load_trace("# header\n0 1 0 0 0 1 0 0\n100 1 0 0 0 0 1 0\n");
    CHECK(tr.size() == 2);
    CHECK(tr.front_ms() == 0);
    CHECK(tr.back_ms() == 100);
    CHECK(tr.nominal_rate_hz() == doctest::Approx(10.0));
  }

  TEST_CASE("load_trace error cases") {
    CHECK_THROWS_AS(load_trace("0 0.5 0 0 0 1 0 0\n100 1 0 0 0 1 0 0\n"), ValidationError);
    CHECK_THROWS_AS(load_trace("100 1 0 0 0 1 0 0\n100 1 0 0 0 1 0 0\n"), ValidationError);
    CHECK_THROWS_AS(load_trace("0 1 0 0 0 1 0 0\n100 1 0 0 0 1 0 0 0.1 0 0\n"), ValidationError);
    CHECK_THROWS_AS(load_trace("0 1 0 0 0 1 0 0\n"), ValidationError);
    try {
      load_trace("0 1 0 0 0 1 0 0\n100 1 0 0 x 1 0 0\n");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
    }
    CHECK_THROWS_AS(load_trace("0 1 0 0 0 1 0\n100 1 0 0 0 1 0 0\n"), ParseError);
  }

  TEST_CASE("nearly-unit inputs are normalised, origin at centre is kept") {
    const Trace tr = load_trace("0 1.0004 0 0 0 0.9996 0 0 0 0 0\n100 1 0 0 0 1 0 0\n");
    CHECK(tr.samples()[0].head.norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(tr.samples()[0].gaze.x == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(tr.samples()[0].gaze_origin.has_value());
    CHECK_FALSE(tr.samples()[1].gaze_origin.has_value());
  }

  TEST_CASE("serialise and load round-trip byte-identically") {
    const Trace tr = gen_synthetic(MotionKind::pursuit, {}, 4);
    const std::string a = serialize_trace(tr);
    const Trace back = load_trace(a);
    CHECK(serialize_trace(back) == a);
    CHECK(back.size() == tr.size());
  }

  TEST_CASE("resample examples") {
    const Trace tr = gen_synthetic(MotionKind::pursuit, {}, 2);
    const Trace same = resample(tr, 10.0);
    REQUIRE(same.size() == tr.size());
    for (std::size_t i = 0; i < tr.size(); ++i) {
      CHECK(same.samples()[i].t_ms == tr.samples()[i].t_ms);
      CHECK(std::abs(same.samples()[i].gaze.x - tr.samples()[i].gaze.x) < 1e-9);
      CHECK(std::abs(same.samples()[i].head.z - tr.samples()[i].head.z) < 1e-9);
    }

    const Trace two = equator_sweep(0, 90, 1000);
    const Trace grid = resample(two, 10.0);
    REQUIRE(grid.size() == 11);
    for (std::size_t i = 0; i < grid.size(); ++i) CHECK(grid.samples()[i].t_ms == static_cast<std::int64_t>(100 * i));

    const Trace quarter = resample(two, 4.0);
    REQUIRE(quarter.size() == 5);
    for (std::size_t i = 0; i < 5; ++i) {
      CHECK(std::abs(dir_to_sphere(quarter.samples()[i].gaze).yaw() - 22.5 * static_cast<double>(i)) < 1e-6);
    }
    CHECK_THROWS_AS(resample(two, 0.0), InvalidInput);
    CHECK_THROWS_AS(resample(two, -1.0), InvalidInput);
  }

  TEST_CASE("resample keeps the end point when the grid misses it") {
    const Trace tr = equator_sweep(0, 10, 1050);
    const Trace r = resample(tr, 10.0);
    CHECK(r.back_ms() == 1050);
    CHECK(r.samples()[r.size() - 2].t_ms == 1000);
  }

  TEST_CASE("resample_span rejects windows outside the trace") {
    const Trace tr = equator_sweep(0, 10, 1000);
    CHECK_THROWS_AS(resample_span(tr, -100, 500, 10.0), RangeError);
    CHECK_THROWS_AS(resample_span(tr, 500, 1100, 10.0), RangeError);
    CHECK(resample_span(tr, 200, 700, 10.0).size() == 6);
  }

  TEST_CASE("ground_truth_attention examples") {
    const Trace tr = equator_sweep(0, 10, 1000);
    CHECK(ground_truth_attention(tr, 0.0).yaw() == doctest::Approx(0.0));
    CHECK(ground_truth_attention(tr, 1000.0).yaw() == doctest::Approx(10.0));
    CHECK(std::abs(ground_truth_attention(tr, 500.0).yaw() - 5.0) < 1e-6);
    CHECK_THROWS_AS(ground_truth_attention(tr, -1.0), RangeError);
    CHECK_THROWS_AS(ground_truth_attention(tr, 1001.0), RangeError);
  }

  TEST_CASE("gen_synthetic static with zero noise") {
    SyntheticParams p;
    p.center_yaw_deg = 23;
    p.center_pitch_deg = -7;
    p.sigma_deg = 0.0;
    const Trace tr = gen_synthetic(MotionKind::static_scene, p, 0);
    CHECK(tr.size() == 101);
    for (const auto& s : tr.samples()) {
      const SpherePoint g = dir_to_sphere(s.gaze);
      CHECK(g.yaw() == doctest::Approx(23.0).epsilon(1e-12));
      CHECK(g.pitch() == doctest::Approx(-7.0).epsilon(1e-12));
    }
  }

  TEST_CASE("gen_synthetic is deterministic per seed") {
    for (auto kind : {MotionKind::static_scene, MotionKind::pursuit, MotionKind::saccade}) {
      SyntheticParams p;
      p.sigma_deg = 1.0;
      CHECK(serialize_trace(gen_synthetic(kind, p, 17)) == serialize_trace(gen_synthetic(kind, p, 17)));
      CHECK(serialize_trace(gen_synthetic(kind, p, 17)) != serialize_trace(gen_synthetic(kind, p, 18)));
    }
  }

  TEST_CASE("pursuit reaches the amplitude at the quarter period") {
    const Trace tr = gen_synthetic(MotionKind::pursuit, {}, 0);
    const SpherePoint at2 = ground_truth_attention(tr, 2000.0);
    CHECK(std::abs(at2.yaw() - 30.0) < 1e-6);
    CHECK(std::abs(at2.pitch() - 10.0) < 1e-6);
  }

  TEST_CASE("head follows the gaze path with a lag") {
    SyntheticParams p;
    p.head_lag_ms = 500;
    const Trace tr = gen_synthetic(MotionKind::pursuit, p, 0);
    // Gaze at 1.5 s equals head at 2.0 s on the noise-free path.
    const SpherePoint g = ground_truth_attention(tr, 1500.0);
    const SpherePoint h = head_direction(tr, 2000.0);
    CHECK(angular_distance(g, h) < 1e-6);
  }

  TEST_CASE("saccade traces hold still between jumps") {
    SyntheticParams p;
    p.duration_s = 30;
    const Trace tr = gen_synthetic(MotionKind::saccade, p, 1);
    std::size_t still = 0, moved = 0;
    for (std::size_t i = 1; i < tr.size(); ++i) {
      const double d = angular_distance(dir_to_sphere(tr.samples()[i - 1].gaze), dir_to_sphere(tr.samples()[i].gaze));
      (d < 1e-9 ? still : moved) += 1;
    }
    CHECK(moved >= 3);
    CHECK(still > 10 * moved);
  }

  TEST_CASE("unknown motion kind") {
    CHECK_THROWS_AS(parse_motion_kind("bogus"), InvalidInput);
    CHECK(parse_motion_kind("saccade") == MotionKind::saccade);
    CHECK(motion_kind_name(MotionKind::static_scene) == "static");
  }
}
