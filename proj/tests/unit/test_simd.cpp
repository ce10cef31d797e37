#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "fovr/error.hpp"
#include "fovr/simd/kernels.hpp"

using namespace fovr;

namespace {

std::vector<double> random_vec(std::size_t n, double lo, double hi, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b))); }

}  // namespace

TEST_SUITE("simd") {
  TEST_CASE("scalar backend is always available and selectable") {
    CHECK(simd::backend_supported(simd::Backend::scalar));
    simd::set_backend(simd::Backend::scalar);
    CHECK(simd::active_backend() == simd::Backend::scalar);
    simd::reset_backend();
  }

  TEST_CASE("selecting an unsupported backend throws") {
    if (!simd::backend_supported(simd::Backend::avx2)) {
      CHECK_THROWS_AS(simd::set_backend(simd::Backend::avx2), InvalidInput);
    }
  }

  TEST_CASE("avx2 kernels match the scalar reference") {
    if (!simd::backend_supported(simd::Backend::avx2)) {
      MESSAGE("avx2 not supported on this CPU; equivalence skipped");
      return;
    }
    std::mt19937_64 rng(11);
    // Lengths cover empty, tails shorter than one vector and unrolled bodies.
    for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 7u, 8u, 9u, 15u, 16u, 17u, 50u, 1296u, 1299u}) {
      const auto a = random_vec(n, -100.0, 100.0, rng);
      const auto b = random_vec(n, -1.0, 1.0, rng);
      CHECK(rel(simd::scalar::sum(a), simd::avx2::sum(a)) < 1e-12);
      CHECK(rel(simd::scalar::dot(a, b), simd::avx2::dot(a, b)) < 1e-12);

      const auto kbps = random_vec(n, 0.0, 60000.0, rng);
      const auto rate = random_vec(n, 0.0, 1e-3, rng);
      std::vector<double> s(n), v(n);
      simd::scalar::saturating_exp(kbps, rate, s);
      simd::avx2::saturating_exp(kbps, rate, v);
      for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(s[i] - v[i]) < 1e-14);

      const auto centers = random_vec(n, 0.0, 1.0, rng);
      simd::scalar::rbf_row(centers, 0.37, 10.0, s);
      simd::avx2::rbf_row(centers, 0.37, 10.0, v);
      for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(s[i] - v[i]) < 1e-14 * std::max(1.0, s[i]));
    }
  }

  TEST_CASE("avx2 exp handles underflow and exact zero") {
    if (!simd::backend_supported(simd::Backend::avx2)) return;
    const std::vector<double> centers{0.0, 10.0, -10.0, 1e6, 0.5, 0.5, 0.5, 0.5, 0.5};
    std::vector<double> s(centers.size()), v(centers.size());
    simd::scalar::rbf_row(centers, 0.5, 10.0, s);
    simd::avx2::rbf_row(centers, 0.5, 10.0, v);
    for (std::size_t i = 0; i < s.size(); ++i) {
      CHECK(std::isfinite(v[i]));
      CHECK(v[i] >= 0.0);
      CHECK(std::abs(s[i] - v[i]) < 1e-300 + 1e-14 * s[i]);
    }
    CHECK(v[4] == 1.0);
    CHECK(v[3] == 0.0);
  }

  TEST_CASE("dispatch honours the selected backend") {
    const std::vector<double> a{1.0, 2.0, 3.0, 4.0, 5.0};
    for (auto be : {simd::Backend::scalar, simd::Backend::avx2}) {
      if (!simd::backend_supported(be)) continue;
      simd::set_backend(be);
      CHECK(simd::sum(a) == doctest::Approx(15.0));
      CHECK(simd::dot(a, a) == doctest::Approx(55.0));
    }
    simd::reset_backend();
  }

  TEST_CASE("length mismatches are rejected") {
    std::vector<double> a(3), b(4), out(3);
    CHECK_THROWS_AS(simd::dot(a, b), InvalidInput);
    CHECK_THROWS_AS(simd::saturating_exp(a, b, out), InvalidInput);
  }
}
