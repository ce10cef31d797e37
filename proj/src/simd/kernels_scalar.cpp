#include "fovr/simd/kernels.hpp"

#include <cmath>
#include <cstddef>

// Reference implementations. Straight loops in index order; the SIMD
// variants are tested against these.

namespace fovr::simd::scalar {

double sum(std::span<const double> x) {
  double acc = 0.0;
  for (double v : x) acc += v;
  return acc;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

void saturating_exp(std::span<const double> x, std::span<const double> rate,
                    std::span<double> out) {
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = 1.0 - std::exp(-rate[i] * x[i]);
}

void rbf_row(std::span<const double> centers, double x, double gamma,
             std::span<double> out) {
  for (std::size_t i = 0; i < centers.size(); ++i) {
    const double d = centers[i] - x;
    out[i] = std::exp(-gamma * d * d);
  }
}

}  // namespace fovr::simd::scalar
