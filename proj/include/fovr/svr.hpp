#pragma once
// Epsilon-insensitive support vector regression on scalar inputs with a
// Gaussian RBF kernel.
//
// Training solves the standard dual
//
//   min  1/2 (a - a*)' K (a - a*) + eps * sum(a + a*) - y' (a - a*)
//   s.t. sum(a - a*) = 0,  0 <= a, a* <= C
//
// with sequential pairwise (SMO) updates using second-order working-set
// selection. The model is f(x) = sum_i coeff_i * K(x_i, x) + b.

#include <cstddef>
#include <span>
#include <vector>

namespace fovr {

struct SvrConfig {
  double c = 100.0;
  double epsilon = 0.5;
  double gamma = 10.0;
  double tol = 1e-4;
  int max_iter = 10000;

  /// Throws InvalidInput on non-positive C/gamma/tol/max_iter or negative epsilon.
  void validate() const;
};

struct SvrModel {
  std::vector<double> support_inputs;
  std::vector<double> dual_coeffs;  // a_i - a*_i, each in [-C, C]
  double bias = 0.0;
  double gamma = 1.0;
  bool converged = true;
  int iterations = 0;
};

/// exp(-gamma * (x1 - x2)^2); underflows quietly to 0.
double rbf_kernel(double x1, double x2, double gamma) noexcept;

/// Throws InvalidInput on empty or mismatched input, or non-finite values.
SvrModel svr_train(std::span<const double> xs, std::span<const double> ys, const SvrConfig& cfg);

double svr_predict(const SvrModel& m, double x);

}  // namespace fovr
