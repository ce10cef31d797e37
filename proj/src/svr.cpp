#include "fovr/svr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fovr/error.hpp"
#include "fovr/simd/kernels.hpp"

namespace fovr {
namespace {

constexpr double kTau = 1e-12;
constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

void SvrConfig::validate() const {
  if (!(c > 0.0) || !std::isfinite(c)) throw InvalidInput("SVR C must be > 0");
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) throw InvalidInput("SVR epsilon must be >= 0");
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw InvalidInput("SVR gamma must be > 0");
  if (!(tol > 0.0)) throw InvalidInput("SVR tolerance must be > 0");
  if (max_iter <= 0) throw InvalidInput("SVR max_iter must be > 0");
}

double rbf_kernel(double x1, double x2, double gamma) noexcept {
  const double d = x1 - x2;
  return std::exp(-gamma * d * d);
}

SvrModel svr_train(std::span<const double> xs, std::span<const double> ys, const SvrConfig& cfg) {
  cfg.validate();
  if (xs.empty() || xs.size() != ys.size()) throw InvalidInput("SVR needs equal, non-empty xs and ys");
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!std::isfinite(xs[i]) || !std::isfinite(ys[i])) throw InvalidInput("SVR input is not finite");
  }

  const std::size_t n = xs.size();
  const std::size_t l = 2 * n;
  const double c = cfg.c;

  std::vector<double> kernel(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    simd::rbf_row(xs, xs[i], cfg.gamma, std::span<double>(kernel).subspan(i * n, n));
  }
  const auto k = [&](std::size_t a, std::size_t b) { return kernel[(a % n) * n + (b % n)]; };

  // Variables 0..n-1 are a_i (sign +1), n..2n-1 are a*_i (sign -1).
  std::vector<double> alpha(l, 0.0);
  std::vector<double> grad(l);
  std::vector<int> sign(l);
  for (std::size_t i = 0; i < n; ++i) {
    sign[i] = 1;
    sign[i + n] = -1;
    grad[i] = cfg.epsilon - ys[i];
    grad[i + n] = cfg.epsilon + ys[i];
  }
  const auto upper = [&](std::size_t t) { return alpha[t] >= c; };
  const auto lower = [&](std::size_t t) { return alpha[t] <= 0.0; };

  SvrModel model;
  model.gamma = cfg.gamma;
  model.converged = false;

  int iter = 0;
  for (; iter < cfg.max_iter; ++iter) {
    // Maximal violating index i, then j by second-order gain.
    double gmax = -kInf;
    std::ptrdiff_t i = -1;
    for (std::size_t t = 0; t < l; ++t) {
      if (sign[t] == 1) {
        if (!upper(t) && -grad[t] >= gmax) {
          gmax = -grad[t];
          i = static_cast<std::ptrdiff_t>(t);
        }
      } else if (!lower(t) && grad[t] >= gmax) {
        gmax = grad[t];
        i = static_cast<std::ptrdiff_t>(t);
      }
    }

    double gmax2 = -kInf;
    std::ptrdiff_t j = -1;
    double best = kInf;
    for (std::size_t t = 0; t < l; ++t) {
      double grad_diff = 0.0;
      if (sign[t] == 1) {
        if (lower(t)) continue;
        gmax2 = std::max(gmax2, grad[t]);
        grad_diff = gmax + grad[t];
      } else {
        if (upper(t)) continue;
        gmax2 = std::max(gmax2, -grad[t]);
        grad_diff = gmax - grad[t];
      }
      if (i < 0 || grad_diff <= 0.0) continue;
      const auto ii = static_cast<std::size_t>(i);
      double quad = k(ii, ii) + k(t, t) - 2.0 * k(ii, t);
      if (quad <= 0.0) quad = kTau;
      const double obj = -(grad_diff * grad_diff) / quad;
      if (obj <= best) {
        best = obj;
        j = static_cast<std::ptrdiff_t>(t);
      }
    }

    if (gmax + gmax2 < cfg.tol || i < 0 || j < 0) {
      model.converged = true;
      break;
    }

    const auto a = static_cast<std::size_t>(i);
    const auto b = static_cast<std::size_t>(j);
    const double qab = sign[a] * sign[b] * k(a, b);
    const double old_a = alpha[a];
    const double old_b = alpha[b];

    if (sign[a] != sign[b]) {
      double quad = k(a, a) + k(b, b) + 2.0 * qab;
      if (quad <= 0.0) quad = kTau;
      const double delta = (-grad[a] - grad[b]) / quad;
      const double diff = alpha[a] - alpha[b];
      alpha[a] += delta;
      alpha[b] += delta;
      if (diff > 0.0) {
        if (alpha[b] < 0.0) {
          alpha[b] = 0.0;
          alpha[a] = diff;
        }
      } else if (alpha[a] < 0.0) {
        alpha[a] = 0.0;
        alpha[b] = -diff;
      }
      if (diff > 0.0) {
        if (alpha[a] > c) {
          alpha[a] = c;
          alpha[b] = c - diff;
        }
      } else if (alpha[b] > c) {
        alpha[b] = c;
        alpha[a] = c + diff;
      }
    } else {
      double quad = k(a, a) + k(b, b) - 2.0 * qab;
      if (quad <= 0.0) quad = kTau;
      const double delta = (grad[a] - grad[b]) / quad;
      const double total = alpha[a] + alpha[b];
      alpha[a] -= delta;
      alpha[b] += delta;
      if (total > c) {
        if (alpha[a] > c) {
          alpha[a] = c;
          alpha[b] = total - c;
        }
      } else if (alpha[b] < 0.0) {
        alpha[b] = 0.0;
        alpha[a] = total;
      }
      if (total > c) {
        if (alpha[b] > c) {
          alpha[b] = c;
          alpha[a] = total - c;
        }
      } else if (alpha[a] < 0.0) {
        alpha[a] = 0.0;
        alpha[b] = total;
      }
    }

    const double da = alpha[a] - old_a;
    const double db = alpha[b] - old_b;
    for (std::size_t t = 0; t < l; ++t) {
      grad[t] += sign[t] * (sign[a] * k(a, t) * da + sign[b] * k(b, t) * db);
    }
  }
  model.iterations = iter;

  // Bias: mean over free variables, midpoint of the feasible interval otherwise.
  double ub = kInf;
  double lb = -kInf;
  double sum_free = 0.0;
  int n_free = 0;
  for (std::size_t t = 0; t < l; ++t) {
    const double yg = sign[t] * grad[t];
    if (upper(t)) {
      if (sign[t] == -1) ub = std::min(ub, yg);
      else lb = std::max(lb, yg);
    } else if (lower(t)) {
      if (sign[t] == 1) ub = std::min(ub, yg);
      else lb = std::max(lb, yg);
    } else {
      ++n_free;
      sum_free += yg;
    }
  }
  const double rho = n_free > 0 ? sum_free / n_free : (ub + lb) / 2.0;
  model.bias = -rho;

  for (std::size_t i = 0; i < n; ++i) {
    const double coeff = alpha[i] - alpha[i + n];
    if (coeff != 0.0) {
      model.support_inputs.push_back(xs[i]);
      model.dual_coeffs.push_back(coeff);
    }
  }
  return model;
}

double svr_predict(const SvrModel& m, double x) {
  if (m.support_inputs.empty()) return m.bias;
  std::vector<double> row(m.support_inputs.size());
  simd::rbf_row(m.support_inputs, x, m.gamma, row);
  return simd::dot(m.dual_coeffs, row) + m.bias;
}

}  // namespace fovr
