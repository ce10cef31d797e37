#include <atomic>
#include <string>

#include "fovr/error.hpp"
#include "fovr/simd/kernels.hpp"

namespace fovr::simd {
namespace {

struct KernelTable {
  Backend backend;
  double (*sum)(std::span<const double>);
  double (*dot)(std::span<const double>, std::span<const double>);
  void (*saturating_exp)(std::span<const double>, std::span<const double>, std::span<double>);
  void (*rbf_row)(std::span<const double>, double, double, std::span<double>);
};

constexpr KernelTable kScalar{Backend::scalar, scalar::sum, scalar::dot,
                              scalar::saturating_exp, scalar::rbf_row};
#if defined(FOVR_HAVE_AVX2)
constexpr KernelTable kAvx2{Backend::avx2, avx2::sum, avx2::dot, avx2::saturating_exp,
                            avx2::rbf_row};
#endif

bool cpu_has_avx2() noexcept {
#if defined(FOVR_HAVE_AVX2)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable* detect() noexcept {
#if defined(FOVR_HAVE_AVX2)
  if (cpu_has_avx2()) return &kAvx2;
#endif
  return &kScalar;
}

std::atomic<const KernelTable*>& current() {
  static std::atomic<const KernelTable*> table{detect()};
  return table;
}

const KernelTable& table() { return *current().load(std::memory_order_acquire); }

void require_same(std::size_t a, std::size_t b) {
  if (a != b) throw InvalidInput("simd kernel: operand lengths differ");
}

}  // namespace

std::string_view backend_name(Backend b) noexcept {
  return b == Backend::avx2 ? "avx2" : "scalar";
}

bool backend_supported(Backend b) noexcept {
  return b == Backend::scalar || cpu_has_avx2();
}

Backend active_backend() noexcept { return table().backend; }

void set_backend(Backend b) {
  if (!backend_supported(b)) {
    throw InvalidInput("simd backend not supported on this CPU/build: " +
                       std::string(backend_name(b)));
  }
#if defined(FOVR_HAVE_AVX2)
  current().store(b == Backend::avx2 ? &kAvx2 : &kScalar, std::memory_order_release);
#else
  current().store(&kScalar, std::memory_order_release);
#endif
}

void reset_backend() noexcept { current().store(detect(), std::memory_order_release); }

double sum(std::span<const double> x) { return table().sum(x); }

double dot(std::span<const double> a, std::span<const double> b) {
  require_same(a.size(), b.size());
  return table().dot(a, b);
}

void saturating_exp(std::span<const double> x, std::span<const double> rate,
                    std::span<double> out) {
  require_same(x.size(), rate.size());
  require_same(x.size(), out.size());
  table().saturating_exp(x, rate, out);
}

void rbf_row(std::span<const double> centers, double x, double gamma,
             std::span<double> out) {
  require_same(centers.size(), out.size());
  table().rbf_row(centers, x, gamma, out);
}

#if !defined(FOVR_HAVE_AVX2)
// Not compiled in: the named variants fall back to the reference code so the
// symbols exist. backend_supported(Backend::avx2) reports false.
namespace avx2 {
double sum(std::span<const double> x) { return scalar::sum(x); }
double dot(std::span<const double> a, std::span<const double> b) { return scalar::dot(a, b); }
void saturating_exp(std::span<const double> x, std::span<const double> rate,
                    std::span<double> out) {
  scalar::saturating_exp(x, rate, out);
}
void rbf_row(std::span<const double> centers, double x, double gamma,
             std::span<double> out) {
  scalar::rbf_row(centers, x, gamma, out);
}
}  // namespace avx2
#endif

}  // namespace fovr::simd
