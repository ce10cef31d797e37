#pragma once
// Data-parallel inner loops used by the QoE, catalog and SVR code.
//
// Every kernel has a scalar reference implementation and, on x86-64, an
// AVX2/FMA variant. The variant is picked once at startup from CPUID and can
// be overridden with set_backend() (tests use this to check equivalence).

#include <span>
#include <string_view>

namespace fovr::simd {

enum class Backend { scalar, avx2 };

std::string_view backend_name(Backend b) noexcept;

/// True when the backend was compiled in and the CPU supports it.
bool backend_supported(Backend b) noexcept;

Backend active_backend() noexcept;

/// Throws fovr::InvalidInput if the backend is not supported.
void set_backend(Backend b);

/// Restores the CPUID-selected default.
void reset_backend() noexcept;

double sum(std::span<const double> x);
double dot(std::span<const double> a, std::span<const double> b);

// out[i] = 1 - exp(-rate[i] * x[i])
void saturating_exp(std::span<const double> x, std::span<const double> rate,
                    std::span<double> out);

// out[i] = exp(-gamma * (centers[i] - x)^2)
void rbf_row(std::span<const double> centers, double x, double gamma,
             std::span<double> out);

// Direct access to each variant, for equivalence tests and benchmarks.
namespace scalar {
double sum(std::span<const double> x);
double dot(std::span<const double> a, std::span<const double> b);
void saturating_exp(std::span<const double> x, std::span<const double> rate,
                    std::span<double> out);
void rbf_row(std::span<const double> centers, double x, double gamma,
             std::span<double> out);
}  // namespace scalar

namespace avx2 {
double sum(std::span<const double> x);
double dot(std::span<const double> a, std::span<const double> b);
void saturating_exp(std::span<const double> x, std::span<const double> rate,
                    std::span<double> out);
void rbf_row(std::span<const double> centers, double x, double gamma,
             std::span<double> out);
}  // namespace avx2

}  // namespace fovr::simd
