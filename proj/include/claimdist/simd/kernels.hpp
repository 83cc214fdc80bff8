#pragma once

// Data-parallel inner loops used by the embedding and transport code.
//
// Every kernel has a portable scalar reference in `simd::scalar` and, on x86,
// an AVX2/FMA variant in `simd::avx2`. The unqualified entry points dispatch
// to the best variant supported by the running CPU; the choice can be pinned
// with set_isa() or the CLAIMDIST_ISA environment variable (scalar|avx2).
//
// Float inputs are widened to double before multiplication, so products are
// exact and only the summation order differs between variants. Min/clamp
// kernels are exact and produce bit-identical output on every variant.

#include <cstddef>
#include <span>
#include <string_view>

namespace claimdist::simd {

enum class Isa { kScalar, kAvx2 };

std::string_view isa_name(Isa isa) noexcept;
bool isa_supported(Isa isa) noexcept;

/// Variant the dispatching entry points currently use.
Isa active_isa() noexcept;

/// Pins dispatch to `isa`. Throws ConfigError if the CPU lacks it.
void set_isa(Isa isa);

/// Restores CPU-based detection (honouring CLAIMDIST_ISA).
void reset_isa();

double dot(std::span<const float> a, std::span<const float> b);

/// out[j] = 1 - max(0, sims[j]); the word-level ground cost.
void similarity_to_cost(std::span<const double> sims, std::span<double> out);

/// best[j] = min(best[j], values[j]).
void min_into(std::span<const double> values, std::span<double> best);

/// Smallest element; +inf for an empty span.
double min_value(std::span<const double> values);

namespace scalar {
double dot(const float* a, const float* b, std::size_t n) noexcept;
void similarity_to_cost(const double* sims, double* out, std::size_t n) noexcept;
void min_into(const double* values, double* best, std::size_t n) noexcept;
double min_value(const double* values, std::size_t n) noexcept;
}  // namespace scalar

#if defined(CLAIMDIST_HAVE_AVX2)
namespace avx2 {
double dot(const float* a, const float* b, std::size_t n) noexcept;
void similarity_to_cost(const double* sims, double* out, std::size_t n) noexcept;
void min_into(const double* values, double* best, std::size_t n) noexcept;
double min_value(const double* values, std::size_t n) noexcept;
}  // namespace avx2
#endif

}  // namespace claimdist::simd
