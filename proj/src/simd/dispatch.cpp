#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "claimdist/error.hpp"
#include "claimdist/simd/kernels.hpp"

namespace claimdist::simd {

namespace {

bool cpu_has_avx2() noexcept {
#if defined(CLAIMDIST_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa detect() noexcept {
  if (const char* forced = std::getenv("CLAIMDIST_ISA")) {
    std::string_view name(forced);
    if (name == "scalar") return Isa::kScalar;
    if (name == "avx2" && cpu_has_avx2()) return Isa::kAvx2;
  }
  return cpu_has_avx2() ? Isa::kAvx2 : Isa::kScalar;
}

std::atomic<Isa>& current() noexcept {
  static std::atomic<Isa> isa{detect()};
  return isa;
}

void check_sizes(std::size_t a, std::size_t b, const char* what) {
  if (a != b) throw std::invalid_argument(std::string(what) + ": length mismatch");
}

}  // namespace

std::string_view isa_name(Isa isa) noexcept {
  switch (isa) {
    case Isa::kScalar: return "scalar";
    case Isa::kAvx2: return "avx2";
  }
  return "unknown";
}

bool isa_supported(Isa isa) noexcept {
  return isa == Isa::kScalar || (isa == Isa::kAvx2 && cpu_has_avx2());
}

Isa active_isa() noexcept { return current().load(std::memory_order_relaxed); }

void set_isa(Isa isa) {
  if (!isa_supported(isa)) {
    throw ConfigError("instruction set not supported on this CPU: " + std::string(isa_name(isa)));
  }
  current().store(isa, std::memory_order_relaxed);
}

void reset_isa() { current().store(detect(), std::memory_order_relaxed); }

double dot(std::span<const float> a, std::span<const float> b) {
  check_sizes(a.size(), b.size(), "dot");
#if defined(CLAIMDIST_HAVE_AVX2)
  if (active_isa() == Isa::kAvx2) return avx2::dot(a.data(), b.data(), a.size());
#endif
  return scalar::dot(a.data(), b.data(), a.size());
}

void similarity_to_cost(std::span<const double> sims, std::span<double> out) {
  check_sizes(sims.size(), out.size(), "similarity_to_cost");
#if defined(CLAIMDIST_HAVE_AVX2)
  if (active_isa() == Isa::kAvx2) return avx2::similarity_to_cost(sims.data(), out.data(), sims.size());
#endif
  scalar::similarity_to_cost(sims.data(), out.data(), sims.size());
}

void min_into(std::span<const double> values, std::span<double> best) {
  check_sizes(values.size(), best.size(), "min_into");
#if defined(CLAIMDIST_HAVE_AVX2)
  if (active_isa() == Isa::kAvx2) return avx2::min_into(values.data(), best.data(), values.size());
#endif
  scalar::min_into(values.data(), best.data(), values.size());
}

double min_value(std::span<const double> values) {
#if defined(CLAIMDIST_HAVE_AVX2)
  if (active_isa() == Isa::kAvx2) return avx2::min_value(values.data(), values.size());
#endif
  return scalar::min_value(values.data(), values.size());
}

}  // namespace claimdist::simd
