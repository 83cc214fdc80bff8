#include "claimdist/simd/kernels.hpp"

#include <algorithm>
#include <limits>

namespace claimdist::simd::scalar {

double dot(const float* a, const float* b, std::size_t n) noexcept {
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sum += static_cast<double>(a[i]) * static_cast<double>(b[i]);
  }
  return sum;
}

void similarity_to_cost(const double* sims, double* out, std::size_t n) noexcept {
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = 1.0 - std::max(0.0, sims[i]);
  }
}

void min_into(const double* values, double* best, std::size_t n) noexcept {
  for (std::size_t i = 0; i < n; ++i) {
    if (values[i] < best[i]) best[i] = values[i];
  }
}

double min_value(const double* values, std::size_t n) noexcept {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    if (values[i] < best) best = values[i];
  }
  return best;
}

}  // namespace claimdist::simd::scalar
