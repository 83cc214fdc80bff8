#include <doctest.h>

#include <bit>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "claimdist/error.hpp"
#include "claimdist/simd/kernels.hpp"

namespace simd = claimdist::simd;

namespace {

std::vector<float> random_floats(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<float> u(-1.0f, 1.0f);
  std::vector<float> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

std::vector<double> random_doubles(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::bit_cast<std::uint64_t>(a[i]) != std::bit_cast<std::uint64_t>(b[i])) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("scalar kernels on small inputs") {
  std::vector<float> a = {1, 2, 3};
  std::vector<float> b = {4, -5, 6};
  CHECK(simd::scalar::dot(a.data(), b.data(), 3) == 12.0);
  CHECK(simd::scalar::dot(a.data(), b.data(), 0) == 0.0);

  std::vector<double> sims = {1.0, 0.0, -0.3, 0.25};
  std::vector<double> cost(4);
  simd::scalar::similarity_to_cost(sims.data(), cost.data(), 4);
  CHECK(cost == std::vector<double>{0.0, 1.0, 1.0, 0.75});

  std::vector<double> best = {0.5, 0.5, 0.5};
  std::vector<double> vals = {0.7, 0.2, 0.5};
  simd::scalar::min_into(vals.data(), best.data(), 3);
  CHECK(best == std::vector<double>{0.5, 0.2, 0.5});

  CHECK(simd::scalar::min_value(vals.data(), 3) == 0.2);
  CHECK(std::isinf(simd::scalar::min_value(vals.data(), 0)));
}

TEST_CASE("dispatch honours set_isa and reset_isa") {
  simd::set_isa(simd::Isa::kScalar);
  CHECK(simd::active_isa() == simd::Isa::kScalar);
  std::vector<float> a = {1, 1};
  CHECK(simd::dot(a, a) == 2.0);
  simd::reset_isa();
  if (!simd::isa_supported(simd::Isa::kAvx2)) {
    CHECK_THROWS_AS(simd::set_isa(simd::Isa::kAvx2), claimdist::ConfigError);
  }
  CHECK(simd::isa_name(simd::Isa::kScalar) == "scalar");
  CHECK(simd::isa_name(simd::Isa::kAvx2) == "avx2");
}

#if defined(CLAIMDIST_HAVE_AVX2)
TEST_CASE("avx2 kernels match the scalar reference") {
  if (!simd::isa_supported(simd::Isa::kAvx2)) {
    MESSAGE("CPU lacks AVX2/FMA; equivalence not exercised");
    return;
  }
  std::mt19937_64 rng(7);
  for (std::size_t n = 0; n <= 133; ++n) {
    CAPTURE(n);
    auto a = random_floats(rng, n);
    auto b = random_floats(rng, n);
    double ref = simd::scalar::dot(a.data(), b.data(), n);
    double fast = simd::avx2::dot(a.data(), b.data(), n);
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) scale += std::fabs(static_cast<double>(a[i]) * b[i]);
    CHECK(std::fabs(ref - fast) <= 1e-14 * (scale + 1.0));

    auto sims = random_doubles(rng, n, -1.0, 1.0);
    if (n > 2) {
      sims[0] = -0.0;
      sims[1] = 0.0;
      sims[2] = 1.0;
    }
    std::vector<double> c1(n), c2(n);
    simd::scalar::similarity_to_cost(sims.data(), c1.data(), n);
    simd::avx2::similarity_to_cost(sims.data(), c2.data(), n);
    CHECK(same_bits(c1, c2));

    auto vals = random_doubles(rng, n, 0.0, 1.0);
    auto best1 = random_doubles(rng, n, 0.0, 1.0);
    auto best2 = best1;
    simd::scalar::min_into(vals.data(), best1.data(), n);
    simd::avx2::min_into(vals.data(), best2.data(), n);
    CHECK(same_bits(best1, best2));

    double m1 = simd::scalar::min_value(vals.data(), n);
    double m2 = simd::avx2::min_value(vals.data(), n);
    CHECK(std::bit_cast<std::uint64_t>(m1) == std::bit_cast<std::uint64_t>(m2));
  }
}

TEST_CASE("dispatched dot agrees across pinned variants") {
  if (!simd::isa_supported(simd::Isa::kAvx2)) return;
  std::mt19937_64 rng(11);
  auto a = random_floats(rng, 300);
  auto b = random_floats(rng, 300);
  simd::set_isa(simd::Isa::kScalar);
  double s = simd::dot(a, b);
  simd::set_isa(simd::Isa::kAvx2);
  double v = simd::dot(a, b);
  simd::reset_isa();
  CHECK(v == doctest::Approx(s).epsilon(1e-12));
}
#endif
