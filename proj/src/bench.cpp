#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>

#include "claimdist/error.hpp"
#include "claimdist/pipeline.hpp"

namespace claimdist {

namespace {

struct PairFixture {
  EmbeddingTable table;
  NBow a;
  NBow b;
};

PairFixture random_pair(std::size_t size, std::size_t dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> weight(0.05, 1.0);
  std::vector<std::pair<std::string, std::vector<float>>> rows;
  for (std::size_t k = 0; k < 2 * size; ++k) {
    std::vector<double> v(dim);
    double norm = 0.0;
    do {
      norm = 0.0;
      for (auto& x : v) {
        x = normal(rng);
        norm += x * x;
      }
    } while (norm == 0.0);
    norm = std::sqrt(norm);
    std::vector<float> f(dim);
    for (std::size_t d = 0; d < dim; ++d) f[d] = static_cast<float>(v[d] / norm);
    rows.emplace_back((k < size ? "a" : "b") + std::to_string(k), std::move(f));
  }
  EmbeddingTable table = EmbeddingTable::from_rows(rows);
  std::vector<std::string> wa;
  std::vector<std::string> wb;
  std::vector<double> xa;
  std::vector<double> xb;
  for (std::size_t k = 0; k < size; ++k) {
    wa.push_back(rows[k].first);
    xa.push_back(weight(rng));
    wb.push_back(rows[size + k].first);
    xb.push_back(weight(rng));
  }
  NBow a = NBow::from_weights(table, wa, xa);
  NBow b = NBow::from_weights(table, wb, xb);
  return {std::move(table), std::move(a), std::move(b)};
}

// Mean seconds per call, repeating until `min_seconds` of wall time passes.
template <typename Fn>
double time_call(Fn&& fn, double min_seconds) {
  using clock = std::chrono::steady_clock;
  std::size_t reps = 0;
  auto start = clock::now();
  double elapsed = 0.0;
  do {
    fn();
    ++reps;
    elapsed = std::chrono::duration<double>(clock::now() - start).count();
  } while (elapsed < min_seconds);
  return elapsed / static_cast<double>(reps);
}

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

double log_log_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) return std::nan("");
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(y.size());
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxx == 0.0 ? std::nan("") : sxy / sxx;
}

BenchResult bench_scaling(std::span<const std::size_t> sizes, std::size_t pairs_per_size, std::uint64_t seed,
                          const BenchOptions& options) {
  if (sizes.empty()) throw ConfigError("bench: no sizes given");
  if (pairs_per_size < 3) throw ConfigError("bench: at least 3 pairs per size are required");
  for (std::size_t s : sizes) {
    if (s < 1 || s > kDefaultOracleLimit) {
      throw ConfigError("bench: size " + std::to_string(s) + " outside [1, " + std::to_string(kDefaultOracleLimit) +
                        "] supported by the exact solver");
    }
  }

  BenchResult result;
  result.dimension = options.dimension;
  std::mt19937_64 rng(seed);
  volatile double sink = 0.0;
  for (std::size_t size : sizes) {
    std::vector<double> wmd_times;
    std::vector<double> rwmd_times;
    for (std::size_t p = 0; p < pairs_per_size; ++p) {
      PairFixture fx = random_pair(size, options.dimension, rng);
      std::span<const NBow> one(&fx.b, 1);
      wmd_times.push_back(time_call([&] { sink = sink + wmd_exact(fx.a, fx.b, fx.table).first.distance; },
                                    options.min_seconds_per_pair));
      rwmd_times.push_back(time_call(
          [&] { sink = sink + lc_rwmd_batch(fx.a, one, fx.table)[0].result->distance; }, options.min_seconds_per_pair));
    }
    result.rows.push_back({size, median_of(wmd_times), median_of(rwmd_times)});
  }

  std::vector<double> xs;
  std::vector<double> wmd;
  std::vector<double> rwmd;
  for (const auto& r : result.rows) {
    xs.push_back(static_cast<double>(r.size));
    wmd.push_back(r.median_wmd_seconds);
    rwmd.push_back(r.median_rwmd_seconds);
  }
  result.wmd_slope = log_log_slope(xs, wmd);
  result.rwmd_slope = log_log_slope(xs, rwmd);
  return result;
}

std::string bench_to_csv(const BenchResult& result) {
  std::string out = "size,median_wmd_seconds,median_rwmd_seconds\n";
  char buf[128];
  for (const auto& r : result.rows) {
    std::snprintf(buf, sizeof buf, "%zu,%.9f,%.9f\n", r.size, r.median_wmd_seconds, r.median_rwmd_seconds);
    out += buf;
  }
  std::snprintf(buf, sizeof buf, "slope,%.6f,%.6f\n", result.wmd_slope, result.rwmd_slope);
  out += buf;
  return out;
}

}  // namespace claimdist
