#include "claimdist/stats.hpp"

#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace claimdist {

std::string_view to_string(TestMethod m) noexcept {
  switch (m) {
    case TestMethod::kExact: return "exact";
    case TestMethod::kChiSquareApprox: return "chi-square-approx";
    case TestMethod::kNormalApproxTieCorrected: return "normal-approx-tie-corrected";
  }
  return "unknown";
}

double quantile_linear(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw std::invalid_argument("quantile of an empty sample");
  double h = static_cast<double>(sorted.size() - 1) * p;
  auto lo = static_cast<std::size_t>(std::floor(h));
  double frac = h - static_cast<double>(lo);
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

GroupSummary median_iqr(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("median_iqr: empty sample");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  return {sorted.size(), quantile_linear(sorted, 0.5), quantile_linear(sorted, 0.25), quantile_linear(sorted, 0.75)};
}

std::vector<double> midranks(std::span<const double> values, double* tie_term) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  double ties = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j < order.size() && values[order[j]] == values[order[i]]) ++j;
    double rank = static_cast<double>(i + j + 1) / 2.0;
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = rank;
    double t = static_cast<double>(j - i);
    ties += t * t * t - t;
    i = j;
  }
  if (tie_term) *tie_term = ties;
  return ranks;
}

double chi_square_sf(double x, int df) {
  if (df < 1) throw std::invalid_argument("chi_square_sf: df must be positive");
  if (!(x >= 0.0)) throw std::invalid_argument("chi_square_sf: x must be nonnegative");
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  return boost::math::gamma_q(0.5 * df, 0.5 * x);
}

HypothesisTestResult kruskal_wallis(const std::vector<std::vector<double>>& groups, std::vector<std::string> labels) {
  if (groups.size() < 2) throw std::invalid_argument("kruskal_wallis: need at least two groups");
  std::vector<double> pooled;
  for (const auto& g : groups) {
    if (g.empty()) throw std::invalid_argument("kruskal_wallis: empty group");
    pooled.insert(pooled.end(), g.begin(), g.end());
  }
  double ties = 0.0;
  auto ranks = midranks(pooled, &ties);
  const double n = static_cast<double>(pooled.size());

  HypothesisTestResult result;
  result.method = TestMethod::kChiSquareApprox;
  result.groups = std::move(labels);

  double correction = 1.0 - ties / (n * n * n - n);
  if (correction <= 0.0) {
    result.statistic = 0.0;
    result.p_value = 1.0;
    return result;
  }
  double sum = 0.0;
  std::size_t offset = 0;
  for (const auto& g : groups) {
    double r = std::accumulate(ranks.begin() + static_cast<std::ptrdiff_t>(offset),
                               ranks.begin() + static_cast<std::ptrdiff_t>(offset + g.size()), 0.0);
    sum += r * r / static_cast<double>(g.size());
    offset += g.size();
  }
  double h = (12.0 / (n * (n + 1.0)) * sum - 3.0 * (n + 1.0)) / correction;
  result.statistic = std::max(0.0, h);
  result.p_value = chi_square_sf(result.statistic, static_cast<int>(groups.size()) - 1);
  return result;
}

// counts_{n,m}(w) = counts_{n-1,m}(w - m) + counts_{n,m-1}(w): the largest of
// the n + m observations either belongs to x (beating all m values of y) or
// to y. Additions only, so small tail counts keep full relative precision.
std::vector<double> rank_sum_counts(std::size_t n, std::size_t m) {
  // prev[j] / cur[j] hold the distribution for (level, j) with j = 0..m.
  std::vector<std::vector<double>> prev(m + 1, std::vector<double>{1.0});
  for (std::size_t level = 1; level <= n; ++level) {
    std::vector<std::vector<double>> cur(m + 1);
    cur[0] = {1.0};
    for (std::size_t j = 1; j <= m; ++j) {
      std::vector<double> dist(level * j + 1, 0.0);
      const auto& take_x = prev[j];
      for (std::size_t w = 0; w < take_x.size(); ++w) dist[w + j] += take_x[w];
      const auto& take_y = cur[j - 1];
      for (std::size_t w = 0; w < take_y.size(); ++w) dist[w] += take_y[w];
      cur[j] = std::move(dist);
    }
    prev = std::move(cur);
  }
  return prev[m];
}

HypothesisTestResult wilcoxon_rank_sum_exact(std::span<const double> x, std::span<const double> y) {
  if (x.empty() || y.empty()) throw std::invalid_argument("wilcoxon_rank_sum_exact: empty sample");
  std::vector<double> pooled(x.begin(), x.end());
  pooled.insert(pooled.end(), y.begin(), y.end());
  double ties = 0.0;
  auto ranks = midranks(pooled, &ties);
  const double n = static_cast<double>(x.size());
  const double m = static_cast<double>(y.size());
  double rank_sum_x = std::accumulate(ranks.begin(), ranks.begin() + static_cast<std::ptrdiff_t>(x.size()), 0.0);
  double w = rank_sum_x - n * (n + 1.0) / 2.0;

  HypothesisTestResult result;
  result.statistic = w;

  if (ties == 0.0 && x.size() <= kExactRankSumLimit && y.size() <= kExactRankSumLimit) {
    auto counts = rank_sum_counts(x.size(), y.size());
    auto u = static_cast<std::size_t>(std::llround(w));
    double total = std::accumulate(counts.begin(), counts.end(), 0.0);
    double lower = std::accumulate(counts.begin(), counts.begin() + static_cast<std::ptrdiff_t>(u + 1), 0.0);
    double upper = std::accumulate(counts.begin() + static_cast<std::ptrdiff_t>(u), counts.end(), 0.0);
    result.p_value = std::min(1.0, 2.0 * std::min(lower, upper) / total);
    result.method = TestMethod::kExact;
    return result;
  }

  result.method = TestMethod::kNormalApproxTieCorrected;
  const double total = n + m;
  double variance = n * m / 12.0 * ((total + 1.0) - ties / (total * (total - 1.0)));
  double z = w - n * m / 2.0;
  if (variance <= 0.0) {
    result.p_value = 1.0;
    return result;
  }
  double correction = z > 0.0 ? 0.5 : (z < 0.0 ? -0.5 : 0.0);
  z = (z - correction) / std::sqrt(variance);
  result.p_value = std::min(1.0, std::erfc(std::abs(z) / std::sqrt(2.0)));
  return result;
}

std::string_view significance_stars(double p) noexcept {
  if (p <= 0.01) return "**";
  if (p <= 0.05) return "*";
  return "";
}

}  // namespace claimdist
