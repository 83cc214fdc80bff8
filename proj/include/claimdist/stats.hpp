#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace claimdist {

struct GroupSummary {
  std::size_t n = 0;
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
};

enum class TestMethod {
  kExact,
  kChiSquareApprox,
  kNormalApproxTieCorrected,
};

std::string_view to_string(TestMethod m) noexcept;

struct HypothesisTestResult {
  double statistic = 0.0;
  double p_value = 1.0;
  TestMethod method = TestMethod::kExact;
  std::vector<std::string> groups;
};

/// Largest group size for which the rank-sum test uses the exact null
/// distribution (both samples must be within it and tie-free).
inline constexpr std::size_t kExactRankSumLimit = 50;

/// Sample quantile by linear interpolation between order statistics at
/// h = (n - 1) p (the "type 7" rule). `sorted` must be ascending, nonempty.
double quantile_linear(std::span<const double> sorted, double p);

/// Median and quartiles. Throws std::invalid_argument on empty input.
GroupSummary median_iqr(std::span<const double> values);

/// Midranks (1-based) of `values` in their original order; `tie_term`
/// receives sum over tie groups of t^3 - t.
std::vector<double> midranks(std::span<const double> values, double* tie_term = nullptr);

/// Upper tail of the chi-square distribution, Q(df/2, x/2).
double chi_square_sf(double x, int df);

/// Kruskal-Wallis H with tie correction; p from chi-square with k - 1 df.
/// All-equal input gives H = 0, p = 1. Throws on fewer than two groups or an
/// empty group.
HypothesisTestResult kruskal_wallis(const std::vector<std::vector<double>>& groups,
                                    std::vector<std::string> labels = {});

/// Two-sided Wilcoxon rank-sum (Mann-Whitney) test. Statistic is
/// W = R_x - n(n+1)/2. Exact null distribution when both samples have at most
/// kExactRankSumLimit values and no ties; otherwise the normal approximation
/// with tie-corrected variance and continuity correction.
HypothesisTestResult wilcoxon_rank_sum_exact(std::span<const double> x, std::span<const double> y);

/// Number of ways each W = 0..n*m arises among the C(n+m, n) rank splits.
std::vector<double> rank_sum_counts(std::size_t n, std::size_t m);

/// "**" for p <= 0.01, "*" for 0.01 < p <= 0.05, "" otherwise.
std::string_view significance_stars(double p) noexcept;

}  // namespace claimdist
