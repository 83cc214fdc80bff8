#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "claimdist/embeddings.hpp"
#include "claimdist/matrix.hpp"
#include "claimdist/textprep.hpp"

namespace claimdist {

enum class Variant {
  kOneSidedQuery,      ///< l(a -> b): every query word moves to its cheapest candidate word
  kOneSidedCandidate,  ///< l(b -> a)
  kSymmetricMax,       ///< max of both one-sided costs
  kExact,              ///< full transport problem
};

std::string_view to_string(Variant v) noexcept;
/// Accepts the names printed by to_string(). Throws ConfigError otherwise.
Variant parse_variant(std::string_view name);

/// Word-pair transport costs, c = 1 - max(0, cos), all in [0, 1].
struct GroundCost {
  Matrix cost;

  std::size_t rows() const noexcept { return cost.rows(); }
  std::size_t cols() const noexcept { return cost.cols(); }
  double operator()(std::size_t i, std::size_t j) const noexcept { return cost(i, j); }
};

struct TransportPlan {
  Matrix flow;
};

struct DistanceResult {
  double distance = 0.0;
  double similarity = 1.0;
  Variant variant = Variant::kSymmetricMax;

  /// Clamps `distance` into [0, 1] and sets similarity = 1 - distance.
  static DistanceResult make(double distance, Variant variant);
};

enum class Direction {
  kSourceRows,     ///< source words index the cost rows
  kSourceColumns,  ///< source words index the cost columns
};

GroundCost ground_cost(const Matrix& similarities);

/// Ground cost between the words of two documents.
GroundCost ground_cost(const NBow& a, const NBow& b, const EmbeddingTable& table);

/// Sum over source words of weight times the cheapest cost to any word on
/// the other side. Throws std::invalid_argument on a dimension mismatch.
double relaxed_one_sided(const NBow& source, const GroundCost& cost, Direction direction);
double relaxed_one_sided(std::span<const double> source_weights, const GroundCost& cost, Direction direction);

/// Relaxed word mover's distance; variant must be one of the relaxed ones.
DistanceResult rwmd_distance(const NBow& a, const NBow& b, const EmbeddingTable& table,
                             Variant variant = Variant::kSymmetricMax);

double rwmd_similarity(const NBow& a, const NBow& b, const EmbeddingTable& table,
                       Variant variant = Variant::kSymmetricMax);

inline constexpr std::size_t kDefaultOracleLimit = 64;

struct TransportSolution {
  double cost = 0.0;
  TransportPlan plan;
  std::size_t pivots = 0;
};

/// Minimum-cost transport between `supply` and `demand` (each summing to the
/// same total) using the transportation simplex on the bipartite tree basis.
TransportSolution solve_transport(std::span<const double> supply, std::span<const double> demand,
                                  const GroundCost& cost);

/// Exact word mover's distance. Refuses (ConfigError) when either document
/// has more than `oracle_limit` unique words: this is a verification oracle.
std::pair<DistanceResult, TransportPlan> wmd_exact(const NBow& a, const NBow& b, const EmbeddingTable& table,
                                                   std::size_t oracle_limit = kDefaultOracleLimit);

/// One entry per candidate: a result, or the reason it could not be scored.
struct BatchEntry {
  std::optional<DistanceResult> result;
  std::string error;

  bool ok() const noexcept { return result.has_value(); }
};

/// RWMD of one query against many candidates. Costs between every query word
/// and the union vocabulary of the candidates are computed once; each
/// candidate is then reduced with min-scans over its own words. An empty
/// candidate NBow yields an error entry. Throws EmptyDocument for an empty
/// query, std::invalid_argument for Variant::kExact.
std::vector<BatchEntry> lc_rwmd_batch(const NBow& query, std::span<const NBow> candidates,
                                      const EmbeddingTable& table, Variant variant = Variant::kSymmetricMax);

struct Candidate {
  std::string id;
  NBow bow;  ///< may be empty when the document could not be represented
  std::string skip_reason;
};

struct RankedDoc {
  std::string id;
  double similarity = 0.0;
  double distance = 0.0;
};

struct SkippedDoc {
  std::string id;
  std::string reason;
};

struct Ranking {
  std::vector<RankedDoc> ranked;
  std::vector<SkippedDoc> skipped;
};

/// Orders ids ascending: all-digit ids first, numerically, then the rest
/// lexicographically.
bool id_less(std::string_view a, std::string_view b);

/// Scores every candidate with lc_rwmd_batch and sorts by similarity
/// descending, ties by ascending id.
Ranking rank_against_query(const NBow& query, std::span<const Candidate> candidates, const EmbeddingTable& table,
                           Variant variant = Variant::kSymmetricMax);

}  // namespace claimdist
