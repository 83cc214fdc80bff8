#include "claimdist/transport.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <unordered_map>

#include "claimdist/error.hpp"
#include "claimdist/simd/kernels.hpp"

namespace claimdist {

namespace {

void require_nonempty(const NBow& bow, const char* which) {
  if (bow.empty()) throw EmptyDocument(std::string(which) + " document has no in-vocabulary words");
}

double combine(double forward, double backward, Variant variant) {
  switch (variant) {
    case Variant::kOneSidedQuery: return forward;
    case Variant::kOneSidedCandidate: return backward;
    case Variant::kSymmetricMax: return std::max(forward, backward);
    case Variant::kExact: break;
  }
  throw std::invalid_argument("relaxed distance requested with the exact variant");
}

double weighted_sum(std::span<const double> weights, std::span<const double> values) {
  double sum = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) sum += weights[i] * values[i];
  return sum;
}

std::vector<BatchEntry> batch_impl(const NBow& query, std::span<const NBow* const> candidates,
                                   const EmbeddingTable& table, Variant variant) {
  require_nonempty(query, "query");
  if (variant == Variant::kExact) throw std::invalid_argument("lc_rwmd_batch: exact variant is not relaxed");

  // Union vocabulary of all candidates, in first-appearance order.
  std::unordered_map<std::size_t, std::size_t> local;
  std::vector<std::size_t> vocab;
  for (const NBow* c : candidates) {
    for (std::size_t r : c->rows) {
      if (local.try_emplace(r, vocab.size()).second) vocab.push_back(r);
    }
  }

  // costs: one row per vocabulary word, one column per query word.
  const std::size_t nq = query.size();
  Matrix costs(vocab.size(), nq);
  std::vector<double> sims(nq);
  for (std::size_t v = 0; v < vocab.size(); ++v) {
    for (std::size_t i = 0; i < nq; ++i) sims[i] = table.cosine(query.rows[i], vocab[v]);
    simd::similarity_to_cost(sims, costs.row(v));
  }

  // Cheapest query word for every vocabulary word: the candidate -> query
  // direction then reduces to a sparse dot product per candidate.
  std::vector<double> nearest_query(vocab.size());
  for (std::size_t v = 0; v < vocab.size(); ++v) nearest_query[v] = simd::min_value(costs.row(v));

  std::vector<BatchEntry> out(candidates.size());
  std::vector<double> best(nq);
  std::vector<double> gathered;
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    const NBow& cand = *candidates[k];
    if (cand.empty()) {
      out[k].error = "candidate has no in-vocabulary words";
      continue;
    }
    std::fill(best.begin(), best.end(), std::numeric_limits<double>::infinity());
    gathered.resize(cand.size());
    for (std::size_t j = 0; j < cand.size(); ++j) {
      std::size_t v = local.at(cand.rows[j]);
      simd::min_into(costs.row(v), best);
      gathered[j] = nearest_query[v];
    }
    double forward = weighted_sum(query.weights, best);
    double backward = weighted_sum(cand.weights, gathered);
    out[k].result = DistanceResult::make(combine(forward, backward, variant), variant);
  }
  return out;
}

}  // namespace

std::string_view to_string(Variant v) noexcept {
  switch (v) {
    case Variant::kOneSidedQuery: return "one-sided-query";
    case Variant::kOneSidedCandidate: return "one-sided-candidate";
    case Variant::kSymmetricMax: return "symmetric-max";
    case Variant::kExact: return "exact";
  }
  return "unknown";
}

Variant parse_variant(std::string_view name) {
  for (Variant v : {Variant::kOneSidedQuery, Variant::kOneSidedCandidate, Variant::kSymmetricMax, Variant::kExact}) {
    if (to_string(v) == name) return v;
  }
  throw ConfigError("unknown RWMD variant: " + std::string(name));
}

DistanceResult DistanceResult::make(double distance, Variant variant) {
  DistanceResult r;
  r.distance = std::clamp(distance, 0.0, 1.0);
  r.similarity = 1.0 - r.distance;
  r.variant = variant;
  return r;
}

GroundCost ground_cost(const Matrix& similarities) {
  GroundCost gc{Matrix(similarities.rows(), similarities.cols())};
  for (std::size_t i = 0; i < similarities.rows(); ++i) {
    simd::similarity_to_cost(similarities.row(i), gc.cost.row(i));
  }
  return gc;
}

GroundCost ground_cost(const NBow& a, const NBow& b, const EmbeddingTable& table) {
  return ground_cost(similarity_matrix_rows(table, a.rows, b.rows));
}

double relaxed_one_sided(std::span<const double> source_weights, const GroundCost& cost, Direction direction) {
  if (direction == Direction::kSourceRows) {
    if (source_weights.size() != cost.rows() || cost.cols() == 0) {
      throw std::invalid_argument("relaxed_one_sided: cost rows do not match the source document");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < cost.rows(); ++i) sum += source_weights[i] * simd::min_value(cost.cost.row(i));
    return sum;
  }
  if (source_weights.size() != cost.cols() || cost.rows() == 0) {
    throw std::invalid_argument("relaxed_one_sided: cost columns do not match the source document");
  }
  std::vector<double> best(cost.cols(), std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < cost.rows(); ++i) simd::min_into(cost.cost.row(i), best);
  return weighted_sum(source_weights, best);
}

double relaxed_one_sided(const NBow& source, const GroundCost& cost, Direction direction) {
  return relaxed_one_sided(source.weights, cost, direction);
}

DistanceResult rwmd_distance(const NBow& a, const NBow& b, const EmbeddingTable& table, Variant variant) {
  require_nonempty(a, "first");
  require_nonempty(b, "second");
  GroundCost cost = ground_cost(a, b, table);
  double forward = relaxed_one_sided(a, cost, Direction::kSourceRows);
  double backward = relaxed_one_sided(b, cost, Direction::kSourceColumns);
  return DistanceResult::make(combine(forward, backward, variant), variant);
}

double rwmd_similarity(const NBow& a, const NBow& b, const EmbeddingTable& table, Variant variant) {
  return rwmd_distance(a, b, table, variant).similarity;
}

std::pair<DistanceResult, TransportPlan> wmd_exact(const NBow& a, const NBow& b, const EmbeddingTable& table,
                                                   std::size_t oracle_limit) {
  require_nonempty(a, "first");
  require_nonempty(b, "second");
  if (a.size() > oracle_limit || b.size() > oracle_limit) {
    throw ConfigError("exact WMD refused: " + std::to_string(a.size()) + "x" + std::to_string(b.size()) +
                      " unique words exceeds the oracle limit of " + std::to_string(oracle_limit));
  }
  TransportSolution sol = solve_transport(a.weights, b.weights, ground_cost(a, b, table));
  return {DistanceResult::make(sol.cost, Variant::kExact), std::move(sol.plan)};
}

std::vector<BatchEntry> lc_rwmd_batch(const NBow& query, std::span<const NBow> candidates,
                                      const EmbeddingTable& table, Variant variant) {
  std::vector<const NBow*> ptrs;
  ptrs.reserve(candidates.size());
  for (const auto& c : candidates) ptrs.push_back(&c);
  return batch_impl(query, ptrs, table, variant);
}

bool id_less(std::string_view a, std::string_view b) {
  auto digits = [](std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
  };
  bool da = digits(a);
  bool db = digits(b);
  if (da != db) return da;
  if (da) {
    auto strip = [](std::string_view s) {
      auto p = s.find_first_not_of('0');
      return p == std::string_view::npos ? std::string_view{} : s.substr(p);
    };
    auto sa = strip(a);
    auto sb = strip(b);
    if (sa.size() != sb.size()) return sa.size() < sb.size();
    if (sa != sb) return sa < sb;
  }
  return a < b;
}

Ranking rank_against_query(const NBow& query, std::span<const Candidate> candidates, const EmbeddingTable& table,
                           Variant variant) {
  std::vector<const NBow*> ptrs;
  ptrs.reserve(candidates.size());
  for (const auto& c : candidates) ptrs.push_back(&c.bow);
  auto entries = batch_impl(query, ptrs, table, variant);

  Ranking ranking;
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    if (entries[k].ok()) {
      ranking.ranked.push_back({candidates[k].id, entries[k].result->similarity, entries[k].result->distance});
    } else {
      const auto& reason = candidates[k].skip_reason.empty() ? entries[k].error : candidates[k].skip_reason;
      ranking.skipped.push_back({candidates[k].id, reason});
    }
  }
  std::sort(ranking.ranked.begin(), ranking.ranked.end(), [](const RankedDoc& x, const RankedDoc& y) {
    if (x.similarity != y.similarity) return x.similarity > y.similarity;
    return id_less(x.id, y.id);
  });
  return ranking;
}

}  // namespace claimdist
