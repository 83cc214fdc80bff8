#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "claimdist/matrix.hpp"

namespace claimdist {

/// A view of one stored word vector. Valid while its table lives.
using WordVector = std::span<const float>;

/// What happened while reading an embedding file.
struct LoadStats {
  bool header_skipped = false;
  std::size_t lines_read = 0;
  std::size_t duplicates = 0;
  std::size_t zero_rows_dropped = 0;
  /// First few human-readable warnings (duplicates, dropped rows).
  std::vector<std::string> warnings;
};

/// Immutable vocabulary -> vector table. Vectors are stored unnormalized in
/// single precision next to their cached Euclidean norms.
class EmbeddingTable {
 public:
  /// Reads GloVe text format ("token v1 ... vd" per line). A leading line
  /// of exactly two integers (word2vec-style "count dim" header) is skipped.
  /// Duplicate tokens keep their first row; all-zero rows are dropped.
  /// Throws ParseError (with line number) or DataError.
  static EmbeddingTable load(std::istream& in, std::optional<std::size_t> expected_dim = std::nullopt);
  static EmbeddingTable load_file(const std::filesystem::path& path,
                                  std::optional<std::size_t> expected_dim = std::nullopt);

  /// Builds a table from in-memory rows with the same rules as load().
  static EmbeddingTable from_rows(const std::vector<std::pair<std::string, std::vector<float>>>& rows);

  std::size_t dimension() const noexcept { return dim_; }
  std::size_t size() const noexcept { return words_.size(); }
  const LoadStats& load_stats() const noexcept { return stats_; }

  std::optional<std::size_t> row_of(std::string_view word) const;
  bool contains(std::string_view word) const { return row_of(word).has_value(); }

  const std::string& word(std::size_t row) const { return words_.at(row); }
  WordVector row(std::size_t row) const;
  double norm(std::size_t row) const { return norms_.at(row); }

  /// Cosine similarity of two stored rows, using cached norms.
  double cosine(std::size_t row_a, std::size_t row_b) const;

 private:
  class Builder;

  std::size_t dim_ = 0;
  std::vector<std::string> words_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<float> values_;
  std::vector<double> norms_;
  LoadStats stats_;
};

/// Stored row for `word`, or nullopt when out of vocabulary (exact match).
std::optional<WordVector> vector_of(const EmbeddingTable& table, std::string_view word);

/// dot(u,v) / (|u| |v|), clamped to [-1, 1].
/// Throws std::invalid_argument on dimension mismatch or a zero-norm input.
double cosine_similarity(WordVector u, WordVector v);

/// Entry (i, j) is the cosine of words_a[i] and words_b[j]. Throws
/// std::out_of_range if any word is out of vocabulary.
Matrix similarity_matrix(const EmbeddingTable& table, std::span<const std::string> words_a,
                         std::span<const std::string> words_b);

/// Same, addressed by table rows.
Matrix similarity_matrix_rows(const EmbeddingTable& table, std::span<const std::size_t> rows_a,
                              std::span<const std::size_t> rows_b);

}  // namespace claimdist
