#include "claimdist/embeddings.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <stdexcept>

#include "claimdist/error.hpp"
#include "claimdist/simd/kernels.hpp"

namespace claimdist {

namespace {

constexpr std::size_t kMaxWarnings = 20;

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\v' || c == '\f'; }

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i])) ++i;
    std::size_t start = i;
    while (i < line.size() && !is_space(line[i])) ++i;
    if (i > start) fields.push_back(line.substr(start, i - start));
  }
  return fields;
}

bool is_unsigned_integer(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

float parse_value(std::string_view field, std::size_t line) {
  float value = 0.0f;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  if (!field.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw ParseError(line, "non-numeric value '" + std::string(field) + "'");
  }
  if (!std::isfinite(value)) {
    throw ParseError(line, "non-finite value '" + std::string(field) + "'");
  }
  return value;
}

}  // namespace

class EmbeddingTable::Builder {
 public:
  explicit Builder(std::optional<std::size_t> expected_dim) : expected_dim_(expected_dim) {
    if (expected_dim_ && *expected_dim_ == 0) throw ConfigError("expected dimension must be positive");
  }

  void add(std::string_view token, std::span<const float> values, std::size_t line) {
    if (values.empty()) throw ParseError(line, "row '" + std::string(token) + "' has no values");
    if (table_.dim_ == 0) {
      if (expected_dim_ && values.size() != *expected_dim_) {
        throw ParseError(line, "dimension " + std::to_string(values.size()) + " does not match expected " +
                                   std::to_string(*expected_dim_));
      }
      table_.dim_ = values.size();
    } else if (values.size() != table_.dim_) {
      throw ParseError(line, "inconsistent dimension: got " + std::to_string(values.size()) + ", expected " +
                                 std::to_string(table_.dim_));
    }

    std::string word(token);
    if (table_.index_.contains(word)) {
      ++table_.stats_.duplicates;
      warn("line " + std::to_string(line) + ": duplicate token '" + word + "' ignored");
      return;
    }
    if (std::all_of(values.begin(), values.end(), [](float v) { return v == 0.0f; })) {
      ++table_.stats_.zero_rows_dropped;
      warn("line " + std::to_string(line) + ": zero vector for '" + word + "' dropped");
      return;
    }
    double norm = std::sqrt(simd::dot(values, values));
    table_.index_.emplace(word, table_.words_.size());
    table_.words_.push_back(std::move(word));
    table_.values_.insert(table_.values_.end(), values.begin(), values.end());
    table_.norms_.push_back(norm);
  }

  void note_header() { table_.stats_.header_skipped = true; }
  void note_line() { ++table_.stats_.lines_read; }

  EmbeddingTable finish() && {
    if (table_.words_.empty()) throw DataError("embedding input contains no usable rows");
    return std::move(table_);
  }

 private:
  void warn(std::string message) {
    if (table_.stats_.warnings.size() < kMaxWarnings) table_.stats_.warnings.push_back(std::move(message));
  }

  std::optional<std::size_t> expected_dim_;
  EmbeddingTable table_;
};

EmbeddingTable EmbeddingTable::load(std::istream& in, std::optional<std::size_t> expected_dim) {
  Builder builder(expected_dim);
  std::string line;
  std::vector<float> values;
  std::size_t line_no = 0;
  bool first_content = true;
  while (std::getline(in, line)) {
    ++line_no;
    builder.note_line();
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto fields = split_fields(line);
    if (fields.empty()) continue;
    if (first_content) {
      first_content = false;
      if (fields.size() == 2 && is_unsigned_integer(fields[0]) && is_unsigned_integer(fields[1])) {
        builder.note_header();
        continue;
      }
    }
    if (fields.size() < 2) throw ParseError(line_no, "row has a token but no values");
    values.clear();
    for (std::size_t i = 1; i < fields.size(); ++i) values.push_back(parse_value(fields[i], line_no));
    builder.add(fields[0], values, line_no);
  }
  if (in.bad()) throw DataError("read error while loading embeddings");
  return std::move(builder).finish();
}

EmbeddingTable EmbeddingTable::load_file(const std::filesystem::path& path, std::optional<std::size_t> expected_dim) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open embedding file: " + path.string());
  return load(in, expected_dim);
}

EmbeddingTable EmbeddingTable::from_rows(const std::vector<std::pair<std::string, std::vector<float>>>& rows) {
  Builder builder(std::nullopt);
  std::size_t line = 0;
  for (const auto& [word, values] : rows) {
    builder.note_line();
    builder.add(word, values, ++line);
  }
  return std::move(builder).finish();
}

std::optional<std::size_t> EmbeddingTable::row_of(std::string_view word) const {
  auto it = index_.find(std::string(word));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

WordVector EmbeddingTable::row(std::size_t row) const {
  if (row >= words_.size()) throw std::out_of_range("embedding row out of range");
  return {values_.data() + row * dim_, dim_};
}

double EmbeddingTable::cosine(std::size_t row_a, std::size_t row_b) const {
  double c = simd::dot(row(row_a), row(row_b)) / (norms_[row_a] * norms_[row_b]);
  return std::clamp(c, -1.0, 1.0);
}

std::optional<WordVector> vector_of(const EmbeddingTable& table, std::string_view word) {
  if (auto r = table.row_of(word)) return table.row(*r);
  return std::nullopt;
}

double cosine_similarity(WordVector u, WordVector v) {
  if (u.size() != v.size()) throw std::invalid_argument("cosine_similarity: dimension mismatch");
  double nu = std::sqrt(simd::dot(u, u));
  double nv = std::sqrt(simd::dot(v, v));
  if (nu == 0.0 || nv == 0.0) throw std::invalid_argument("cosine_similarity: zero-norm vector");
  return std::clamp(simd::dot(u, v) / (nu * nv), -1.0, 1.0);
}

Matrix similarity_matrix_rows(const EmbeddingTable& table, std::span<const std::size_t> rows_a,
                              std::span<const std::size_t> rows_b) {
  Matrix out(rows_a.size(), rows_b.size());
  for (std::size_t i = 0; i < rows_a.size(); ++i) {
    for (std::size_t j = 0; j < rows_b.size(); ++j) out(i, j) = table.cosine(rows_a[i], rows_b[j]);
  }
  return out;
}

Matrix similarity_matrix(const EmbeddingTable& table, std::span<const std::string> words_a,
                         std::span<const std::string> words_b) {
  auto to_rows = [&](std::span<const std::string> words) {
    std::vector<std::size_t> rows;
    rows.reserve(words.size());
    for (const auto& w : words) {
      auto r = table.row_of(w);
      if (!r) throw std::out_of_range("similarity_matrix: out-of-vocabulary word '" + w + "'");
      rows.push_back(*r);
    }
    return rows;
  };
  return similarity_matrix_rows(table, to_rows(words_a), to_rows(words_b));
}

}  // namespace claimdist
