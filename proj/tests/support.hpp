#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "claimdist/embeddings.hpp"
#include "claimdist/textprep.hpp"

namespace testing {

inline claimdist::EmbeddingTable table_from(const std::string& text) {
  std::istringstream in(text);
  return claimdist::EmbeddingTable::load(in);
}

inline std::vector<float> random_unit(std::mt19937_64& rng, std::size_t dim) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> v(dim);
  double norm = 0.0;
  while (norm < 1e-6) {
    norm = 0.0;
    for (auto& x : v) {
      x = normal(rng);
      norm += x * x;
    }
  }
  norm = std::sqrt(norm);
  std::vector<float> out(dim);
  for (std::size_t d = 0; d < dim; ++d) out[d] = static_cast<float>(v[d] / norm);
  return out;
}

/// Words "w0".."w{n-1}" with random unit vectors.
inline claimdist::EmbeddingTable random_table(std::mt19937_64& rng, std::size_t words, std::size_t dim) {
  std::vector<std::pair<std::string, std::vector<float>>> rows;
  for (std::size_t i = 0; i < words; ++i) rows.emplace_back("w" + std::to_string(i), random_unit(rng, dim));
  return claimdist::EmbeddingTable::from_rows(rows);
}

/// `k` distinct words of `table` with random positive weights.
inline claimdist::NBow random_nbow(const claimdist::EmbeddingTable& table, std::mt19937_64& rng, std::size_t k) {
  std::vector<std::size_t> pool(table.size());
  for (std::size_t i = 0; i < pool.size(); ++i) pool[i] = i;
  std::shuffle(pool.begin(), pool.end(), rng);
  std::uniform_real_distribution<double> weight(0.01, 1.0);
  std::vector<std::string> words;
  std::vector<double> weights;
  for (std::size_t i = 0; i < k; ++i) {
    words.push_back(table.word(pool[i]));
    weights.push_back(weight(rng));
  }
  return claimdist::NBow::from_weights(table, words, weights);
}

inline std::size_t uniform_size(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

/// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() / ("claimdist-test-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

  std::filesystem::path write(const std::string& name, const std::string& content) const {
    auto p = path_ / name;
    std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    out << content;
    return p;
  }

 private:
  std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace testing
