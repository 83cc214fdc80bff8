#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "claimdist/embeddings.hpp"

namespace claimdist {

/// A preprocessed document: lowercase tokens with punctuation and stopwords
/// already removed.
struct TokenizedDoc {
  std::string id;
  std::string group;
  std::vector<std::string> tokens;
};

/// Normalized bag of words: unique in-vocabulary words in first-appearance
/// order, with positive weights summing to one.
struct NBow {
  std::vector<std::string> words;
  std::vector<std::size_t> rows;  ///< table rows aligned with `words`
  std::vector<double> weights;
  std::size_t dropped_tokens = 0;  ///< out-of-vocabulary tokens discarded

  std::size_t size() const noexcept { return words.size(); }
  bool empty() const noexcept { return words.empty(); }

  /// Builds an NBow from explicit words and positive weights (normalized
  /// here). Throws EmptyDocument on empty input, std::invalid_argument on
  /// OOV or duplicate words or non-positive weights.
  static NBow from_weights(const EmbeddingTable& table, std::span<const std::string> words,
                           std::span<const double> weights);
};

class StopwordSet {
 public:
  StopwordSet() = default;
  StopwordSet(std::string name, std::vector<std::string> words);

  /// Bundled English list (Snowball-derived, 175 entries).
  static const StopwordSet& english();

  /// One word per line, UTF-8. Blank lines and lines starting with '#' are
  /// ignored; entries are lowercased.
  static StopwordSet load(std::istream& in, std::string name);
  static StopwordSet load_file(const std::filesystem::path& path);

  bool contains(std::string_view word) const { return words_.contains(std::string(word)); }
  std::size_t size() const noexcept { return words_.size(); }
  const std::string& name() const noexcept { return name_; }
  /// SHA-256 over the sorted, newline-joined entries.
  const std::string& sha256() const noexcept { return hash_; }

 private:
  std::string name_;
  std::unordered_set<std::string> words_;
  std::string hash_;
};

/// Lowercases and splits on every non-alphanumeric code point. Non-ASCII
/// letters count as alphanumeric. Digit-only tokens are kept.
std::vector<std::string> normalize_and_tokenize(std::string_view raw);

/// Order-preserving filter.
std::vector<std::string> remove_stopwords(std::span<const std::string> tokens, const StopwordSet& stopwords);

/// normalize_and_tokenize followed by remove_stopwords.
std::vector<std::string> preprocess(std::string_view raw, const StopwordSet& stopwords);

/// Drops OOV tokens and weights each remaining word by its relative count.
/// Throws EmptyDocument when nothing survives.
NBow build_nbow(std::span<const std::string> tokens, const EmbeddingTable& table);

}  // namespace claimdist
