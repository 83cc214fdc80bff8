#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "claimdist/claimselect.hpp"
#include "claimdist/transport.hpp"

namespace claimdist {

/// How to reduce the query text to its claim sentences before scoring.
struct SelectorConfig {
  enum class Kind { kLda, kMovingAverage };

  Kind kind = Kind::kLda;
  LdaParams lda;
  std::size_t window = 3;
  std::size_t top_k = 10;
  std::vector<std::string> cue_words = default_cue_words();

  /// One-line description recorded in report provenance.
  std::string describe() const;
};

struct QuerySpec {
  std::string id;
  std::filesystem::path path;
  std::optional<SelectorConfig> selector;
};

struct DocumentSpec {
  std::string id;
  std::string group;
  std::filesystem::path path;
};

struct EmbeddingSpec {
  std::filesystem::path path;
  std::optional<std::size_t> expected_dim;
  std::string label;  ///< free-form release name, e.g. "glove.6B.300d"
};

struct ManifestOptions {
  Variant variant = Variant::kSymmetricMax;
  std::optional<std::filesystem::path> stopwords;  ///< bundled English list when absent
  std::uint64_t seed = 42;
};

/// Experiment description. JSON schema (paths relative to the manifest):
///
///   {
///     "query":     {"id": "...", "path": "...",
///                   "selector": {"kind": "lda"|"ma", "top_k": 10,
///                                "topics": 5, "alpha": 0.1, "beta": 0.01,
///                                "iterations": 500, "seed": 42,
///                                "cue_words": [...], "window": 3}},
///     "groups":    ["h-index", "scientometrics", "random"],
///     "documents": [{"id": "7", "group": "h-index", "path": "..."}],
///     "embedding": {"path": "...", "expected_dim": 300, "label": "..."},
///     "options":   {"variant": "symmetric-max", "stopwords": "...", "seed": 42}
///   }
///
/// "selector", "groups", "expected_dim", "label" and every "options" key
/// are optional. Document ids must be unique within their group.
struct CorpusManifest {
  QuerySpec query;
  std::vector<std::string> groups;  ///< declared order, or first appearance
  std::vector<DocumentSpec> documents;
  EmbeddingSpec embedding;
  ManifestOptions options;
  std::filesystem::path base_dir;

  /// Throws ConfigError naming the offending field, id or group.
  static CorpusManifest parse(std::string_view json_text, const std::filesystem::path& base_dir);
  static CorpusManifest load(const std::filesystem::path& path);

  std::filesystem::path resolve(const std::filesystem::path& p) const;
};

}  // namespace claimdist
