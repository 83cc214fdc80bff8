#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "claimdist/embeddings.hpp"
#include "claimdist/manifest.hpp"
#include "claimdist/stats.hpp"
#include "claimdist/textprep.hpp"
#include "claimdist/transport.hpp"

namespace claimdist {

inline constexpr std::string_view kToolVersion = "0.1.0";

struct DocumentDiagnostics {
  std::string id;
  std::string group;
  std::size_t tokens = 0;        ///< after stopword removal
  std::size_t oov_tokens = 0;    ///< dropped by the vocabulary filter
  std::size_t unique_words = 0;  ///< NBow size
};

struct LoadedCorpus {
  TokenizedDoc query;
  std::vector<TokenizedDoc> documents;  ///< manifest order
  std::vector<std::string> groups;
  std::string selector;  ///< "none" or SelectorConfig::describe()
};

/// Reads every text (UTF-8), applies the query selector when configured and
/// preprocesses. `table` is needed only by the moving-average selector.
/// Throws ConfigError for missing files, DataError for unreadable text.
LoadedCorpus load_corpus(const CorpusManifest& manifest, const StopwordSet& stopwords,
                         const EmbeddingTable* table = nullptr);

struct Provenance {
  std::string tool_version;
  std::string embedding_path;
  std::string embedding_label;
  std::string embedding_sha256;
  std::size_t dimension = 0;
  std::size_t vocabulary_size = 0;
  std::string stopword_list;
  std::string stopword_sha256;
  std::string variant;
  std::uint64_t seed = 0;
  std::string selector;
  std::string quantile_convention;
  std::string alternative;
};

struct GroupResult {
  std::string label;
  std::vector<RankedDoc> ranked;  ///< similarity descending
  GroupSummary summary;
};

struct SkipEntry {
  std::string id;
  std::string group;
  std::string reason;
};

struct PairwiseResult {
  std::string first;
  std::string second;
  HypothesisTestResult result;
};

struct ExperimentReport {
  std::string query_id;
  DocumentDiagnostics query_diagnostics;
  std::vector<GroupResult> groups;
  std::vector<SkipEntry> skipped;
  std::optional<HypothesisTestResult> omnibus;
  std::vector<PairwiseResult> pairwise;
  std::string significance_note;  ///< set when tests were omitted
  std::vector<DocumentDiagnostics> diagnostics;
  Provenance provenance;

  std::size_t scored_count() const;
};

/// Scores a loaded corpus. Provenance fields that depend on files (hashes,
/// paths) are taken from `provenance`; the rest are filled in here.
/// Throws EmptyDocument if the query cannot be represented, DataError if a
/// whole group is lost to skips.
ExperimentReport run_experiment(const LoadedCorpus& corpus, const EmbeddingTable& table, Variant variant,
                                Provenance provenance);

/// Loads embeddings, stopwords and texts named by the manifest and scores them.
ExperimentReport run_experiment(const CorpusManifest& manifest);

enum class ReportFormat { kText, kCsv, kJson };

ReportFormat parse_report_format(std::string_view name);

/// text: Table-1 style columns, median/IQR footer and significance block
/// (4 decimals). csv: group,id,similarity (6 decimals). json: full report
/// with sorted keys.
std::string emit_report(const ExperimentReport& report, ReportFormat format);

struct BenchRow {
  std::size_t size = 0;
  double median_wmd_seconds = 0.0;
  double median_rwmd_seconds = 0.0;
};

struct BenchResult {
  std::vector<BenchRow> rows;
  double wmd_slope = 0.0;   ///< least-squares slope of log time vs log size
  double rwmd_slope = 0.0;
  std::size_t dimension = 0;
};

struct BenchOptions {
  std::size_t dimension = 64;
  double min_seconds_per_pair = 0.1;   ///< repeat each timing until this much wall time passes
};

/// Times wmd_exact and lc_rwmd_batch on random document pairs of each size.
/// Throws ConfigError for sizes outside [1, kDefaultOracleLimit] or pairs < 3.
BenchResult bench_scaling(std::span<const std::size_t> sizes, std::size_t pairs_per_size, std::uint64_t seed,
                          const BenchOptions& options = {});

/// Least-squares slope of log(y) against log(x).
double log_log_slope(std::span<const double> x, std::span<const double> y);

/// Header, one row per size, then a "slope" row.
std::string bench_to_csv(const BenchResult& result);

}  // namespace claimdist
