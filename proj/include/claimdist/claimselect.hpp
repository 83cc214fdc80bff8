#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "claimdist/embeddings.hpp"
#include "claimdist/textprep.hpp"

namespace claimdist {

struct SentenceRecord {
  std::size_t index = 0;
  std::string text;
  std::vector<std::string> tokens;
  double score = 0.0;
};

/// Splits at '.', '?' or '!' followed by whitespace and an uppercase letter
/// or digit, except after guarded abbreviations ("et al.", "Fig.", "e.g.",
/// ...). Tokens are filled with normalize_and_tokenize().
std::vector<SentenceRecord> split_sentences(std::string_view raw);

/// Removes stopwords from every sentence's tokens in place.
void strip_stopwords(std::vector<SentenceRecord>& sentences, const StopwordSet& stopwords);

struct LdaParams {
  std::size_t topics = 5;
  double alpha = 0.1;
  double beta = 0.01;
  std::size_t iterations = 500;
  std::uint64_t seed = 42;

  friend bool operator==(const LdaParams&, const LdaParams&) = default;
};

/// Collapsed Gibbs LDA over sentences-as-documents. Count tables are kept
/// dense: sentence x topic, word x topic, per-topic totals.
struct LdaModel {
  LdaParams params;
  std::vector<std::string> vocabulary;
  std::vector<std::vector<std::size_t>> sentence_words;   ///< word ids per sentence token
  std::vector<std::vector<std::size_t>> assignments;      ///< topic per sentence token
  std::vector<std::vector<std::size_t>> sentence_topic;   ///< [sentence][topic]
  std::vector<std::vector<std::size_t>> word_topic;       ///< [word][topic]
  std::vector<std::size_t> topic_totals;

  std::size_t total_tokens() const noexcept;
  /// Most frequent words of `topic`, ties by vocabulary order.
  std::vector<std::string> top_words(std::size_t topic, std::size_t count) const;

  friend bool operator==(const LdaModel&, const LdaModel&) = default;
};

/// Deterministic for fixed input and seed. Throws std::invalid_argument for
/// bad parameters, DataError when every sentence is empty.
/// `on_sweep`, when set, observes the model after every Gibbs sweep.
LdaModel fit_lda(std::span<const SentenceRecord> sentences, const LdaParams& params,
                 const std::function<void(std::size_t sweep, const LdaModel&)>& on_sweep = {});

const std::vector<std::string>& default_cue_words();

/// Picks the topic most assigned inside cue-bearing sentences and returns the
/// top_k sentences by that topic's token share (ties by index).
std::vector<SentenceRecord> lda_select(const LdaModel& model, std::span<const SentenceRecord> sentences,
                                       const std::unordered_set<std::string>& cue_words, std::size_t top_k);

/// Centered moving average with truncated windows at the edges.
std::vector<double> moving_average(std::span<const double> signal, std::size_t window);

/// Scores sentences by 1 - cos(sentence centroid, document centroid), smooths
/// with moving_average(window), returns the top_k by smoothed score.
std::vector<SentenceRecord> ma_select(std::span<const SentenceRecord> sentences, const EmbeddingTable& table,
                                      std::size_t window, std::size_t top_k);

/// Selected sentences joined back into text, in document order.
std::string join_in_document_order(std::span<const SentenceRecord> selected);

}  // namespace claimdist
