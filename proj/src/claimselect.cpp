#include "claimdist/claimselect.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <unordered_map>

#include "claimdist/error.hpp"

namespace claimdist {

namespace {

bool is_ascii_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && is_ascii_space(s[b])) ++b;
  while (e > b && is_ascii_space(s[e - 1])) --e;
  return std::string(s.substr(b, e - b));
}

// Whitespace-delimited word ending at (and including) position `end`.
std::string_view word_ending_at(std::string_view text, std::size_t end) {
  std::size_t start = end;
  while (start > 0 && !is_ascii_space(text[start - 1])) --start;
  return text.substr(start, end - start + 1);
}

bool is_guarded_abbreviation(std::string_view word) {
  static const std::vector<std::string_view> guards = {
      "al.",  "fig.", "figs.", "eq.",  "eqs.", "e.g.", "i.e.", "cf.",    "vs.",   "dr.",   "prof.",
      "mr.",  "mrs.", "ms.",   "no.",  "vol.", "pp.",  "ref.", "refs.", "sec.", "approx.", "resp.", "st.",
  };
  // Strip leading brackets/quotes so "(e.g." is still recognised.
  while (!word.empty() && (word.front() == '(' || word.front() == '[' || word.front() == '"')) word.remove_prefix(1);
  std::string lower;
  for (char c : word) lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return std::find(guards.begin(), guards.end(), lower) != guards.end();
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  // Uniform in [0, 1) from the top 53 bits; independent of the standard
  // library's distribution implementations.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  std::size_t below(std::size_t n) {
    auto k = static_cast<std::size_t>(uniform() * static_cast<double>(n));
    return std::min(k, n - 1);
  }

 private:
  std::mt19937_64 engine_;
};

std::vector<SentenceRecord> take_top(std::span<const SentenceRecord> sentences, std::span<const double> scores,
                                     std::size_t top_k) {
  std::vector<std::size_t> order(sentences.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return sentences[a].index < sentences[b].index;
  });
  std::vector<SentenceRecord> out;
  for (std::size_t k = 0; k < std::min(top_k, order.size()); ++k) {
    SentenceRecord rec = sentences[order[k]];
    rec.score = scores[order[k]];
    out.push_back(std::move(rec));
  }
  return out;
}

double cosine_dense(const std::vector<double>& a, const std::vector<double>& b) {
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 1.0;
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

}  // namespace

std::vector<SentenceRecord> split_sentences(std::string_view raw) {
  std::vector<SentenceRecord> out;
  auto emit = [&](std::string_view piece) {
    std::string text = trim(piece);
    if (text.empty()) return;
    SentenceRecord rec;
    rec.index = out.size();
    rec.tokens = normalize_and_tokenize(text);
    rec.text = std::move(text);
    out.push_back(std::move(rec));
  };

  std::size_t start = 0;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    char c = raw[i];
    if (c != '.' && c != '?' && c != '!') continue;
    if (i + 1 >= raw.size() || !is_ascii_space(raw[i + 1])) continue;
    std::size_t next = i + 1;
    while (next < raw.size() && is_ascii_space(raw[next])) ++next;
    if (next >= raw.size()) continue;
    auto lead = static_cast<unsigned char>(raw[next]);
    if (!std::isupper(lead) && !std::isdigit(lead)) continue;
    if (c == '.' && is_guarded_abbreviation(word_ending_at(raw, i))) continue;
    emit(raw.substr(start, i + 1 - start));
    start = next;
  }
  if (start < raw.size()) emit(raw.substr(start));
  return out;
}

void strip_stopwords(std::vector<SentenceRecord>& sentences, const StopwordSet& stopwords) {
  for (auto& s : sentences) s.tokens = remove_stopwords(s.tokens, stopwords);
}

std::size_t LdaModel::total_tokens() const noexcept {
  return std::accumulate(topic_totals.begin(), topic_totals.end(), std::size_t{0});
}

std::vector<std::string> LdaModel::top_words(std::size_t topic, std::size_t count) const {
  std::vector<std::size_t> ids(vocabulary.size());
  std::iota(ids.begin(), ids.end(), 0);
  std::stable_sort(ids.begin(), ids.end(),
                   [&](std::size_t a, std::size_t b) { return word_topic[a][topic] > word_topic[b][topic]; });
  std::vector<std::string> out;
  for (std::size_t k = 0; k < std::min(count, ids.size()); ++k) {
    if (word_topic[ids[k]][topic] == 0) break;
    out.push_back(vocabulary[ids[k]]);
  }
  return out;
}

LdaModel fit_lda(std::span<const SentenceRecord> sentences, const LdaParams& params,
                 const std::function<void(std::size_t, const LdaModel&)>& on_sweep) {
  if (params.topics < 1) throw std::invalid_argument("fit_lda: topic count must be at least 1");
  if (params.iterations < 1) throw std::invalid_argument("fit_lda: iterations must be at least 1");
  if (!(params.alpha > 0.0) || !(params.beta > 0.0)) throw std::invalid_argument("fit_lda: alpha and beta must be positive");

  LdaModel model;
  model.params = params;
  std::unordered_map<std::string, std::size_t> ids;
  for (const auto& s : sentences) {
    std::vector<std::size_t> words;
    for (const auto& t : s.tokens) {
      auto [it, inserted] = ids.try_emplace(t, model.vocabulary.size());
      if (inserted) model.vocabulary.push_back(t);
      words.push_back(it->second);
    }
    model.sentence_words.push_back(std::move(words));
  }
  if (model.vocabulary.empty()) throw DataError("fit_lda: every sentence is empty after preprocessing");

  const std::size_t k_topics = params.topics;
  const double vocab_beta = static_cast<double>(model.vocabulary.size()) * params.beta;
  model.sentence_topic.assign(sentences.size(), std::vector<std::size_t>(k_topics, 0));
  model.word_topic.assign(model.vocabulary.size(), std::vector<std::size_t>(k_topics, 0));
  model.topic_totals.assign(k_topics, 0);
  model.assignments.resize(sentences.size());

  Rng rng(params.seed);
  for (std::size_t s = 0; s < model.sentence_words.size(); ++s) {
    for (std::size_t w : model.sentence_words[s]) {
      std::size_t z = rng.below(k_topics);
      model.assignments[s].push_back(z);
      ++model.sentence_topic[s][z];
      ++model.word_topic[w][z];
      ++model.topic_totals[z];
    }
  }

  std::vector<double> cumulative(k_topics);
  for (std::size_t sweep = 0; sweep < params.iterations; ++sweep) {
    for (std::size_t s = 0; s < model.sentence_words.size(); ++s) {
      auto& doc_topics = model.sentence_topic[s];
      for (std::size_t t = 0; t < model.sentence_words[s].size(); ++t) {
        std::size_t w = model.sentence_words[s][t];
        std::size_t old = model.assignments[s][t];
        --doc_topics[old];
        --model.word_topic[w][old];
        --model.topic_totals[old];

        double total = 0.0;
        for (std::size_t k = 0; k < k_topics; ++k) {
          total += (static_cast<double>(doc_topics[k]) + params.alpha) *
                   (static_cast<double>(model.word_topic[w][k]) + params.beta) /
                   (static_cast<double>(model.topic_totals[k]) + vocab_beta);
          cumulative[k] = total;
        }
        double u = rng.uniform() * total;
        std::size_t z = static_cast<std::size_t>(
            std::upper_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin());
        z = std::min(z, k_topics - 1);

        model.assignments[s][t] = z;
        ++doc_topics[z];
        ++model.word_topic[w][z];
        ++model.topic_totals[z];
      }
    }
    if (on_sweep) on_sweep(sweep, model);
  }
  return model;
}

const std::vector<std::string>& default_cue_words() {
  static const std::vector<std::string> cues = {"propose", "proposes", "proposed", "introduce",
                                                "introduces", "new", "novel", "index"};
  return cues;
}

std::vector<SentenceRecord> lda_select(const LdaModel& model, std::span<const SentenceRecord> sentences,
                                       const std::unordered_set<std::string>& cue_words, std::size_t top_k) {
  if (top_k < 1) throw std::invalid_argument("lda_select: top_k must be at least 1");
  if (sentences.size() != model.sentence_topic.size()) {
    throw std::invalid_argument("lda_select: model was fitted on a different sentence list");
  }
  const std::size_t k_topics = model.topic_totals.size();
  std::vector<std::size_t> cue_mass(k_topics, 0);
  bool any_cue = false;
  for (std::size_t s = 0; s < sentences.size(); ++s) {
    bool cued = std::any_of(sentences[s].tokens.begin(), sentences[s].tokens.end(),
                            [&](const std::string& t) { return cue_words.contains(t); });
    if (!cued) continue;
    any_cue = true;
    for (std::size_t k = 0; k < k_topics; ++k) cue_mass[k] += model.sentence_topic[s][k];
  }
  if (!any_cue) {
    throw DataError("no sentence contains a cue word; supply cue words or use the moving-average selector");
  }
  std::size_t claim_topic = static_cast<std::size_t>(
      std::max_element(cue_mass.begin(), cue_mass.end()) - cue_mass.begin());

  std::vector<double> scores(sentences.size(), 0.0);
  for (std::size_t s = 0; s < sentences.size(); ++s) {
    auto len = model.sentence_words[s].size();
    if (len > 0) scores[s] = static_cast<double>(model.sentence_topic[s][claim_topic]) / static_cast<double>(len);
  }
  return take_top(sentences, scores, top_k);
}

std::vector<double> moving_average(std::span<const double> signal, std::size_t window) {
  if (window == 0 || window % 2 == 0) throw std::invalid_argument("moving_average: window must be odd and positive");
  const std::size_t half = window / 2;
  std::vector<double> out(signal.size());
  for (std::size_t i = 0; i < signal.size(); ++i) {
    std::size_t lo = i >= half ? i - half : 0;
    std::size_t hi = std::min(signal.size() - 1, i + half);
    // Averaging deviations from the centre keeps constant signals exact.
    double dev = 0.0;
    for (std::size_t j = lo; j <= hi; ++j) dev += signal[j] - signal[i];
    out[i] = signal[i] + dev / static_cast<double>(hi - lo + 1);
  }
  return out;
}

std::vector<SentenceRecord> ma_select(std::span<const SentenceRecord> sentences, const EmbeddingTable& table,
                                      std::size_t window, std::size_t top_k) {
  if (top_k < 1) throw std::invalid_argument("ma_select: top_k must be at least 1");
  if (window == 0 || window % 2 == 0) throw std::invalid_argument("ma_select: window must be odd and positive");

  const std::size_t dim = table.dimension();
  std::vector<double> doc_sum(dim, 0.0);
  std::size_t doc_count = 0;
  std::vector<std::vector<double>> centroids(sentences.size());
  for (std::size_t s = 0; s < sentences.size(); ++s) {
    std::vector<double> sum(dim, 0.0);
    std::size_t count = 0;
    for (const auto& t : sentences[s].tokens) {
      auto row = table.row_of(t);
      if (!row) continue;
      auto v = table.row(*row);
      for (std::size_t d = 0; d < dim; ++d) sum[d] += v[d];
      ++count;
    }
    if (count == 0) continue;
    for (std::size_t d = 0; d < dim; ++d) doc_sum[d] += sum[d];
    doc_count += count;
    for (auto& x : sum) x /= static_cast<double>(count);
    centroids[s] = std::move(sum);
  }
  if (doc_count == 0) throw DataError("ma_select: no sentence has an in-vocabulary token");
  for (auto& x : doc_sum) x /= static_cast<double>(doc_count);

  std::vector<double> raw(sentences.size(), 0.0);
  for (std::size_t s = 0; s < sentences.size(); ++s) {
    if (centroids[s].empty()) continue;
    raw[s] = std::max(0.0, 1.0 - cosine_dense(centroids[s], doc_sum));
  }
  auto smoothed = moving_average(raw, window);
  return take_top(sentences, smoothed, top_k);
}

std::string join_in_document_order(std::span<const SentenceRecord> selected) {
  std::vector<const SentenceRecord*> ordered;
  for (const auto& s : selected) ordered.push_back(&s);
  std::sort(ordered.begin(), ordered.end(), [](auto* a, auto* b) { return a->index < b->index; });
  std::string out;
  for (const auto* s : ordered) {
    if (!out.empty()) out += ' ';
    out += s->text;
  }
  return out;
}

}  // namespace claimdist
