#include "claimdist/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "claimdist/claimselect.hpp"
#include "claimdist/error.hpp"
#include "claimdist/hash.hpp"

namespace claimdist {

namespace {

std::string read_text(const std::filesystem::path& path, const std::string& id) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    throw ConfigError("document '" + id + "': file not found: " + path.string());
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("document '" + id + "': cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw DataError("document '" + id + "': read error in " + path.string());
  std::string text = buf.str();
  if (text.find('\0') != std::string::npos) {
    throw DataError("document '" + id + "': " + path.string() + " is not a text file");
  }
  if (text.starts_with("\xEF\xBB\xBF")) text.erase(0, 3);
  return text;
}

std::vector<std::string> select_query_tokens(const std::string& raw, const SelectorConfig& sel,
                                             const StopwordSet& stopwords, const EmbeddingTable* table) {
  auto sentences = split_sentences(raw);
  strip_stopwords(sentences, stopwords);
  std::vector<SentenceRecord> chosen;
  if (sel.kind == SelectorConfig::Kind::kLda) {
    auto model = fit_lda(sentences, sel.lda);
    std::unordered_set<std::string> cues(sel.cue_words.begin(), sel.cue_words.end());
    chosen = lda_select(model, sentences, cues, sel.top_k);
  } else {
    if (!table) throw ConfigError("the moving-average selector needs an embedding table");
    chosen = ma_select(sentences, *table, sel.window, sel.top_k);
  }
  std::sort(chosen.begin(), chosen.end(), [](const auto& a, const auto& b) { return a.index < b.index; });
  std::vector<std::string> tokens;
  for (const auto& s : chosen) tokens.insert(tokens.end(), s.tokens.begin(), s.tokens.end());
  return tokens;
}

DocumentDiagnostics diagnose(const TokenizedDoc& doc, const NBow* bow, std::size_t oov) {
  return {doc.id, doc.group, doc.tokens.size(), oov, bow ? bow->size() : 0};
}

}  // namespace

LoadedCorpus load_corpus(const CorpusManifest& manifest, const StopwordSet& stopwords, const EmbeddingTable* table) {
  LoadedCorpus corpus;
  corpus.groups = manifest.groups;

  std::string query_raw = read_text(manifest.resolve(manifest.query.path), manifest.query.id);
  corpus.query.id = manifest.query.id;
  corpus.query.group = "query";
  if (manifest.query.selector) {
    corpus.query.tokens = select_query_tokens(query_raw, *manifest.query.selector, stopwords, table);
    corpus.selector = manifest.query.selector->describe();
  } else {
    corpus.query.tokens = preprocess(query_raw, stopwords);
    corpus.selector = "none";
  }

  corpus.documents.reserve(manifest.documents.size());
  for (const auto& spec : manifest.documents) {
    std::string raw = read_text(manifest.resolve(spec.path), spec.id);
    corpus.documents.push_back({spec.id, spec.group, preprocess(raw, stopwords)});
  }
  return corpus;
}

std::size_t ExperimentReport::scored_count() const {
  std::size_t n = 0;
  for (const auto& g : groups) n += g.ranked.size();
  return n;
}

ExperimentReport run_experiment(const LoadedCorpus& corpus, const EmbeddingTable& table, Variant variant,
                                Provenance provenance) {
  if (variant == Variant::kExact) throw ConfigError("experiments use a relaxed variant; exact WMD is an oracle only");

  ExperimentReport report;
  report.query_id = corpus.query.id;

  NBow query;
  try {
    query = build_nbow(corpus.query.tokens, table);
  } catch (const EmptyDocument& e) {
    throw EmptyDocument("query '" + corpus.query.id + "': " + e.what());
  }
  report.query_diagnostics = diagnose(corpus.query, &query, query.dropped_tokens);

  for (const auto& label : corpus.groups) {
    std::vector<Candidate> candidates;
    for (const auto& doc : corpus.documents) {
      if (doc.group != label) continue;
      Candidate c;
      c.id = doc.id;
      try {
        c.bow = build_nbow(doc.tokens, table);
        report.diagnostics.push_back(diagnose(doc, &c.bow, c.bow.dropped_tokens));
      } catch (const EmptyDocument& e) {
        c.skip_reason = e.what();
        report.diagnostics.push_back(diagnose(doc, nullptr, doc.tokens.size()));
      }
      candidates.push_back(std::move(c));
    }
    Ranking ranking = rank_against_query(query, candidates, table, variant);
    for (auto& s : ranking.skipped) report.skipped.push_back({s.id, label, s.reason});
    if (ranking.ranked.empty()) {
      throw DataError("group '" + label + "' has no scoreable documents (all " + std::to_string(candidates.size()) +
                      " skipped)");
    }
    GroupResult group;
    group.label = label;
    std::vector<double> sims;
    for (const auto& r : ranking.ranked) sims.push_back(r.similarity);
    group.summary = median_iqr(sims);
    group.ranked = std::move(ranking.ranked);
    report.groups.push_back(std::move(group));
  }

  if (report.groups.size() >= 2) {
    std::vector<std::vector<double>> samples;
    std::vector<std::string> labels;
    for (const auto& g : report.groups) {
      std::vector<double> s;
      for (const auto& r : g.ranked) s.push_back(r.similarity);
      samples.push_back(std::move(s));
      labels.push_back(g.label);
    }
    report.omnibus = kruskal_wallis(samples, labels);
    for (std::size_t a = 0; a < samples.size(); ++a) {
      for (std::size_t b = a + 1; b < samples.size(); ++b) {
        auto res = wilcoxon_rank_sum_exact(samples[a], samples[b]);
        res.groups = {labels[a], labels[b]};
        report.pairwise.push_back({labels[a], labels[b], std::move(res)});
      }
    }
  } else {
    report.significance_note = "significance tests omitted: fewer than two groups";
  }

  provenance.tool_version = std::string(kToolVersion);
  provenance.dimension = table.dimension();
  provenance.vocabulary_size = table.size();
  provenance.variant = std::string(to_string(variant));
  provenance.selector = corpus.selector;
  provenance.quantile_convention = "linear interpolation at h=(n-1)p (type 7)";
  provenance.alternative = "two-sided";
  report.provenance = std::move(provenance);
  return report;
}

ExperimentReport run_experiment(const CorpusManifest& manifest) {
  auto embedding_path = manifest.resolve(manifest.embedding.path);
  EmbeddingTable table = EmbeddingTable::load_file(embedding_path, manifest.embedding.expected_dim);
  StopwordSet stopwords = manifest.options.stopwords
                              ? StopwordSet::load_file(manifest.resolve(*manifest.options.stopwords))
                              : StopwordSet::english();
  LoadedCorpus corpus = load_corpus(manifest, stopwords, &table);

  Provenance prov;
  prov.embedding_path = manifest.embedding.path.generic_string();
  prov.embedding_label = manifest.embedding.label.empty() ? manifest.embedding.path.filename().string()
                                                          : manifest.embedding.label;
  prov.embedding_sha256 = sha256_file(embedding_path);
  prov.stopword_list = stopwords.name();
  prov.stopword_sha256 = stopwords.sha256();
  prov.seed = manifest.options.seed;
  return run_experiment(corpus, table, manifest.options.variant, std::move(prov));
}

}  // namespace claimdist
