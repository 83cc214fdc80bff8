// claimdist: command-line front end.
//
// Exit codes: 0 success, 1 usage/config error, 2 data error, 3 internal
// invariant violation.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>
#include <unordered_set>

#include "claimdist/claimselect.hpp"
#include "claimdist/embeddings.hpp"
#include "claimdist/error.hpp"
#include "claimdist/manifest.hpp"
#include "claimdist/pipeline.hpp"
#include "claimdist/simd/kernels.hpp"
#include "claimdist/textprep.hpp"
#include "claimdist/transport.hpp"

namespace {

using namespace claimdist;
using nlohmann::json;

enum Exit { kOk = 0, kUsage = 1, kData = 2, kInternal = 3 };

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + out_path);
  out << text;
}

StopwordSet stopwords_from(const std::string& path) {
  return path.empty() ? StopwordSet::english() : StopwordSet::load_file(path);
}

EmbeddingTable load_table(const std::string& path, std::size_t dim) {
  auto table = EmbeddingTable::load_file(path, dim ? std::optional<std::size_t>(dim) : std::nullopt);
  for (const auto& w : table.load_stats().warnings) std::cerr << "warning: " << w << '\n';
  return table;
}

json nbow_json(const NBow& bow) {
  json words = json::array();
  for (std::size_t i = 0; i < bow.size(); ++i) words.push_back({{"word", bow.words[i]}, {"weight", bow.weights[i]}});
  return {{"words", words}, {"dropped_tokens", bow.dropped_tokens}};
}

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semantic novelty scoring with relaxed word mover's distance"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(claimdist::kToolVersion));

  // run
  std::string manifest_path;
  std::string format = "text";
  std::string out_path;
  auto* run = app.add_subcommand("run", "Score a corpus against its query and test group differences");
  run->add_option("manifest", manifest_path, "Manifest (JSON)")->required()->check(CLI::ExistingFile);
  run->add_option("--format", format, "text | csv | json")->check(CLI::IsMember({"text", "csv", "json"}));
  run->add_option("--out", out_path, "Write to this file instead of stdout");

  // rank
  std::string rank_manifest;
  std::string rank_format = "text";
  auto* rank = app.add_subcommand("rank", "Rank every manifest document by similarity to the query");
  rank->add_option("manifest", rank_manifest, "Manifest (JSON)")->required()->check(CLI::ExistingFile);
  rank->add_option("--format", rank_format, "text | json")->check(CLI::IsMember({"text", "json"}));

  // dist
  std::string query_file;
  std::string candidate_file;
  std::string emb_path;
  std::size_t emb_dim = 0;
  std::string variant_name = "symmetric-max";
  std::string stop_path;
  auto* dist = app.add_subcommand("dist", "Distance between two text files");
  dist->add_option("query", query_file)->required()->check(CLI::ExistingFile);
  dist->add_option("candidate", candidate_file)->required()->check(CLI::ExistingFile);
  dist->add_option("--embeddings", emb_path, "GloVe text file")->required()->check(CLI::ExistingFile);
  dist->add_option("--dim", emb_dim, "Expected embedding dimension");
  dist->add_option("--variant", variant_name, "symmetric-max | one-sided-query | one-sided-candidate | exact");
  dist->add_option("--stopwords", stop_path, "Stopword file (one word per line)");

  // extract
  std::string extract_file;
  std::string selector = "lda";
  LdaParams lda;
  std::size_t window = 3;
  std::size_t top_k = 5;
  std::string cues;
  std::string extract_emb;
  std::size_t extract_dim = 0;
  std::string extract_stop;
  auto* extract = app.add_subcommand("extract", "Select claim sentences from an unsectioned text");
  extract->add_option("file", extract_file)->required()->check(CLI::ExistingFile);
  extract->add_option("--selector", selector, "lda | ma")->check(CLI::IsMember({"lda", "ma"}));
  extract->add_option("--k", lda.topics, "LDA topics");
  extract->add_option("--alpha", lda.alpha, "LDA document-topic prior");
  extract->add_option("--beta", lda.beta, "LDA topic-word prior");
  extract->add_option("--iters", lda.iterations, "Gibbs sweeps");
  extract->add_option("--seed", lda.seed, "PRNG seed");
  extract->add_option("--cues", cues, "Comma-separated cue words for the LDA selector");
  extract->add_option("--window", window, "Moving-average window (odd)");
  extract->add_option("--top-k", top_k, "Sentences to select");
  extract->add_option("--embeddings", extract_emb, "GloVe text file (ma selector)");
  extract->add_option("--dim", extract_dim, "Expected embedding dimension");
  extract->add_option("--stopwords", extract_stop, "Stopword file");

  // preprocess
  std::string pre_file;
  std::string pre_emb;
  std::size_t pre_dim = 0;
  std::string pre_stop;
  auto* pre = app.add_subcommand("preprocess", "Print tokens (and NBow weights) of a text as JSON");
  pre->add_option("file", pre_file)->required()->check(CLI::ExistingFile);
  pre->add_option("--embeddings", pre_emb, "GloVe text file; adds NBow weights");
  pre->add_option("--dim", pre_dim, "Expected embedding dimension");
  pre->add_option("--stopwords", pre_stop, "Stopword file");

  // embeddings info
  std::string info_path;
  std::size_t info_dim = 0;
  auto* emb = app.add_subcommand("embeddings", "Embedding file utilities");
  emb->require_subcommand(1);
  auto* info = emb->add_subcommand("info", "Print dimension, vocabulary size and load diagnostics");
  info->add_option("path", info_path)->required()->check(CLI::ExistingFile);
  info->add_option("--dim", info_dim, "Expected embedding dimension");

  // bench
  std::string sizes_arg = "8,16,32,64";
  std::size_t pairs = 5;
  std::uint64_t bench_seed = 42;
  BenchOptions bench_opts;
  std::string bench_out;
  auto* bench = app.add_subcommand("bench", "Time exact WMD against RWMD over document sizes");
  bench->add_option("--sizes", sizes_arg, "Comma-separated unique-word counts");
  bench->add_option("--pairs", pairs, "Random pairs per size");
  bench->add_option("--seed", bench_seed, "PRNG seed");
  bench->add_option("--dim", bench_opts.dimension, "Vector dimension");
  bench->add_option("--out", bench_out, "Write CSV here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*run) {
      auto manifest = CorpusManifest::load(manifest_path);
      auto report = run_experiment(manifest);
      write_output(emit_report(report, parse_report_format(format)), out_path);
    } else if (*rank) {
      auto manifest = CorpusManifest::load(rank_manifest);
      auto report = run_experiment(manifest);
      struct Row {
        std::string group;
        RankedDoc doc;
      };
      std::vector<Row> rows;
      for (const auto& g : report.groups)
        for (const auto& d : g.ranked) rows.push_back({g.label, d});
      std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        if (a.doc.similarity != b.doc.similarity) return a.doc.similarity > b.doc.similarity;
        if (a.group != b.group) return a.group < b.group;
        return id_less(a.doc.id, b.doc.id);
      });
      if (rank_format == "json") {
        json out = json::array();
        for (const auto& r : rows) out.push_back({{"group", r.group}, {"id", r.doc.id}, {"similarity", r.doc.similarity}});
        std::cout << out.dump(2) << '\n';
      } else {
        std::printf("%-6s %-24s %-12s %s\n", "rank", "group", "id", "similarity");
        for (std::size_t i = 0; i < rows.size(); ++i) {
          std::printf("%-6zu %-24s %-12s %.4f\n", i + 1, rows[i].group.c_str(), rows[i].doc.id.c_str(),
                      rows[i].doc.similarity);
        }
        for (const auto& s : report.skipped) std::printf("skipped %s/%s: %s\n", s.group.c_str(), s.id.c_str(), s.reason.c_str());
      }
    } else if (*dist) {
      Variant variant = parse_variant(variant_name);
      auto table = load_table(emb_path, emb_dim);
      auto stop = stopwords_from(stop_path);
      NBow a = build_nbow(preprocess(read_file(query_file), stop), table);
      NBow b = build_nbow(preprocess(read_file(candidate_file), stop), table);
      DistanceResult r = variant == Variant::kExact ? wmd_exact(a, b, table).first : rwmd_distance(a, b, table, variant);
      json out = {{"distance", r.distance},
                  {"similarity", r.similarity},
                  {"variant", std::string(to_string(r.variant))},
                  {"query_unique_words", a.size()},
                  {"candidate_unique_words", b.size()},
                  {"query_oov_tokens", a.dropped_tokens},
                  {"candidate_oov_tokens", b.dropped_tokens}};
      std::cout << out.dump(2) << '\n';
    } else if (*extract) {
      if (top_k < 1) throw ConfigError("--top-k must be at least 1");
      auto stop = stopwords_from(extract_stop);
      auto sentences = split_sentences(read_file(extract_file));
      strip_stopwords(sentences, stop);
      std::vector<SentenceRecord> chosen;
      json settings;
      if (selector == "lda") {
        auto model = fit_lda(sentences, lda);
        auto cue_list = cues.empty() ? default_cue_words() : split_csv(cues);
        std::unordered_set<std::string> cue_set(cue_list.begin(), cue_list.end());
        chosen = lda_select(model, sentences, cue_set, top_k);
        settings = {{"k", lda.topics}, {"alpha", lda.alpha}, {"beta", lda.beta},
                    {"iters", lda.iterations}, {"seed", lda.seed}, {"cues", cue_list}};
      } else {
        if (extract_emb.empty()) throw ConfigError("--selector ma needs --embeddings");
        auto table = load_table(extract_emb, extract_dim);
        chosen = ma_select(sentences, table, window, top_k);
        settings = {{"window", window}};
      }
      json selected = json::array();
      for (const auto& s : chosen) selected.push_back({{"index", s.index}, {"score", s.score}, {"text", s.text}});
      json out = {{"selector", selector}, {"settings", settings}, {"top_k", top_k},
                  {"sentence_count", sentences.size()}, {"selected", selected}};
      std::cout << out.dump(2) << '\n';
    } else if (*pre) {
      auto stop = stopwords_from(pre_stop);
      auto tokens = preprocess(read_file(pre_file), stop);
      json out = {{"tokens", tokens}, {"stopword_list", stop.name()}, {"stopword_sha256", stop.sha256()}};
      if (!pre_emb.empty()) {
        auto table = load_table(pre_emb, pre_dim);
        out["nbow"] = nbow_json(build_nbow(tokens, table));
      }
      std::cout << out.dump(2) << '\n';
    } else if (*info) {
      auto table = load_table(info_path, info_dim);
      const auto& st = table.load_stats();
      json out = {{"path", info_path},
                  {"dimension", table.dimension()},
                  {"vocabulary_size", table.size()},
                  {"header_skipped", st.header_skipped},
                  {"duplicates", st.duplicates},
                  {"zero_rows_dropped", st.zero_rows_dropped},
                  {"kernel_isa", std::string(simd::isa_name(simd::active_isa()))}};
      std::cout << out.dump(2) << '\n';
    } else if (*bench) {
      std::vector<std::size_t> sizes;
      for (const auto& s : split_csv(sizes_arg)) {
        try {
          sizes.push_back(static_cast<std::size_t>(std::stoul(s)));
        } catch (const std::exception&) {
          throw ConfigError("--sizes: not an integer: " + s);
        }
      }
      auto result = bench_scaling(sizes, pairs, bench_seed, bench_opts);
      write_output(bench_to_csv(result), bench_out);
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kData;
  } catch (const InvariantError& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kOk;
}
