#include <algorithm>
#include <cstdio>
#include <json.hpp>
#include <sstream>

#include "claimdist/error.hpp"
#include "claimdist/pipeline.hpp"

namespace claimdist {

using nlohmann::json;

namespace {

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

std::string format_p(double p) { return p < 0.001 ? "<0.001" : fixed(p, 4); }

json test_json(const HypothesisTestResult& t) {
  return {{"statistic", t.statistic},
          {"p_value", t.p_value},
          {"method", std::string(to_string(t.method))},
          {"stars", std::string(significance_stars(t.p_value))},
          {"groups", t.groups}};
}

json diagnostics_json(const DocumentDiagnostics& d) {
  return {{"id", d.id}, {"group", d.group}, {"tokens", d.tokens}, {"oov_tokens", d.oov_tokens},
          {"unique_words", d.unique_words}};
}

json report_json(const ExperimentReport& r) {
  json groups = json::array();
  for (const auto& g : r.groups) {
    json docs = json::array();
    for (const auto& d : g.ranked) docs.push_back({{"id", d.id}, {"similarity", d.similarity}, {"distance", d.distance}});
    groups.push_back({{"label", g.label},
                      {"n", g.summary.n},
                      {"median", g.summary.median},
                      {"q1", g.summary.q1},
                      {"q3", g.summary.q3},
                      {"documents", std::move(docs)}});
  }
  json skipped = json::array();
  for (const auto& s : r.skipped) skipped.push_back({{"id", s.id}, {"group", s.group}, {"reason", s.reason}});
  json pairwise = json::array();
  for (const auto& p : r.pairwise) pairwise.push_back(test_json(p.result));
  json diagnostics = json::array();
  for (const auto& d : r.diagnostics) diagnostics.push_back(diagnostics_json(d));

  const auto& p = r.provenance;
  json provenance = {{"tool_version", p.tool_version},
                     {"embedding_path", p.embedding_path},
                     {"embedding_label", p.embedding_label},
                     {"embedding_sha256", p.embedding_sha256},
                     {"dimension", p.dimension},
                     {"vocabulary_size", p.vocabulary_size},
                     {"stopword_list", p.stopword_list},
                     {"stopword_sha256", p.stopword_sha256},
                     {"variant", p.variant},
                     {"seed", p.seed},
                     {"selector", p.selector},
                     {"quantile_convention", p.quantile_convention},
                     {"alternative", p.alternative}};

  return {{"query", diagnostics_json(r.query_diagnostics)},
          {"groups", std::move(groups)},
          {"skipped", std::move(skipped)},
          {"significance",
           {{"kruskal_wallis", r.omnibus ? test_json(*r.omnibus) : json(nullptr)},
            {"pairwise", std::move(pairwise)},
            {"note", r.significance_note}}},
          {"diagnostics", std::move(diagnostics)},
          {"provenance", std::move(provenance)}};
}

std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

std::string text_report(const ExperimentReport& r) {
  std::ostringstream out;
  out << "Query: " << r.query_id << "  (similarity = 1 - RWMD, variant " << r.provenance.variant << ")\n\n";

  const std::size_t label_width = 8;
  std::vector<std::vector<std::string>> columns;
  std::size_t depth = 0;
  for (const auto& g : r.groups) {
    std::vector<std::string> col = {g.label, "Doc ID - Distance"};
    for (const auto& d : g.ranked) col.push_back(d.id + " - " + fixed(d.similarity, 4));
    col.push_back(fixed(g.summary.median, 4));
    col.push_back("[" + fixed(g.summary.q1, 4) + "-" + fixed(g.summary.q3, 4) + "]");
    depth = std::max(depth, g.ranked.size());
    columns.push_back(std::move(col));
  }
  std::vector<std::size_t> widths;
  for (const auto& c : columns) {
    std::size_t w = 0;
    for (const auto& cell : c) w = std::max(w, cell.size());
    widths.push_back(w + 3);
  }
  auto emit_row = [&](const std::string& label, auto cell_of) {
    std::string line = pad(label, label_width);
    for (std::size_t c = 0; c < columns.size(); ++c) line += pad(cell_of(c), widths[c]);
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out << line << '\n';
  };
  emit_row("", [&](std::size_t c) { return columns[c][0]; });
  emit_row("", [&](std::size_t c) { return columns[c][1]; });
  for (std::size_t i = 0; i < depth; ++i) {
    emit_row("", [&](std::size_t c) {
      const auto& g = r.groups[c];
      return i < g.ranked.size() ? columns[c][2 + i] : std::string();
    });
  }
  emit_row("Median", [&](std::size_t c) { return columns[c][columns[c].size() - 2]; });
  emit_row("[IQR]", [&](std::size_t c) { return columns[c].back(); });

  out << "\nSignificance (*: 0.01 < p <= 0.05, **: p <= 0.01)\n";
  if (!r.omnibus) {
    out << r.significance_note << '\n';
  } else {
    auto line = [&](const std::string& name, const HypothesisTestResult& t) {
      std::string p = format_p(t.p_value) + std::string(significance_stars(t.p_value));
      if (t.method == TestMethod::kNormalApproxTieCorrected) p += "  (" + std::string(to_string(t.method)) + ")";
      out << pad(name, 56) << p << '\n';
    };
    out << pad("", 56) << "p-value\n";
    line("Kruskal-Wallis test", *r.omnibus);
    out << "Pairwise comparisons using Wilcoxon rank sum exact test\n";
    for (const auto& pw : r.pairwise) line(pw.first + " vs " + pw.second, pw.result);
  }

  if (!r.skipped.empty()) {
    out << "\nSkipped documents\n";
    for (const auto& s : r.skipped) out << "  " << s.group << "/" << s.id << ": " << s.reason << '\n';
  }

  const auto& p = r.provenance;
  out << "\nProvenance\n";
  out << "  embedding       " << p.embedding_label << " (" << p.embedding_path << ", d=" << p.dimension
      << ", |V|=" << p.vocabulary_size << ")\n";
  out << "  embedding hash  " << p.embedding_sha256 << '\n';
  out << "  stopwords       " << p.stopword_list << " " << p.stopword_sha256 << '\n';
  out << "  variant         " << p.variant << '\n';
  out << "  selector        " << p.selector << '\n';
  out << "  seed            " << p.seed << '\n';
  out << "  quantiles       " << p.quantile_convention << '\n';
  out << "  alternative     " << p.alternative << '\n';
  out << "  version         " << p.tool_version << '\n';
  return out.str();
}

std::string csv_report(const ExperimentReport& r) {
  std::string out = "group,id,similarity\n";
  auto quote = [](const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += (c == '"') ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  };
  for (const auto& g : r.groups) {
    for (const auto& d : g.ranked) out += quote(g.label) + "," + quote(d.id) + "," + fixed(d.similarity, 6) + "\n";
  }
  return out;
}

}  // namespace

ReportFormat parse_report_format(std::string_view name) {
  if (name == "text") return ReportFormat::kText;
  if (name == "csv") return ReportFormat::kCsv;
  if (name == "json") return ReportFormat::kJson;
  throw ConfigError("unknown report format: " + std::string(name));
}

std::string emit_report(const ExperimentReport& report, ReportFormat format) {
  switch (format) {
    case ReportFormat::kText: return text_report(report);
    case ReportFormat::kCsv: return csv_report(report);
    case ReportFormat::kJson: return report_json(report).dump(2) + "\n";
  }
  throw InvariantError("unhandled report format");
}

}  // namespace claimdist
