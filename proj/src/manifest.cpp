#include "claimdist/manifest.hpp"

#include <algorithm>
#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "claimdist/error.hpp"

namespace claimdist {

using nlohmann::json;

namespace {

void check_keys(const json& obj, std::initializer_list<std::string_view> allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError("unknown key '" + key + "' in " + where);
    }
  }
}

template <typename T>
T get(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) throw ConfigError("missing '" + std::string(key) + "' in " + where);
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("'" + std::string(key) + "' in " + where + " has the wrong type");
  }
}

template <typename T>
T get_or(const json& obj, const char* key, T fallback, const std::string& where) {
  if (!obj.contains(key) || obj.at(key).is_null()) return fallback;
  return get<T>(obj, key, where);
}

std::string nonempty_string(const json& obj, const char* key, const std::string& where) {
  auto s = get<std::string>(obj, key, where);
  if (s.empty()) throw ConfigError("'" + std::string(key) + "' in " + where + " must not be empty");
  return s;
}

SelectorConfig parse_selector(const json& j, std::uint64_t default_seed) {
  const std::string where = "query.selector";
  check_keys(j, {"kind", "top_k", "topics", "alpha", "beta", "iterations", "seed", "cue_words", "window"}, where);
  SelectorConfig sel;
  auto kind = get<std::string>(j, "kind", where);
  if (kind == "lda") {
    sel.kind = SelectorConfig::Kind::kLda;
  } else if (kind == "ma") {
    sel.kind = SelectorConfig::Kind::kMovingAverage;
  } else {
    throw ConfigError("query.selector.kind must be \"lda\" or \"ma\", got \"" + kind + "\"");
  }
  sel.top_k = get_or<std::size_t>(j, "top_k", sel.top_k, where);
  sel.lda.topics = get_or<std::size_t>(j, "topics", sel.lda.topics, where);
  sel.lda.alpha = get_or<double>(j, "alpha", sel.lda.alpha, where);
  sel.lda.beta = get_or<double>(j, "beta", sel.lda.beta, where);
  sel.lda.iterations = get_or<std::size_t>(j, "iterations", sel.lda.iterations, where);
  sel.lda.seed = get_or<std::uint64_t>(j, "seed", default_seed, where);
  sel.window = get_or<std::size_t>(j, "window", sel.window, where);
  sel.cue_words = get_or<std::vector<std::string>>(j, "cue_words", sel.cue_words, where);
  if (sel.top_k < 1) throw ConfigError("query.selector.top_k must be at least 1");
  if (sel.kind == SelectorConfig::Kind::kMovingAverage && sel.window % 2 == 0) {
    throw ConfigError("query.selector.window must be odd");
  }
  return sel;
}

}  // namespace

std::string SelectorConfig::describe() const {
  std::ostringstream out;
  if (kind == Kind::kLda) {
    out << "lda(topics=" << lda.topics << ", alpha=" << lda.alpha << ", beta=" << lda.beta
        << ", iterations=" << lda.iterations << ", seed=" << lda.seed << ", top_k=" << top_k << ", cues=";
    for (std::size_t i = 0; i < cue_words.size(); ++i) out << (i ? "|" : "") << cue_words[i];
    out << ")";
  } else {
    out << "ma(window=" << window << ", top_k=" << top_k << ")";
  }
  return out.str();
}

CorpusManifest CorpusManifest::parse(std::string_view json_text, const std::filesystem::path& base_dir) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("manifest is not valid JSON: ") + e.what());
  }
  check_keys(root, {"query", "groups", "documents", "embedding", "options"}, "manifest");

  CorpusManifest m;
  m.base_dir = base_dir;

  if (root.contains("options")) {
    const auto& o = root.at("options");
    check_keys(o, {"variant", "stopwords", "seed"}, "options");
    m.options.variant = parse_variant(get_or<std::string>(o, "variant", "symmetric-max", "options"));
    if (o.contains("stopwords") && !o.at("stopwords").is_null()) {
      m.options.stopwords = std::filesystem::path(nonempty_string(o, "stopwords", "options"));
    }
    m.options.seed = get_or<std::uint64_t>(o, "seed", m.options.seed, "options");
  }

  if (!root.contains("query")) throw ConfigError("manifest has no 'query'");
  const auto& q = root.at("query");
  check_keys(q, {"id", "path", "selector"}, "query");
  m.query.id = nonempty_string(q, "id", "query");
  m.query.path = nonempty_string(q, "path", "query");
  if (q.contains("selector") && !q.at("selector").is_null()) {
    m.query.selector = parse_selector(q.at("selector"), m.options.seed);
  }

  if (!root.contains("embedding")) throw ConfigError("manifest has no 'embedding'");
  const auto& e = root.at("embedding");
  check_keys(e, {"path", "expected_dim", "label"}, "embedding");
  m.embedding.path = nonempty_string(e, "path", "embedding");
  if (e.contains("expected_dim") && !e.at("expected_dim").is_null()) {
    auto dim = get<std::size_t>(e, "expected_dim", "embedding");
    if (dim == 0) throw ConfigError("embedding.expected_dim must be positive");
    m.embedding.expected_dim = dim;
  }
  m.embedding.label = get_or<std::string>(e, "label", "", "embedding");

  const bool declared = root.contains("groups");
  if (declared) {
    m.groups = get<std::vector<std::string>>(root, "groups", "manifest");
    std::set<std::string> seen;
    for (const auto& g : m.groups) {
      if (g.empty()) throw ConfigError("empty group label in 'groups'");
      if (!seen.insert(g).second) throw ConfigError("group '" + g + "' declared twice");
    }
  }

  if (!root.contains("documents") || !root.at("documents").is_array()) {
    throw ConfigError("manifest needs a 'documents' array");
  }
  std::set<std::pair<std::string, std::string>> ids;
  std::size_t index = 0;
  for (const auto& d : root.at("documents")) {
    const std::string where = "documents[" + std::to_string(index++) + "]";
    check_keys(d, {"id", "group", "path"}, where);
    DocumentSpec doc;
    doc.id = nonempty_string(d, "id", where);
    doc.group = get<std::string>(d, "group", where);
    doc.path = nonempty_string(d, "path", where);
    if (doc.group.empty()) throw ConfigError("document '" + doc.id + "' has an empty group");
    if (doc.group == "query") throw ConfigError("document '" + doc.id + "' uses the reserved group 'query'");
    if (declared && std::find(m.groups.begin(), m.groups.end(), doc.group) == m.groups.end()) {
      throw ConfigError("document '" + doc.id + "' has unknown group '" + doc.group + "'");
    }
    if (!declared && std::find(m.groups.begin(), m.groups.end(), doc.group) == m.groups.end()) {
      m.groups.push_back(doc.group);
    }
    if (!ids.emplace(doc.group, doc.id).second) {
      throw ConfigError("duplicate document id '" + doc.id + "' in group '" + doc.group + "'");
    }
    m.documents.push_back(std::move(doc));
  }
  if (m.documents.empty()) throw ConfigError("manifest lists no documents");
  for (const auto& g : m.groups) {
    bool used = std::any_of(m.documents.begin(), m.documents.end(), [&](const auto& d) { return d.group == g; });
    if (!used) throw ConfigError("group '" + g + "' has no documents");
  }
  return m;
}

CorpusManifest CorpusManifest::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open manifest: " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path.parent_path());
}

std::filesystem::path CorpusManifest::resolve(const std::filesystem::path& p) const {
  return p.is_absolute() ? p : base_dir / p;
}

}  // namespace claimdist
