#include "claimdist/textprep.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <locale>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "claimdist/error.hpp"
#include "claimdist/hash.hpp"

namespace claimdist {

namespace detail {
const std::vector<std::string_view>& english_stopwords();
}

namespace {

// Unicode classification comes from the C.UTF-8 locale's wide ctype facet.
// Without it only ASCII is classified and every other code point is treated
// as a letter that has no case.
class CharClass {
 public:
  CharClass() {
    try {
      locale_ = std::locale("C.UTF-8");
      facet_ = &std::use_facet<std::ctype<wchar_t>>(locale_);
    } catch (const std::runtime_error&) {
      facet_ = nullptr;
    }
  }

  bool is_alnum(char32_t c) const {
    if (c < 0x80) return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
    if (c == 0xFFFD) return false;
    if (!facet_) return true;
    return facet_->is(std::ctype_base::alnum, static_cast<wchar_t>(c));
  }

  char32_t to_lower(char32_t c) const {
    if (c < 0x80) return (c >= 'A' && c <= 'Z') ? c + ('a' - 'A') : c;
    if (!facet_) return c;
    return static_cast<char32_t>(facet_->tolower(static_cast<wchar_t>(c)));
  }

 private:
  std::locale locale_;
  const std::ctype<wchar_t>* facet_ = nullptr;
};

const CharClass& char_class() {
  static const CharClass cc;
  return cc;
}

// Decodes one code point starting at `pos`; malformed input yields U+FFFD and
// consumes a single byte.
char32_t next_code_point(std::string_view s, std::size_t& pos) {
  auto byte = [&](std::size_t i) { return static_cast<unsigned char>(s[i]); };
  unsigned char b0 = byte(pos);
  if (b0 < 0x80) {
    ++pos;
    return b0;
  }
  std::size_t len = 0;
  char32_t cp = 0;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    ++pos;
    return 0xFFFD;
  }
  if (pos + len > s.size()) {
    ++pos;
    return 0xFFFD;
  }
  for (std::size_t k = 1; k < len; ++k) {
    unsigned char b = byte(pos + k);
    if ((b & 0xC0) != 0x80) {
      ++pos;
      return 0xFFFD;
    }
    cp = (cp << 6) | (b & 0x3F);
  }
  static constexpr char32_t kMin[] = {0, 0, 0x80, 0x800, 0x10000};
  if (cp < kMin[len] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
    ++pos;
    return 0xFFFD;
  }
  pos += len;
  return cp;
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

std::string lowercase(std::string_view s) {
  const auto& cc = char_class();
  std::string out;
  out.reserve(s.size());
  std::size_t pos = 0;
  while (pos < s.size()) append_utf8(out, cc.to_lower(next_code_point(s, pos)));
  return out;
}

std::string digest_of(std::vector<std::string> words) {
  std::sort(words.begin(), words.end());
  std::string joined;
  for (const auto& w : words) {
    joined += w;
    joined += '\n';
  }
  return sha256_hex(joined);
}

}  // namespace

std::vector<std::string> normalize_and_tokenize(std::string_view raw) {
  const auto& cc = char_class();
  std::vector<std::string> tokens;
  std::string current;
  std::size_t pos = 0;
  while (pos < raw.size()) {
    char32_t cp = next_code_point(raw, pos);
    if (cc.is_alnum(cp)) {
      append_utf8(current, cc.to_lower(cp));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

std::vector<std::string> remove_stopwords(std::span<const std::string> tokens, const StopwordSet& stopwords) {
  std::vector<std::string> kept;
  kept.reserve(tokens.size());
  for (const auto& t : tokens) {
    if (!stopwords.contains(t)) kept.push_back(t);
  }
  return kept;
}

std::vector<std::string> preprocess(std::string_view raw, const StopwordSet& stopwords) {
  return remove_stopwords(normalize_and_tokenize(raw), stopwords);
}

NBow build_nbow(std::span<const std::string> tokens, const EmbeddingTable& table) {
  NBow bow;
  std::vector<std::size_t> counts;
  std::unordered_map<std::string_view, std::size_t> slot;
  std::size_t retained = 0;
  for (const auto& t : tokens) {
    auto row = table.row_of(t);
    if (!row) {
      ++bow.dropped_tokens;
      continue;
    }
    ++retained;
    auto [it, inserted] = slot.try_emplace(t, bow.words.size());
    if (inserted) {
      bow.words.push_back(t);
      bow.rows.push_back(*row);
      counts.push_back(0);
    }
    ++counts[it->second];
  }
  if (retained == 0) {
    throw EmptyDocument("no token of the document is in the embedding vocabulary (" +
                        std::to_string(bow.dropped_tokens) + " dropped)");
  }
  bow.weights.reserve(counts.size());
  for (auto c : counts) bow.weights.push_back(static_cast<double>(c) / static_cast<double>(retained));
  return bow;
}

NBow NBow::from_weights(const EmbeddingTable& table, std::span<const std::string> words,
                        std::span<const double> weights) {
  if (words.size() != weights.size()) throw std::invalid_argument("NBow: words and weights differ in length");
  if (words.empty()) throw EmptyDocument("NBow: no words");
  NBow bow;
  double total = 0.0;
  for (std::size_t i = 0; i < words.size(); ++i) {
    auto row = table.row_of(words[i]);
    if (!row) throw std::invalid_argument("NBow: out-of-vocabulary word '" + words[i] + "'");
    if (!(weights[i] > 0.0)) throw std::invalid_argument("NBow: weights must be positive");
    if (std::find(bow.rows.begin(), bow.rows.end(), *row) != bow.rows.end()) {
      throw std::invalid_argument("NBow: duplicate word '" + words[i] + "'");
    }
    bow.words.push_back(words[i]);
    bow.rows.push_back(*row);
    total += weights[i];
  }
  for (double w : weights) bow.weights.push_back(w / total);
  return bow;
}

StopwordSet::StopwordSet(std::string name, std::vector<std::string> words) : name_(std::move(name)) {
  for (auto& w : words) words_.insert(std::move(w));
  hash_ = digest_of({words_.begin(), words_.end()});
}

const StopwordSet& StopwordSet::english() {
  static const StopwordSet set = [] {
    const auto& list = detail::english_stopwords();
    return StopwordSet("snowball-english-175", std::vector<std::string>(list.begin(), list.end()));
  }();
  return set;
}

StopwordSet StopwordSet::load(std::istream& in, std::string name) {
  std::vector<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    auto last = line.find_last_not_of(" \t");
    words.push_back(lowercase(std::string_view(line).substr(first, last - first + 1)));
  }
  return StopwordSet(std::move(name), std::move(words));
}

StopwordSet StopwordSet::load_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open stopword file: " + path.string());
  return load(in, path.filename().string());
}

}  // namespace claimdist
