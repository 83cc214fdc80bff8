#include <doctest.h>

#include "claimdist/error.hpp"
#include "claimdist/manifest.hpp"
#include "support.hpp"

using namespace claimdist;

namespace {

std::string with_documents(const std::string& docs, const std::string& extra = "") {
  return R"({"query": {"id": "q", "path": "q.txt"}, "embedding": {"path": "v.txt"}, "documents": )" + docs + extra +
         "}";
}

std::string error_of(const std::string& json) {
  try {
    CorpusManifest::parse(json, "/base");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("manifest parses the documented schema") {
  const std::string text = R"({
    "query": {"id": "h-index-query", "path": "q.txt",
              "selector": {"kind": "lda", "top_k": 4, "topics": 3, "alpha": 0.2, "beta": 0.02,
                           "iterations": 50, "seed": 9, "cue_words": ["propose"]}},
    "groups": ["h", "s"],
    "documents": [{"id": "1", "group": "s", "path": "d/1.txt"}, {"id": "1", "group": "h", "path": "d/2.txt"}],
    "embedding": {"path": "glove.txt", "expected_dim": 50, "label": "glove.6B.50d"},
    "options": {"variant": "one-sided-query", "stopwords": "stop.txt", "seed": 5}
  })";
  auto m = CorpusManifest::parse(text, "/base");
  CHECK(m.query.id == "h-index-query");
  REQUIRE(m.query.selector);
  CHECK(m.query.selector->kind == SelectorConfig::Kind::kLda);
  CHECK(m.query.selector->top_k == 4);
  CHECK(m.query.selector->lda.topics == 3);
  CHECK(m.query.selector->lda.seed == 9);
  CHECK(m.query.selector->cue_words == std::vector<std::string>{"propose"});
  CHECK(m.groups == std::vector<std::string>{"h", "s"});
  CHECK(m.documents.size() == 2);
  CHECK(m.embedding.expected_dim == 50u);
  CHECK(m.embedding.label == "glove.6B.50d");
  CHECK(m.options.variant == Variant::kOneSidedQuery);
  REQUIRE(m.options.stopwords);
  CHECK(m.options.seed == 5);
  CHECK(m.resolve("d/1.txt") == std::filesystem::path("/base/d/1.txt"));
  CHECK(m.resolve("/abs/x.txt") == std::filesystem::path("/abs/x.txt"));
  CHECK_FALSE(m.query.selector->describe().empty());
}

TEST_CASE("groups default to first appearance") {
  auto m = CorpusManifest::parse(
      with_documents(R"([{"id": "a", "group": "y", "path": "a"}, {"id": "b", "group": "x", "path": "b"}])"), "/");
  CHECK(m.groups == std::vector<std::string>{"y", "x"});
  CHECK(m.options.variant == Variant::kSymmetricMax);
  CHECK_FALSE(m.query.selector);
}

TEST_CASE("manifest errors name what is wrong") {
  CHECK(error_of(with_documents(R"([{"id": "7", "group": "h", "path": "a"}, {"id": "7", "group": "h", "path": "b"}])"))
            .find("'7'") != std::string::npos);
  CHECK(error_of(with_documents(R"([{"id": "7", "group": "h", "path": "a", "extra": 1}])")).find("extra") !=
        std::string::npos);
  CHECK(error_of(with_documents(R"([{"id": "7", "group": "zz", "path": "a"}])", R"(, "groups": ["h"])"))
            .find("zz") != std::string::npos);
  CHECK(error_of(with_documents(R"([{"id": "7", "group": "h", "path": "a"}])", R"(, "groups": ["h", "empty"])"))
            .find("empty") != std::string::npos);
  CHECK(error_of(with_documents(R"([{"id": "7", "group": "query", "path": "a"}])")).find("query") !=
        std::string::npos);
  CHECK_FALSE(error_of(with_documents("[]")).empty());
  CHECK_FALSE(error_of("{not json").empty());
  CHECK_FALSE(error_of(R"({"embedding": {"path": "v"}, "documents": []})").empty());
  CHECK_FALSE(error_of(with_documents(R"([{"id": "7", "group": "h", "path": "a"}])",
                                      R"(, "options": {"variant": "fastest"})"))
                  .empty());
  CHECK_FALSE(error_of(with_documents(R"([{"id": "7", "group": "h", "path": 3}])")).empty());
  CHECK_FALSE(error_of(R"({"query": {"id": "q", "path": "q.txt", "selector": {"kind": "ma", "window": 4}},
                           "embedding": {"path": "v"}, "documents": [{"id": "1", "group": "h", "path": "a"}]})")
                  .empty());
  CHECK_THROWS_AS(CorpusManifest::load("/nonexistent/manifest.json"), ConfigError);
}
