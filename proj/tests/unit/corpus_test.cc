#include "doctest.h"
#include "stylemine/corpus.hpp"
#include "stylemine/error.hpp"

#include <filesystem>
#include <fstream>

using namespace stylemine;

TEST_CASE("plain lines get generated ids and skip blank lines") {
  const Corpus c = parse_corpus("good food\n\n  \ngreat staff\n", "positive",
                                CorpusFormat::kPlainLines);
  REQUIRE(c.size() == 2);
  CHECK(c[0].id == "positive-0");
  CHECK(c[1].id == "positive-3");
  CHECK(c[1].tokens == Tokens{"great", "staff"});
  CHECK(c[0].style == "positive");
  CHECK(c.find("positive-3") == &c[1]);
  CHECK(c.find("nope") == nullptr);
}

TEST_CASE("tsv needs exactly one tab") {
  const Corpus c = parse_corpus("a1\tthe soup was cold\r\n", "negative",
                                CorpusFormat::kTsv);
  CHECK(c[0].id == "a1");
  CHECK(c[0].text == "the soup was cold");
  CHECK_THROWS_WITH_AS(parse_corpus("x\n", "n", CorpusFormat::kTsv, "f.tsv"),
                       doctest::Contains("f.tsv:1"), InputError);
  CHECK_THROWS_AS(parse_corpus("x\ty\tz\n", "n", CorpusFormat::kTsv), InputError);
}

TEST_CASE("duplicate ids are rejected") {
  CHECK_THROWS_WITH_AS(
      parse_corpus("a\tone\na\ttwo\n", "s", CorpusFormat::kTsv),
      doctest::Contains("duplicate id a"), InputError);
}

TEST_CASE("json-lines round trip preserves every field") {
  const std::string line =
      R"({"id":"s1","style":"formal","text":"Dogs bark loudly","tokens":["Dogs","bark","loudly"],)"
      R"("lemmas":["dog","bark","loudly"],"entities":["dog"],"triplets":[["Dogs","bark",""]]})";
  const Corpus c = parse_corpus(line + "\n", "", CorpusFormat::kJsonLines);
  CHECK(c.style() == "formal");
  const Sentence& s = c[0];
  CHECK(s.normalized_tokens() == Tokens{"dog", "bark", "loudly"});
  REQUIRE(s.triplets);
  CHECK((*s.triplets)[0].subject == "Dogs");
  CHECK((*s.triplets)[0].object.empty());

  const Corpus again = parse_corpus(corpus_to_json_lines(c), "", CorpusFormat::kJsonLines);
  CHECK(corpus_to_json_lines(again) == corpus_to_json_lines(c));
  CHECK(again[0].entities == s.entities);
}

TEST_CASE("json-lines schema errors name the field and line") {
  CHECK_THROWS_WITH_AS(parse_corpus("{\"id\":\"a\"}\n", "s", CorpusFormat::kJsonLines, "c.jsonl"),
                       doctest::Contains("c.jsonl:1: missing string field 'text'"), InputError);
  CHECK_THROWS_WITH_AS(parse_corpus("\n{bad\n", "s", CorpusFormat::kJsonLines, "c.jsonl"),
                       doctest::Contains("c.jsonl:2"), InputError);
  CHECK_THROWS_WITH_AS(
      parse_corpus(R"({"text":"a b","tokens":["a","b"],"lemmas":["a"]})", "s",
                   CorpusFormat::kJsonLines),
      doctest::Contains("lemmas"), InputError);
  CHECK_THROWS_WITH_AS(
      parse_corpus(R"({"text":"a","style":"x"})", "y", CorpusFormat::kJsonLines),
      doctest::Contains("does not match"), InputError);
}

TEST_CASE("triplet sidecar attaches by id") {
  const auto dir = std::filesystem::temp_directory_path() / "stylemine_corpus_test";
  std::filesystem::create_directories(dir);
  const Corpus c = parse_corpus("a\tthe cat sat on the mat\n", "s", CorpusFormat::kTsv);
  {
    std::ofstream(dir / "ok.jsonl") << R"({"id":"a","triplets":[["cat","sit on","mat"]]})" << "\n";
    std::ofstream(dir / "bad.jsonl") << R"({"id":"zz","triplets":[]})" << "\n";
  }
  const Corpus with = attach_triplets(c, dir / "ok.jsonl");
  REQUIRE(with[0].triplets);
  CHECK(with[0].triplets->size() == 1);
  CHECK_THROWS_WITH_AS(attach_triplets(c, dir / "bad.jsonl"),
                       doctest::Contains("unknown id zz"), InputError);
  CHECK_THROWS_AS(load_corpus(dir / "missing.txt", "s", CorpusFormat::kPlainLines),
                  InputError);
  std::filesystem::remove_all(dir);
}
