#include "doctest.h"
#include "stylemine/tokenize.hpp"

#include <random>

using stylemine::normalize;
using stylemine::normalize_token;
using stylemine::tokenize;
using Tokens = std::vector<std::string>;

TEST_CASE("tokenize splits clitics and punctuation") {
  CHECK(tokenize("It's great!") == Tokens{"It", "'s", "great", "!"});
  CHECK(tokenize("I don't know.") == Tokens{"I", "do", "n't", "know", "."});
  CHECK(tokenize("they're here") == Tokens{"they", "'re", "here"});
  CHECK(tokenize("") == Tokens{});
  CHECK(tokenize("   \t\n ") == Tokens{});
}

TEST_CASE("tokenize keeps hyphenated words and numbers together") {
  CHECK(tokenize("a well-known 3.5 star place, $1,200") ==
        Tokens{"a", "well-known", "3.5", "star", "place", ",", "$", "1,200"});
  CHECK(tokenize("end -- start") == Tokens{"end", "-", "-", "start"});
}

TEST_CASE("tokenize treats non-ascii bytes as word characters") {
  CHECK(tokenize("caf\xc3\xa9 ok") == Tokens{"caf\xc3\xa9", "ok"});
}

TEST_CASE("normalize lowercases and strips inflection") {
  CHECK(normalize({"Dogs", "Running"}) == Tokens{"dog", "run"});
  CHECK(normalize_token("parties") == "party");
  CHECK(normalize_token("boxes") == "box");
  CHECK(normalize_token("classes") == "class");
  CHECK(normalize_token("jumped") == "jump");
  CHECK(normalize_token("was") == "was");
  CHECK(normalize_token("news") == "news");
  CHECK(normalize_token("glass") == "glass");
  CHECK(normalize_token("!") == "!");
  CHECK(normalize_token("") == "");
}

TEST_CASE("normalize is idempotent") {
  std::mt19937 rng(7);
  const std::string letters = "abcdeginrsxyz";
  for (int i = 0; i < 5000; ++i) {
    std::string w;
    const int len = 1 + static_cast<int>(rng() % 10);
    for (int j = 0; j < len; ++j) w += letters[rng() % letters.size()];
    const auto once = normalize_token(w);
    CHECK(normalize_token(once) == once);
  }
  const Tokens words = tokenize("The Cats were running across the muddied fields quickly");
  CHECK(normalize(normalize(words)) == normalize(words));
}
