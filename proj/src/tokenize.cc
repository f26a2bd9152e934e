#include "stylemine/tokenize.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <string>
#include <unordered_set>

namespace stylemine {
namespace {

bool is_space(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

bool is_word_char(unsigned char c) { return std::isalnum(c) || c >= 0x80; }
bool is_digit(unsigned char c) { return c >= '0' && c <= '9'; }
bool is_alpha(unsigned char c) { return std::isalpha(c) || c >= 0x80; }

constexpr std::array<std::string_view, 6> kClitics = {"s", "re", "ve",
                                                      "ll", "d", "m"};

bool is_clitic(std::string_view tail) {
  const std::string lower = to_lower_ascii(tail);
  return std::find(kClitics.begin(), kClitics.end(), lower) != kClitics.end();
}

// Scans one whitespace-free chunk.
void tokenize_chunk(std::string_view chunk, std::vector<std::string>& out) {
  std::size_t i = 0;
  const std::size_t n = chunk.size();
  auto at = [&](std::size_t j) -> unsigned char {
    return j < n ? static_cast<unsigned char>(chunk[j]) : 0;
  };
  while (i < n) {
    const unsigned char c = at(i);
    if (!is_word_char(c)) {
      // Clitic after a word was handled below; a bare apostrophe lands here.
      out.emplace_back(1, static_cast<char>(c));
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < n) {
      const unsigned char d = at(j);
      if (is_word_char(d)) {
        ++j;
      } else if ((d == '.' || d == ',') && is_digit(at(j - 1)) &&
                 is_digit(at(j + 1))) {
        j += 1;
      } else if (d == '-' && is_word_char(at(j - 1)) &&
                 is_word_char(at(j + 1))) {
        j += 1;
      } else {
        break;
      }
    }
    std::string_view word = chunk.substr(i, j - i);
    if (at(j) == '\'' && is_alpha(at(j + 1))) {
      std::size_t k = j + 1;
      while (k < n && is_alpha(at(k))) ++k;
      std::string_view tail = chunk.substr(j + 1, k - j - 1);
      const std::string lower_tail = to_lower_ascii(tail);
      if (lower_tail == "t" && word.size() > 1 &&
          (word.back() == 'n' || word.back() == 'N')) {
        // don't -> do n't
        out.emplace_back(word.substr(0, word.size() - 1));
        out.emplace_back(std::string(chunk.substr(j - 1, k - j + 1)));
        i = k;
        continue;
      }
      if (is_clitic(tail)) {
        out.emplace_back(word);
        out.emplace_back(std::string(chunk.substr(j, k - j)));
        i = k;
        continue;
      }
    }
    out.emplace_back(word);
    i = j;
  }
}

const std::unordered_set<std::string>& stem_exceptions() {
  static const std::unordered_set<std::string> kWords = {
      "this",    "was",      "is",        "has",      "his",     "hers",
      "its",     "yes",      "us",        "bus",      "gas",     "news",
      "series",  "species",  "always",    "perhaps",  "thus",    "less",
      "unless",  "various",  "during",    "thing",    "something",
      "nothing", "anything", "everything", "king",    "ring",    "sing",
      "bring",   "spring",   "string",    "morning",  "evening", "red",
      "bed",     "need",     "feed",      "seed",     "speed",   "hundred",
      "led",     "fed",      "shed",      "does",     "goes",    "analysis",
      "basis",   "crisis",   "christmas", "texas",    "ceiling", "wedding",
      "ping",    "wing",     "sibling",   "pudding",  "bedding", "sled"};
  return kWords;
}

bool has_vowel(std::string_view s) {
  return s.find_first_of("aeiouy") != std::string_view::npos;
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() &&
         s.substr(s.size() - suffix.size()) == suffix;
}

// running -> runn -> run; keeps ll / ss / zz.
std::string undouble(std::string stem) {
  const std::size_t n = stem.size();
  if (n >= 2 && stem[n - 1] == stem[n - 2]) {
    const char c = stem[n - 1];
    if (std::string_view("aeioulsz").find(c) == std::string_view::npos) {
      stem.pop_back();
    }
  }
  return stem;
}

// One suffix-stripping step; returns the input when no rule applies.
std::string stem_once(const std::string& w) {
  if (w.size() <= 3 || stem_exceptions().count(w)) return w;
  if (!std::all_of(w.begin(), w.end(), [](unsigned char c) {
        return std::islower(c) != 0;
      })) {
    return w;
  }
  if (ends_with(w, "ies") && w.size() > 4) {
    return w.substr(0, w.size() - 3) + "y";
  }
  if (ends_with(w, "sses")) return w.substr(0, w.size() - 2);
  if (ends_with(w, "es")) {
    const std::string stem = w.substr(0, w.size() - 2);
    if (ends_with(stem, "s") || ends_with(stem, "x") || ends_with(stem, "z") ||
        ends_with(stem, "ch") || ends_with(stem, "sh")) {
      return stem;
    }
  }
  if (ends_with(w, "s") && !ends_with(w, "ss") && !ends_with(w, "us") &&
      !ends_with(w, "is")) {
    return w.substr(0, w.size() - 1);
  }
  if (ends_with(w, "ing")) {
    const std::string stem = w.substr(0, w.size() - 3);
    if (stem.size() >= 3 && has_vowel(stem)) return undouble(stem);
  }
  if (ends_with(w, "ed")) {
    const std::string stem = w.substr(0, w.size() - 2);
    if (stem.size() >= 3 && has_vowel(stem) && !ends_with(stem, "e")) {
      return undouble(stem);
    }
  }
  return w;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(static_cast<unsigned char>(text[i]))) {
      ++i;
    }
    std::size_t j = i;
    while (j < text.size() && !is_space(static_cast<unsigned char>(text[j]))) {
      ++j;
    }
    if (j > i) tokenize_chunk(text.substr(i, j - i), out);
    i = j;
  }
  return out;
}

std::string to_lower_ascii(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::string normalize_token(std::string_view token) {
  std::string current = to_lower_ascii(token);
  // Each step strictly shortens the word, so this terminates.
  for (;;) {
    std::string next = stem_once(current);
    if (next == current) return current;
    current = std::move(next);
  }
}

std::vector<std::string> normalize(const std::vector<std::string>& tokens) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(normalize_token(t));
  return out;
}

bool is_punctuation(std::string_view token) {
  return !token.empty() &&
         std::none_of(token.begin(), token.end(), [](unsigned char c) {
           return is_word_char(c);
         });
}

bool is_numeric(std::string_view token) {
  bool digit = false;
  for (unsigned char c : token) {
    if (is_digit(c)) {
      digit = true;
    } else if (c != '.' && c != ',' && c != '-' && c != '%') {
      return false;
    }
  }
  return digit;
}

}  // namespace stylemine
