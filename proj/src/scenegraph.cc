#include "stylemine/scenegraph.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <numeric>

#include "stylemine/error.hpp"
#include "stylemine/tokenize.hpp"

namespace stylemine {
namespace {

// Index of the first occurrence of `needle` in `hay`, or npos.
std::size_t find_subsequence(const Tokens& hay, const Tokens& needle) {
  if (needle.empty() || needle.size() > hay.size()) return Tokens::size_type(-1);
  auto it = std::search(hay.begin(), hay.end(), needle.begin(), needle.end());
  return it == hay.end() ? Tokens::size_type(-1)
                         : static_cast<std::size_t>(it - hay.begin());
}

}  // namespace

EntityProfile::EntityProfile(std::string sentence_id,
                             std::vector<std::string> entities)
    : sentence_id_(std::move(sentence_id)) {
  seq_.reserve(entities.size());
  for (auto& e : entities) {
    if (e.empty()) continue;
    if (set_.insert(e).second) seq_.push_back(std::move(e));
  }
}

std::string normalize_entity(std::string_view raw) {
  const Tokens lemmas = normalize(tokenize(raw));
  std::string out;
  for (const auto& t : lemmas) {
    if (!out.empty()) out += ' ';
    out += t;
  }
  return out;
}

EntityProfile profile_from_triplets(const Sentence& sentence,
                                    const std::vector<Triplet>& triplets) {
  const Tokens sentence_lemmas = sentence.normalized_tokens();
  constexpr std::size_t kUnplaced = std::numeric_limits<std::size_t>::max();

  struct Placed {
    std::size_t position;
    std::size_t order;
    std::string entity;
  };
  std::vector<Placed> placed;
  std::size_t order = 0;
  auto add = [&](const std::string& raw) {
    const Tokens lemmas = normalize(tokenize(raw));
    if (lemmas.empty()) return;
    std::size_t pos = find_subsequence(sentence_lemmas, lemmas);
    if (pos == Tokens::size_type(-1)) pos = kUnplaced;
    std::string joined;
    for (const auto& t : lemmas) {
      if (!joined.empty()) joined += ' ';
      joined += t;
    }
    placed.push_back({pos, order++, std::move(joined)});
  };
  for (const auto& t : triplets) {
    add(t.subject);
    if (!t.object.empty()) add(t.object);
  }
  std::stable_sort(placed.begin(), placed.end(),
                   [](const Placed& a, const Placed& b) {
                     if (a.position != b.position) return a.position < b.position;
                     return a.order < b.order;
                   });
  std::vector<std::string> entities;
  entities.reserve(placed.size());
  for (auto& p : placed) entities.push_back(std::move(p.entity));
  return EntityProfile(sentence.id, std::move(entities));
}

EntityProfile extract_entities_heuristic(const Sentence& sentence,
                                         const Stopwords& stopwords) {
  const Tokens lemmas = sentence.normalized_tokens();
  std::vector<std::string> entities;
  for (std::size_t i = 0; i < sentence.tokens.size(); ++i) {
    const std::string& tok = sentence.tokens[i];
    if (is_punctuation(tok) || is_numeric(tok)) continue;
    if (stopwords.count(to_lower_ascii(tok)) || stopwords.count(lemmas[i])) {
      continue;
    }
    entities.push_back(lemmas[i]);
  }
  return EntityProfile(sentence.id, std::move(entities));
}

const Stopwords& default_stopwords() {
  static const Stopwords kWords = {
      "i", "me", "my", "myself", "we", "our", "ours", "ourselves", "you",
      "your", "yours", "yourself", "yourselves", "he", "him", "his",
      "himself", "she", "her", "hers", "herself", "it", "its", "itself",
      "they", "them", "their", "theirs", "themselves", "what", "which", "who",
      "whom", "this", "that", "these", "those", "am", "is", "are", "was",
      "were", "be", "been", "being", "have", "has", "had", "having", "do",
      "does", "did", "doing", "a", "an", "the", "and", "but", "if", "or",
      "because", "as", "until", "while", "of", "at", "by", "for", "with",
      "about", "against", "between", "into", "through", "during", "before",
      "after", "above", "below", "to", "from", "up", "down", "in", "out",
      "on", "off", "over", "under", "again", "further", "then", "once",
      "here", "there", "when", "where", "why", "how", "all", "any", "both",
      "each", "few", "more", "most", "other", "some", "such", "no", "nor",
      "not", "only", "own", "same", "so", "than", "too", "very", "s", "t",
      "can", "will", "just", "don", "should", "now", "d", "ll", "m", "o",
      "re", "ve", "y", "'s", "n't", "'re", "'ve", "'ll", "'d", "'m", "would",
      "could", "also", "get", "got", "really", "us"};
  return kWords;
}

Stopwords load_stopwords(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open stopword list " + path.string());
  Stopwords out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto b = line.find_first_not_of(" \t");
    if (b == std::string::npos || line[b] == '#') continue;
    const auto e = line.find_last_not_of(" \t");
    out.insert(to_lower_ascii(line.substr(b, e - b + 1)));
  }
  return out;
}

EntityProfile profile_sentence(const Sentence& sentence,
                               const Stopwords& stopwords) {
  if (sentence.entities) {
    std::vector<std::string> entities;
    for (const auto& e : *sentence.entities) {
      std::string n = normalize_entity(e);
      if (!n.empty()) entities.push_back(std::move(n));
    }
    return EntityProfile(sentence.id, std::move(entities));
  }
  if (sentence.triplets) return profile_from_triplets(sentence, *sentence.triplets);
  return extract_entities_heuristic(sentence, stopwords);
}

ProfileMap build_profiles(const Corpus& corpus, const Stopwords& stopwords) {
  ProfileMap out;
  out.reserve(corpus.size());
  for (const auto& s : corpus) out.emplace(s.id, profile_sentence(s, stopwords));
  return out;
}

}  // namespace stylemine
