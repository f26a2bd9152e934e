#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "stylemine/corpus.hpp"

namespace stylemine {

using Stopwords = std::unordered_set<std::string>;

// Scene entities of one sentence: normalized end nodes of its triplets in
// first-appearance order, without duplicates.
class EntityProfile {
 public:
  EntityProfile() = default;
  // Normalizes nothing; drops repeats after the first occurrence.
  EntityProfile(std::string sentence_id, std::vector<std::string> entities);

  const std::string& sentence_id() const { return sentence_id_; }
  const std::vector<std::string>& entity_seq() const { return seq_; }
  const std::set<std::string>& entity_set() const { return set_; }
  std::size_t size() const { return seq_.size(); }
  bool empty() const { return seq_.empty(); }

  bool operator==(const EntityProfile& other) const {
    return seq_ == other.seq_;
  }

 private:
  std::string sentence_id_;
  std::vector<std::string> seq_;
  std::set<std::string> set_;
};

using ProfileMap = std::unordered_map<std::string, EntityProfile>;

// Normalizes a possibly multi-word entity token-wise and joins with a space.
std::string normalize_entity(std::string_view raw);

// Subjects and objects ordered by where their spans first occur in the
// sentence; relations are discarded. Entities that cannot be located keep
// triplet order after the located ones.
EntityProfile profile_from_triplets(const Sentence& sentence,
                                    const std::vector<Triplet>& triplets);

// Fallback extractor: non-stopword, non-punctuation, non-numeric tokens.
EntityProfile extract_entities_heuristic(const Sentence& sentence,
                                         const Stopwords& stopwords);

const Stopwords& default_stopwords();
Stopwords load_stopwords(const std::filesystem::path& path);

// Picks the best available source per sentence: explicit entities, then
// triplets, then the heuristic.
EntityProfile profile_sentence(const Sentence& sentence,
                               const Stopwords& stopwords);
ProfileMap build_profiles(const Corpus& corpus, const Stopwords& stopwords);

}  // namespace stylemine
