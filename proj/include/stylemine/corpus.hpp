#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace stylemine {

using Tokens = std::vector<std::string>;

// A subject-relation-object triplet as produced by an external scene graph
// parser. Each part is raw surface text; object may be empty.
struct Triplet {
  std::string subject;
  std::string relation;
  std::string object;
};

struct Sentence {
  std::string id;
  std::string style;
  std::string text;
  Tokens tokens;
  std::optional<Tokens> lemmas;
  // Pre-parsed scene entities, in sentence order. Wins over triplets.
  std::optional<std::vector<std::string>> entities;
  std::optional<std::vector<Triplet>> triplets;

  // Lemmas if supplied, otherwise normalize(tokens).
  Tokens normalized_tokens() const;
};

enum class CorpusFormat { kTsv, kJsonLines, kPlainLines };

CorpusFormat parse_corpus_format(std::string_view name);

class Corpus {
 public:
  Corpus() = default;
  // Validates id uniqueness, shared style and lemma lengths.
  Corpus(std::string style, std::vector<Sentence> sentences);

  const std::string& style() const { return style_; }
  const std::vector<Sentence>& sentences() const { return sentences_; }
  std::size_t size() const { return sentences_.size(); }
  bool empty() const { return sentences_.empty(); }

  const Sentence& operator[](std::size_t i) const { return sentences_[i]; }
  // nullptr when absent.
  const Sentence* find(std::string_view id) const;

  auto begin() const { return sentences_.begin(); }
  auto end() const { return sentences_.end(); }

 private:
  std::string style_;
  std::vector<Sentence> sentences_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Loads a corpus. Blank lines are skipped; missing ids become
// "<style>-<zero-based line number>". An empty `style` for json-lines input
// adopts the style of the first record.
Corpus load_corpus(const std::filesystem::path& path, const std::string& style,
                   CorpusFormat format);

// In-memory variant of load_corpus; `origin` names the source in errors.
Corpus parse_corpus(std::string_view content, const std::string& style,
                    CorpusFormat format, const std::string& origin = "<memory>");

std::string sentence_to_json_line(const Sentence& s);
Sentence sentence_from_json_line(std::string_view line);

void save_corpus(const Corpus& corpus, const std::filesystem::path& path);
std::string corpus_to_json_lines(const Corpus& corpus);

// Attaches triplets from a json-lines sidecar {id, triplets: [[s,r,o],...]}.
// Unknown ids are an error.
Corpus attach_triplets(const Corpus& corpus,
                       const std::filesystem::path& sidecar);

}  // namespace stylemine
