#include "stylemine/corpus.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "stylemine/error.hpp"
#include "stylemine/tokenize.hpp"

namespace stylemine {
namespace {

using nlohmann::json;

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool is_blank(std::string_view line) {
  return line.find_first_not_of(" \t\r\n") == std::string_view::npos;
}

std::string_view strip_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

Tokens string_list(const json& j, const char* field, std::size_t line_no,
                   const std::string& origin) {
  if (!j.is_array()) {
    throw InputError(origin + ":" + std::to_string(line_no) + ": field '" +
                     field + "' must be an array of strings");
  }
  Tokens out;
  out.reserve(j.size());
  for (const auto& v : j) {
    if (!v.is_string()) {
      throw InputError(origin + ":" + std::to_string(line_no) + ": field '" +
                       field + "' must be an array of strings");
    }
    out.push_back(v.get<std::string>());
  }
  return out;
}

std::vector<Triplet> parse_triplets(const json& j, std::size_t line_no,
                                    const std::string& origin) {
  const std::string where = origin + ":" + std::to_string(line_no);
  if (!j.is_array()) throw InputError(where + ": 'triplets' must be an array");
  std::vector<Triplet> out;
  for (const auto& t : j) {
    if (!t.is_array() || t.size() < 2 || t.size() > 3) {
      throw InputError(where + ": each triplet must be [subject, relation, object]");
    }
    for (const auto& part : t) {
      if (!part.is_string()) throw InputError(where + ": triplet parts must be strings");
    }
    Triplet trip{t[0].get<std::string>(), t[1].get<std::string>(),
                 t.size() == 3 ? t[2].get<std::string>() : std::string()};
    if (trip.subject.empty()) throw InputError(where + ": empty triplet subject");
    out.push_back(std::move(trip));
  }
  return out;
}

Sentence sentence_from_json(const json& j, std::size_t line_no,
                            const std::string& origin) {
  const std::string where = origin + ":" + std::to_string(line_no);
  if (!j.is_object()) throw InputError(where + ": expected a json object");
  Sentence s;
  if (auto it = j.find("id"); it != j.end() && !it->is_null()) {
    if (!it->is_string()) throw InputError(where + ": 'id' must be a string");
    s.id = it->get<std::string>();
  }
  if (auto it = j.find("style"); it != j.end() && !it->is_null()) {
    if (!it->is_string()) throw InputError(where + ": 'style' must be a string");
    s.style = it->get<std::string>();
  }
  auto text = j.find("text");
  if (text == j.end() || !text->is_string()) {
    throw InputError(where + ": missing string field 'text'");
  }
  s.text = text->get<std::string>();
  if (auto it = j.find("tokens"); it != j.end() && !it->is_null()) {
    s.tokens = string_list(*it, "tokens", line_no, origin);
  } else {
    s.tokens = tokenize(s.text);
  }
  if (auto it = j.find("lemmas"); it != j.end() && !it->is_null()) {
    s.lemmas = string_list(*it, "lemmas", line_no, origin);
    if (s.lemmas->size() != s.tokens.size()) {
      throw InputError(where + ": 'lemmas' length differs from 'tokens'");
    }
  }
  if (auto it = j.find("entities"); it != j.end() && !it->is_null()) {
    s.entities = string_list(*it, "entities", line_no, origin);
  }
  if (auto it = j.find("triplets"); it != j.end() && !it->is_null()) {
    s.triplets = parse_triplets(*it, line_no, origin);
  }
  return s;
}

json sentence_json(const Sentence& s) {
  json j;
  j["id"] = s.id;
  j["style"] = s.style;
  j["text"] = s.text;
  j["tokens"] = s.tokens;
  if (s.lemmas) j["lemmas"] = *s.lemmas;
  if (s.entities) j["entities"] = *s.entities;
  if (s.triplets) {
    json arr = json::array();
    for (const auto& t : *s.triplets) {
      arr.push_back({t.subject, t.relation, t.object});
    }
    j["triplets"] = std::move(arr);
  }
  return j;
}

}  // namespace

Tokens Sentence::normalized_tokens() const {
  if (lemmas) return *lemmas;
  return normalize(tokens);
}

CorpusFormat parse_corpus_format(std::string_view name) {
  if (name == "tsv") return CorpusFormat::kTsv;
  if (name == "json-lines" || name == "jsonl") return CorpusFormat::kJsonLines;
  if (name == "plain-lines" || name == "plain") return CorpusFormat::kPlainLines;
  throw InputError("unknown corpus format '" + std::string(name) + "'");
}

Corpus::Corpus(std::string style, std::vector<Sentence> sentences)
    : style_(std::move(style)), sentences_(std::move(sentences)) {
  index_.reserve(sentences_.size());
  for (std::size_t i = 0; i < sentences_.size(); ++i) {
    auto& s = sentences_[i];
    if (s.id.empty()) throw InputError("sentence without id");
    if (s.style.empty()) s.style = style_;
    if (s.style != style_) {
      throw InputError("sentence " + s.id + " has style '" + s.style +
                       "', corpus style is '" + style_ + "'");
    }
    if (s.lemmas && s.lemmas->size() != s.tokens.size()) {
      throw InputError("sentence " + s.id + ": lemmas length differs from tokens");
    }
    if (!index_.emplace(s.id, i).second) {
      throw InputError("duplicate id " + s.id);
    }
  }
}

const Sentence* Corpus::find(std::string_view id) const {
  auto it = index_.find(std::string(id));
  return it == index_.end() ? nullptr : &sentences_[it->second];
}

Corpus parse_corpus(std::string_view content, const std::string& style,
                    CorpusFormat format, const std::string& origin) {
  std::vector<Sentence> sentences;
  std::string corpus_style = style;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < content.size()) {
    std::size_t end = content.find('\n', pos);
    if (end == std::string_view::npos) end = content.size();
    const std::string_view line = strip_cr(content.substr(pos, end - pos));
    pos = end + 1;
    const std::size_t index = line_no++;
    if (is_blank(line)) continue;
    const std::string where = origin + ":" + std::to_string(index + 1);

    Sentence s;
    switch (format) {
      case CorpusFormat::kPlainLines:
        s.text = std::string(line);
        s.tokens = tokenize(s.text);
        break;
      case CorpusFormat::kTsv: {
        const std::size_t tab = line.find('\t');
        if (tab == std::string_view::npos) {
          throw InputError(where + ": malformed line, expected id<TAB>text");
        }
        s.id = std::string(line.substr(0, tab));
        s.text = std::string(line.substr(tab + 1));
        if (s.text.find('\t') != std::string::npos) {
          throw InputError(where + ": malformed line, more than one tab");
        }
        s.tokens = tokenize(s.text);
        break;
      }
      case CorpusFormat::kJsonLines: {
        json j;
        try {
          j = json::parse(line);
        } catch (const json::parse_error& e) {
          throw InputError(where + ": malformed json: " + e.what());
        }
        s = sentence_from_json(j, index + 1, origin);
        if (corpus_style.empty()) corpus_style = s.style;
        break;
      }
    }
    if (s.id.empty()) s.id = corpus_style + "-" + std::to_string(index);
    if (s.style.empty()) s.style = corpus_style;
    if (!corpus_style.empty() && s.style != corpus_style) {
      throw InputError(where + ": style '" + s.style +
                       "' does not match corpus style '" + corpus_style + "'");
    }
    sentences.push_back(std::move(s));
  }
  return Corpus(corpus_style, std::move(sentences));
}

Corpus load_corpus(const std::filesystem::path& path, const std::string& style,
                   CorpusFormat format) {
  return parse_corpus(read_file(path), style, format, path.string());
}

std::string sentence_to_json_line(const Sentence& s) {
  return sentence_json(s).dump();
}

Sentence sentence_from_json_line(std::string_view line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("malformed json: ") + e.what());
  }
  return sentence_from_json(j, 1, "<line>");
}

std::string corpus_to_json_lines(const Corpus& corpus) {
  std::string out;
  for (const auto& s : corpus) {
    out += sentence_to_json_line(s);
    out += '\n';
  }
  return out;
}

void save_corpus(const Corpus& corpus, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << corpus_to_json_lines(corpus);
}

Corpus attach_triplets(const Corpus& corpus,
                       const std::filesystem::path& sidecar) {
  std::vector<Sentence> sentences(corpus.begin(), corpus.end());
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < sentences.size(); ++i) index[sentences[i].id] = i;

  const std::string content = read_file(sidecar);
  std::istringstream in(content);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank(line)) continue;
    const std::string where = sidecar.string() + ":" + std::to_string(line_no);
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw InputError(where + ": malformed json: " + e.what());
    }
    if (!j.contains("id") || !j["id"].is_string()) {
      throw InputError(where + ": missing string field 'id'");
    }
    const auto id = j["id"].get<std::string>();
    auto it = index.find(id);
    if (it == index.end()) throw InputError(where + ": unknown id " + id);
    if (!j.contains("triplets")) {
      throw InputError(where + ": missing field 'triplets'");
    }
    sentences[it->second].triplets =
        parse_triplets(j["triplets"], line_no, sidecar.string());
  }
  return Corpus(corpus.style(), std::move(sentences));
}

}  // namespace stylemine
