#include "stylemine/align.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <random>
#include <sstream>
#include <unordered_map>

#include "json.hpp"
#include "stylemine/error.hpp"
#include "stylemine/parallel.hpp"

namespace stylemine {
namespace {

using nlohmann::json;

constexpr std::size_t kSourceBlock = 64;

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Unbiased draw in [0, n) from a fully specified engine, so rd output does
// not depend on the standard library's distribution implementation.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t threshold = (0 - n) % n;
  for (;;) {
    const std::uint64_t r = rng();
    if (r >= threshold) return r % n;
  }
}

const EntityProfile& profile_of(const ProfileMap& profiles,
                                const std::string& id) {
  auto it = profiles.find(id);
  if (it == profiles.end()) throw InputError("no entity profile for id " + id);
  return it->second;
}

// Keeps the k best (cosine desc, id asc) seen so far.
class TopK {
 public:
  explicit TopK(std::size_t k) : k_(k) { items_.reserve(k + 1); }

  void offer(double cos, std::size_t index, const std::string* id) {
    if (items_.size() == k_ && !better(cos, id, items_.back())) return;
    Entry e{cos, index, id};
    auto pos = std::upper_bound(
        items_.begin(), items_.end(), e, [](const Entry& a, const Entry& b) {
          return better(a.cos, a.id, b);
        });
    items_.insert(pos, e);
    if (items_.size() > k_) items_.pop_back();
  }

  struct Entry {
    double cos;
    std::size_t index;
    const std::string* id;
  };
  const std::vector<Entry>& items() const { return items_; }

 private:
  static bool better(double cos, const std::string* id, const Entry& than) {
    if (cos != than.cos) return cos > than.cos;
    return *id < *than.id;
  }

  std::size_t k_;
  std::vector<Entry> items_;
};

ParallelGroup finish_group(const Sentence& source, std::vector<Candidate> cands,
                           const AlignmentParams& params) {
  ParallelGroup g;
  g.source_id = source.id;
  g.params = params;
  std::size_t expert = 0;
  if (params.strategy == Strategy::kSentenceEmbeddingSas) {
    for (std::size_t i = 1; i < cands.size(); ++i) {
      const double s = *cands[i].sas;
      const double best = *cands[expert].sas;
      if (s > best || (s == best && *cands[i].cosine > *cands[expert].cosine)) {
        expert = i;
      }
    }
  }
  g.expert_id = cands[expert].target_id;
  for (std::size_t i = 0; i < cands.size(); ++i) {
    if (i != expert) g.amateur_ids.push_back(cands[i].target_id);
  }
  g.candidates = std::move(cands);
  return g;
}

json params_json(const AlignmentParams& p) {
  return {{"strategy", to_string(p.strategy)},
          {"k", p.k},
          {"p", p.p},
          {"beta", p.beta},
          {"norm_mode", to_string(p.norm_mode)},
          {"seed", p.seed}};
}

AlignmentParams params_from_json(const json& j) {
  AlignmentParams p;
  p.strategy = parse_strategy(j.at("strategy").get<std::string>());
  p.k = j.at("k").get<std::size_t>();
  p.p = j.at("p").get<double>();
  p.beta = j.at("beta").get<double>();
  p.norm_mode = parse_norm_mode(j.at("norm_mode").get<std::string>());
  p.seed = j.at("seed").get<std::uint64_t>();
  return p;
}

}  // namespace

Strategy parse_strategy(std::string_view name) {
  if (name == "rd") return Strategy::kRandom;
  if (name == "semb") return Strategy::kSentenceEmbedding;
  if (name == "semb-sas") return Strategy::kSentenceEmbeddingSas;
  throw InputError("unknown strategy '" + std::string(name) +
                   "' (expected rd, semb or semb-sas)");
}

std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::kRandom: return "rd";
    case Strategy::kSentenceEmbedding: return "semb";
    case Strategy::kSentenceEmbeddingSas: return "semb-sas";
  }
  return "?";
}

NormMode parse_norm_mode(std::string_view name) {
  if (name == "tokens") return NormMode::kTokens;
  if (name == "entities") return NormMode::kEntities;
  if (name == "none") return NormMode::kNone;
  throw InputError("unknown norm mode '" + std::string(name) +
                   "' (expected tokens, entities or none)");
}

std::string to_string(NormMode m) {
  switch (m) {
    case NormMode::kTokens: return "tokens";
    case NormMode::kEntities: return "entities";
    case NormMode::kNone: return "none";
  }
  return "?";
}

void AlignmentParams::validate() const {
  if (k < 1) throw InputError("k must be >= 1");
  if (!(beta > 0.0) || !std::isfinite(beta)) throw InputError("beta must be > 0");
  if (!(p >= 0.0 && p <= 1.0)) throw InputError("p must lie in [0, 1]");
}

SasBreakdown sas(const EntityProfile& src, const EntityProfile& tgt,
                 std::size_t tgt_len, double beta, NormMode norm_mode) {
  SasBreakdown out;
  const auto& a = src.entity_set();
  const auto& b = tgt.entity_set();
  for (const auto& e : b) out.overlap += a.count(e);

  switch (norm_mode) {
    case NormMode::kTokens:
      out.norm_len = std::max<std::size_t>(1, tgt_len);
      break;
    case NormMode::kEntities:
      out.norm_len = std::max<std::size_t>(1, b.size());
      break;
    case NormMode::kNone:
      out.norm_len = 1;
      break;
  }
  if (a.empty() || b.empty() || out.overlap == 0) return out;

  const double overlap = static_cast<double>(out.overlap);
  out.precision = overlap / static_cast<double>(b.size());
  out.recall = overlap / static_cast<double>(a.size());
  const double b2 = beta * beta;
  out.f_beta = (1.0 + b2) * out.precision * out.recall /
               (b2 * out.precision + out.recall);
  out.sas = out.f_beta / static_cast<double>(out.norm_len);
  return out;
}

SasBreakdown sas(const EntityProfile& src, const EntityProfile& tgt,
                 std::size_t tgt_len, const AlignmentParams& params) {
  return sas(src, tgt, tgt_len, params.beta, params.norm_mode);
}

MineResult mine_with_embeddings(const Corpus& src, const Corpus& tgt,
                                const ProfileMap& profiles,
                                const std::vector<EmbeddingVector>& src_emb,
                                const std::vector<EmbeddingVector>& tgt_emb,
                                const AlignmentParams& params,
                                std::size_t workers) {
  params.validate();
  MineResult result;
  if (src.empty()) return result;
  if (tgt.empty()) {
    result.dropped_sources = src.size();
    return result;
  }

  const bool use_emb = params.strategy != Strategy::kRandom || !src_emb.empty();
  const bool need_sas = params.strategy == Strategy::kSentenceEmbeddingSas;
  if (use_emb && (src_emb.size() != src.size() || tgt_emb.size() != tgt.size())) {
    throw InputError("embedding count does not match corpus size");
  }

  std::size_t dim = 0;
  std::vector<double> tgt_matrix;  // row-major, target x dim
  std::vector<double> tgt_norm;
  std::vector<double> src_norm;
  if (use_emb) {
    dim = tgt_emb.front().dim();
    tgt_matrix.resize(tgt.size() * dim);
    tgt_norm.resize(tgt.size());
    for (std::size_t t = 0; t < tgt.size(); ++t) {
      if (tgt_emb[t].dim() != dim) throw InputError("mixed embedding dims");
      const auto v = tgt_emb[t].values();
      std::copy(v.begin(), v.end(), tgt_matrix.begin() + t * dim);
      tgt_norm[t] = tgt_emb[t].norm();
      if (tgt_norm[t] == 0.0) throw InputError("zero embedding for " + tgt[t].id);
    }
    src_norm.resize(src.size());
    for (std::size_t s = 0; s < src.size(); ++s) {
      if (src_emb[s].dim() != dim) throw InputError("mixed embedding dims");
      src_norm[s] = src_emb[s].norm();
      if (src_norm[s] == 0.0) throw InputError("zero embedding for " + src[s].id);
    }
  }
  if (need_sas) {
    for (const auto& s : src) profile_of(profiles, s.id);
    for (const auto& t : tgt) profile_of(profiles, t.id);
  }

  const std::size_t k = std::min(params.k, tgt.size());
  std::vector<std::optional<ParallelGroup>> slots(src.size());

  auto cos_of = [&](double dot, std::size_t s, std::size_t t) {
    return std::clamp(dot / (src_norm[s] * tgt_norm[t]), -1.0, 1.0);
  };
  // Same summation order as cosine(), so scores are bit-identical to it.
  auto dot_single = [&](std::size_t s, std::size_t t) {
    const auto a = src_emb[s].values();
    const double* b = &tgt_matrix[t * dim];
    double acc = 0.0;
    for (std::size_t d = 0; d < dim; ++d) acc += a[d] * b[d];
    return acc;
  };

  auto emit = [&](std::size_t s, std::vector<Candidate> cands) {
    if (need_sas) {
      const auto& sp = profile_of(profiles, src[s].id);
      std::vector<Candidate> kept;
      for (auto& c : cands) {
        const Sentence& t = *tgt.find(c.target_id);
        c.sas = sas(sp, profile_of(profiles, t.id), t.tokens.size(), params).sas;
        if (*c.sas >= params.p) kept.push_back(std::move(c));
      }
      cands = std::move(kept);
    }
    if (cands.empty()) return;
    slots[s] = finish_group(src[s], std::move(cands), params);
  };

  if (params.strategy == Strategy::kRandom) {
    parallel_for(src.size(), workers, [&](std::size_t begin, std::size_t end) {
      for (std::size_t s = begin; s < end; ++s) {
        std::mt19937_64 rng(mix64(params.seed ^ mix64(s)));
        // Sparse Fisher-Yates: k draws without replacement.
        std::unordered_map<std::uint64_t, std::uint64_t> swapped;
        std::vector<Candidate> cands;
        const std::uint64_t n = tgt.size();
        for (std::uint64_t i = 0; i < k; ++i) {
          const std::uint64_t j = i + uniform_below(rng, n - i);
          auto at = [&](std::uint64_t x) {
            auto it = swapped.find(x);
            return it == swapped.end() ? x : it->second;
          };
          const std::uint64_t pick = at(j);
          swapped[j] = at(i);
          Candidate c{tgt[pick].id, std::nullopt, std::nullopt};
          if (use_emb) c.cosine = cos_of(dot_single(s, pick), s, pick);
          cands.push_back(std::move(c));
        }
        emit(s, std::move(cands));
      }
    });
  } else {
    parallel_for(src.size(), workers, [&](std::size_t begin, std::size_t end) {
      std::vector<double> block_t(kSourceBlock * dim);  // dim x block
      std::vector<double> acc(kSourceBlock);
      for (std::size_t b0 = begin; b0 < end; b0 += kSourceBlock) {
        const std::size_t bn = std::min(kSourceBlock, end - b0);
        for (std::size_t i = 0; i < bn; ++i) {
          const auto v = src_emb[b0 + i].values();
          for (std::size_t d = 0; d < dim; ++d) block_t[d * kSourceBlock + i] = v[d];
        }
        std::vector<TopK> best(bn, TopK(k));
        for (std::size_t t = 0; t < tgt.size(); ++t) {
          const double* row = &tgt_matrix[t * dim];
          std::fill(acc.begin(), acc.end(), 0.0);
          for (std::size_t d = 0; d < dim; ++d) {
            const double x = row[d];
            const double* col = &block_t[d * kSourceBlock];
            for (std::size_t i = 0; i < kSourceBlock; ++i) acc[i] += col[i] * x;
          }
          for (std::size_t i = 0; i < bn; ++i) {
            best[i].offer(cos_of(acc[i], b0 + i, t), t, &tgt[t].id);
          }
        }
        for (std::size_t i = 0; i < bn; ++i) {
          std::vector<Candidate> cands;
          for (const auto& e : best[i].items()) {
            cands.push_back({tgt[e.index].id, e.cos, std::nullopt});
          }
          emit(b0 + i, std::move(cands));
        }
      }
    });
  }

  for (auto& slot : slots) {
    if (slot) {
      result.groups.push_back(std::move(*slot));
    } else {
      ++result.dropped_sources;
    }
  }
  std::stable_sort(result.groups.begin(), result.groups.end(),
                   [](const ParallelGroup& a, const ParallelGroup& b) {
                     return a.source_id < b.source_id;
                   });
  return result;
}

MineResult mine(const Corpus& src, const Corpus& tgt, const ProfileMap& profiles,
                const EmbeddingProvider* provider, const AlignmentParams& params,
                std::size_t workers) {
  params.validate();
  std::vector<EmbeddingVector> src_emb;
  std::vector<EmbeddingVector> tgt_emb;
  if (params.strategy != Strategy::kRandom && provider == nullptr) {
    throw InputError("strategy " + to_string(params.strategy) +
                     " needs an embedding provider");
  }
  if (provider != nullptr) {
    auto embed_all = [&](const Corpus& c) {
      if (provider->kind() == ProviderKind::kRemote) {
        return provider->embed_batch(c.sentences());
      }
      std::vector<EmbeddingVector> out(c.size());
      parallel_for(c.size(), workers, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) out[i] = provider->embed(c[i]);
      });
      return out;
    };
    src_emb = embed_all(src);
    tgt_emb = embed_all(tgt);
  }
  return mine_with_embeddings(src, tgt, profiles, src_emb, tgt_emb, params,
                              workers);
}

std::vector<PairRecord> export_pairs(const std::vector<ParallelGroup>& groups,
                                     const Corpus& src, const Corpus& tgt,
                                     std::string_view sep_open,
                                     std::string_view sep_close) {
  std::vector<PairRecord> out;
  for (const auto& g : groups) {
    const Sentence* s = src.find(g.source_id);
    if (s == nullptr) throw InputError("dangling source id " + g.source_id);
    auto record = [&](const Candidate& c, bool is_expert) {
      const Sentence* t = tgt.find(c.target_id);
      if (t == nullptr) throw InputError("dangling target id " + c.target_id);
      PairRecord r;
      r.source_id = s->id;
      r.target_id = t->id;
      r.source_text = s->text;
      r.target_text = t->text;
      r.concatenated = s->text;
      r.concatenated += sep_close;
      r.concatenated += sep_open;
      r.concatenated += t->text;
      r.is_expert = is_expert;
      r.cosine = c.cosine;
      r.sas = c.sas;
      return r;
    };
    auto expert = std::find_if(
        g.candidates.begin(), g.candidates.end(),
        [&](const Candidate& c) { return c.target_id == g.expert_id; });
    if (expert == g.candidates.end()) {
      throw InputError("group " + g.source_id + ": expert not among candidates");
    }
    out.push_back(record(*expert, true));
    for (const auto& c : g.candidates) {
      if (c.target_id != g.expert_id) out.push_back(record(c, false));
    }
  }
  return out;
}

StatsReport dataset_stats(const std::vector<ParallelGroup>& groups,
                          const Corpus& src, const Corpus& tgt,
                          const ProfileMap& profiles,
                          const AlignmentParams& params) {
  StatsReport r;
  r.norm_mode = params.norm_mode;
  r.beta = params.beta;
  std::size_t src_tokens = 0;
  std::size_t tgt_tokens = 0;
  std::size_t overlap = 0;
  double sas_sum = 0.0;
  for (const auto& g : groups) {
    const Sentence* s = src.find(g.source_id);
    if (s == nullptr) throw InputError("dangling source id " + g.source_id);
    const auto& sp = profile_of(profiles, s->id);
    for (const auto& c : g.candidates) {
      const Sentence* t = tgt.find(c.target_id);
      if (t == nullptr) throw InputError("dangling target id " + c.target_id);
      const auto& tp = profile_of(profiles, t->id);
      ++r.sentence_pairs;
      src_tokens += s->tokens.size();
      tgt_tokens += t->tokens.size();
      r.source.scene_entities += sp.size();
      r.target.scene_entities += tp.size();
      const auto b = sas(sp, tp, t->tokens.size(), params);
      overlap += b.overlap;
      sas_sum += b.sas;
    }
  }
  if (r.sentence_pairs > 0) {
    const double n = static_cast<double>(r.sentence_pairs);
    r.source.avg_sent_len = static_cast<double>(src_tokens) / n;
    r.target.avg_sent_len = static_cast<double>(tgt_tokens) / n;
    r.source.avg_entities_per_sent =
        static_cast<double>(r.source.scene_entities) / n;
    r.target.avg_entities_per_sent =
        static_cast<double>(r.target.scene_entities) / n;
    r.avg_overlap = static_cast<double>(overlap) / n;
    r.avg_sas = sas_sum / n;
  }
  return r;
}

std::string groups_to_json_lines(const MineResult& result,
                                 const AlignmentParams& params) {
  std::string out = json{{"v", 1},
                         {"kind", "groups"},
                         {"count", result.groups.size()},
                         {"dropped_sources", result.dropped_sources},
                         {"params", params_json(params)}}
                        .dump();
  out += '\n';
  for (const auto& g : result.groups) {
    json cands = json::array();
    for (const auto& c : g.candidates) {
      json cj{{"target_id", c.target_id}};
      if (c.cosine) cj["cosine"] = *c.cosine;
      if (c.sas) cj["sas"] = *c.sas;
      cands.push_back(std::move(cj));
    }
    out += json{{"source_id", g.source_id},
                {"candidates", std::move(cands)},
                {"expert_id", g.expert_id},
                {"amateur_ids", g.amateur_ids}}
               .dump();
    out += '\n';
  }
  return out;
}

MineResult groups_from_json_lines(std::string_view content,
                                  AlignmentParams* params_out) {
  MineResult result;
  AlignmentParams params;
  std::istringstream in{std::string(content)};
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  try {
    while (std::getline(in, line)) {
      ++line_no;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      const json j = json::parse(line);
      if (!header) {
        if (j.value("kind", "") != "groups") {
          throw InputError("missing groups header record");
        }
        params = params_from_json(j.at("params"));
        result.dropped_sources = j.at("dropped_sources").get<std::size_t>();
        header = true;
        continue;
      }
      ParallelGroup g;
      g.source_id = j.at("source_id").get<std::string>();
      for (const auto& cj : j.at("candidates")) {
        Candidate c;
        c.target_id = cj.at("target_id").get<std::string>();
        if (cj.contains("cosine")) c.cosine = cj["cosine"].get<double>();
        if (cj.contains("sas")) c.sas = cj["sas"].get<double>();
        g.candidates.push_back(std::move(c));
      }
      g.expert_id = j.at("expert_id").get<std::string>();
      g.amateur_ids = j.at("amateur_ids").get<std::vector<std::string>>();
      g.params = params;
      result.groups.push_back(std::move(g));
    }
  } catch (const json::exception& e) {
    throw InputError("groups line " + std::to_string(line_no) + ": " + e.what());
  } catch (const InputError& e) {
    throw InputError("groups line " + std::to_string(line_no) + ": " + e.what());
  }
  if (!header) throw InputError("empty groups file");
  if (params_out != nullptr) *params_out = params;
  return result;
}

std::string pairs_to_json_lines(const std::vector<PairRecord>& pairs) {
  std::string out =
      json{{"v", 1}, {"kind", "pairs"}, {"count", pairs.size()}}.dump();
  out += '\n';
  for (const auto& p : pairs) {
    json j{{"source_id", p.source_id},     {"target_id", p.target_id},
           {"source_text", p.source_text}, {"target_text", p.target_text},
           {"concatenated", p.concatenated}, {"is_expert", p.is_expert}};
    if (p.cosine) j["cosine"] = *p.cosine;
    if (p.sas) j["sas"] = *p.sas;
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::string stats_to_json(const StatsReport& r) {
  auto side = [](const SideStats& s) {
    return json{{"scene_entities", s.scene_entities},
                {"avg_sent_len", s.avg_sent_len},
                {"avg_entities_per_sent", s.avg_entities_per_sent}};
  };
  return json{{"sentence_pairs", r.sentence_pairs},
              {"source", side(r.source)},
              {"target", side(r.target)},
              {"avg_overlap", r.avg_overlap},
              {"avg_sas", r.avg_sas},
              {"norm_mode", to_string(r.norm_mode)},
              {"beta", r.beta}}
      .dump(2);
}

std::string stats_to_table(const StatsReport& r) {
  std::ostringstream os;
  os << std::fixed;
  auto row = [&](const std::string& name, const std::string& a,
                 const std::string& b) {
    os << std::left << std::setw(34) << name << std::right << std::setw(12) << a
       << std::setw(12) << b << '\n';
  };
  auto num = [](double v, int prec) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(prec) << v;
    return s.str();
  };
  row("", "source", "target");
  row("# Sent Pairs", std::to_string(r.sentence_pairs), "");
  row("# Scene Entities", std::to_string(r.source.scene_entities),
      std::to_string(r.target.scene_entities));
  row("Avg. Sent Len", num(r.source.avg_sent_len, 2), num(r.target.avg_sent_len, 2));
  row("Avg. # Scene Ent. / Sent", num(r.source.avg_entities_per_sent, 2),
      num(r.target.avg_entities_per_sent, 2));
  row("Avg. # Scene Ent. src&tgt", num(r.avg_overlap, 2), "");
  row("Avg. SAS", num(r.avg_sas, 4), "");
  os << "(SAS normalization: " << to_string(r.norm_mode) << ", beta "
     << num(r.beta, 2) << ")\n";
  return os.str();
}

}  // namespace stylemine
