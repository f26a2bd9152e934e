#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stylemine/corpus.hpp"
#include "stylemine/embed.hpp"
#include "stylemine/scenegraph.hpp"

namespace stylemine {

enum class Strategy { kRandom, kSentenceEmbedding, kSentenceEmbeddingSas };
enum class NormMode { kTokens, kEntities, kNone };

Strategy parse_strategy(std::string_view name);
std::string to_string(Strategy s);
NormMode parse_norm_mode(std::string_view name);
std::string to_string(NormMode m);

struct AlignmentParams {
  Strategy strategy = Strategy::kSentenceEmbeddingSas;
  std::size_t k = 8;
  double p = 0.05;
  double beta = 1.0;
  NormMode norm_mode = NormMode::kTokens;
  std::uint64_t seed = 0;

  // Throws InputError unless k >= 1, beta > 0 and p in [0, 1].
  void validate() const;
};

struct SasBreakdown {
  std::size_t overlap = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f_beta = 0.0;
  std::size_t norm_len = 1;
  double sas = 0.0;
};

// Scene alignment score of a target candidate against a source sentence:
// the beta-weighted F-measure of shared entities divided by norm_len.
// Degenerate inputs (an empty side, no overlap) score exactly 0.
SasBreakdown sas(const EntityProfile& src, const EntityProfile& tgt,
                 std::size_t tgt_len, double beta, NormMode norm_mode);
SasBreakdown sas(const EntityProfile& src, const EntityProfile& tgt,
                 std::size_t tgt_len, const AlignmentParams& params);

struct Candidate {
  std::string target_id;
  std::optional<double> cosine;
  std::optional<double> sas;
};

struct ParallelGroup {
  std::string source_id;
  // Sorted by cosine descending for semb strategies; draw order for rd.
  std::vector<Candidate> candidates;
  std::string expert_id;
  std::vector<std::string> amateur_ids;
  AlignmentParams params;
};

struct MineResult {
  std::vector<ParallelGroup> groups;  // sorted by source_id
  std::size_t dropped_sources = 0;
};

// `provider` may be null for the rd strategy. Output does not depend on
// `workers`.
MineResult mine(const Corpus& src, const Corpus& tgt, const ProfileMap& profiles,
                const EmbeddingProvider* provider, const AlignmentParams& params,
                std::size_t workers = 1);

// Same, with embeddings already computed in corpus order.
MineResult mine_with_embeddings(const Corpus& src, const Corpus& tgt,
                                const ProfileMap& profiles,
                                const std::vector<EmbeddingVector>& src_emb,
                                const std::vector<EmbeddingVector>& tgt_emb,
                                const AlignmentParams& params,
                                std::size_t workers = 1);

struct PairRecord {
  std::string source_id;
  std::string target_id;
  std::string source_text;
  std::string target_text;
  std::string concatenated;
  bool is_expert = false;
  std::optional<double> cosine;
  std::optional<double> sas;
};

// One record per (source, candidate); the expert comes first in each group.
std::vector<PairRecord> export_pairs(const std::vector<ParallelGroup>& groups,
                                     const Corpus& src, const Corpus& tgt,
                                     std::string_view sep_open,
                                     std::string_view sep_close);

struct SideStats {
  std::size_t scene_entities = 0;
  double avg_sent_len = 0.0;
  double avg_entities_per_sent = 0.0;
};

// Aggregates over every (source, candidate) pair.
struct StatsReport {
  std::size_t sentence_pairs = 0;
  SideStats source;
  SideStats target;
  double avg_overlap = 0.0;
  double avg_sas = 0.0;
  NormMode norm_mode = NormMode::kTokens;
  double beta = 1.0;
};

StatsReport dataset_stats(const std::vector<ParallelGroup>& groups,
                          const Corpus& src, const Corpus& tgt,
                          const ProfileMap& profiles,
                          const AlignmentParams& params);

// Serialization. Group files start with a header record carrying params,
// the group count and the dropped-source count.
std::string groups_to_json_lines(const MineResult& result,
                                 const AlignmentParams& params);
MineResult groups_from_json_lines(std::string_view content,
                                  AlignmentParams* params_out = nullptr);
std::string pairs_to_json_lines(const std::vector<PairRecord>& pairs);
std::string stats_to_json(const StatsReport& report);
std::string stats_to_table(const StatsReport& report);

}  // namespace stylemine
