#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stylemine/embed.hpp"
#include "stylemine/scenegraph.hpp"

namespace stylemine {

enum class Aggregation { kMean, kMax, kMin };
// kSymmetric: Hamming distance over union-indexed membership vectors.
// kMissing: entities of the demonstration that the candidate lacks.
enum class ExistMode { kSymmetric, kMissing };

Aggregation parse_aggregation(std::string_view name);
std::string to_string(Aggregation a);
ExistMode parse_exist_mode(std::string_view name);
std::string to_string(ExistMode m);

struct RewardParams {
  double alpha = 0.4;
  double delta = 0.5;
  double j_safe = 0.8;
  Aggregation amateur_aggregation = Aggregation::kMean;
  ExistMode exist_mode = ExistMode::kSymmetric;

  void validate() const;
};

// A generated sentence or demonstration, reduced to what the distances need.
struct Trajectory {
  EmbeddingVector emb;
  EntityProfile profile;
};

struct DistanceBreakdown {
  double d_sem = 0.0;
  std::size_t d_order = 0;
  std::size_t d_exist = 0;
  double d_psv = 0.0;
  double psi = 0.0;
};

struct RewardBreakdown {
  DistanceBreakdown expert;
  std::vector<DistanceBreakdown> amateurs;
  double psi_pos = 0.0;
  double psi_neg = 0.0;  // aggregated over amateurs
  double j_il = 0.0;
  bool no_amateurs = false;
};

struct Advantage {
  std::optional<double> advantage;
  bool skipped = false;
};

// Negative cosine.
double d_sem(const EmbeddingVector& candidate, const EmbeddingVector& demo);

// Levenshtein distance over whole entity strings, unit costs.
std::size_t d_order(const EntityProfile& a, const EntityProfile& b);
std::size_t levenshtein(const std::vector<std::string>& a,
                        const std::vector<std::string>& b);

std::size_t d_exist(const EntityProfile& candidate, const EntityProfile& demo,
                    ExistMode mode = ExistMode::kSymmetric);

// Canonical sorted union of both entity sets and the membership vector of
// each side over it.
struct ExistenceVectors {
  std::vector<std::string> universe;
  std::vector<bool> a;
  std::vector<bool> b;
};
ExistenceVectors existence_vectors(const EntityProfile& a,
                                   const EntityProfile& b);

DistanceBreakdown psi(const Trajectory& candidate, const Trajectory& demo,
                      const RewardParams& params);

// Contrastive hinge max(psi+ - aggregate(psi-) + delta, 0). An empty amateur
// list aggregates to 0 and sets no_amateurs.
RewardBreakdown j_il(const Trajectory& candidate, const Trajectory& expert,
                     const std::vector<Trajectory>& amateurs,
                     const RewardParams& params);

// Self-critic advantage. Skipped when the greedy loss is already within
// j_safe.
Advantage advantage(double sample_j, double greedy_j,
                    const RewardParams& params);

}  // namespace stylemine
