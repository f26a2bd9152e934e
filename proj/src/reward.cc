#include "stylemine/reward.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "stylemine/error.hpp"

namespace stylemine {

Aggregation parse_aggregation(std::string_view name) {
  if (name == "mean") return Aggregation::kMean;
  if (name == "max") return Aggregation::kMax;
  if (name == "min") return Aggregation::kMin;
  throw InputError("unknown amateur aggregation '" + std::string(name) +
                   "' (expected mean, max or min)");
}

std::string to_string(Aggregation a) {
  switch (a) {
    case Aggregation::kMean: return "mean";
    case Aggregation::kMax: return "max";
    case Aggregation::kMin: return "min";
  }
  return "?";
}

ExistMode parse_exist_mode(std::string_view name) {
  if (name == "symmetric") return ExistMode::kSymmetric;
  if (name == "missing") return ExistMode::kMissing;
  throw InputError("unknown exist mode '" + std::string(name) +
                   "' (expected symmetric or missing)");
}

std::string to_string(ExistMode m) {
  return m == ExistMode::kSymmetric ? "symmetric" : "missing";
}

void RewardParams::validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw InputError("alpha must lie in [0, 1]");
  if (!(delta >= 0.0) || !std::isfinite(delta)) throw InputError("delta must be >= 0");
  if (!std::isfinite(j_safe)) throw InputError("j_safe must be finite");
}

double d_sem(const EmbeddingVector& candidate, const EmbeddingVector& demo) {
  return -cosine(candidate, demo);
}

std::size_t levenshtein(const std::vector<std::string>& a,
                        const std::vector<std::string>& b) {
  std::vector<std::size_t> prev(b.size() + 1);
  std::vector<std::size_t> cur(b.size() + 1);
  std::iota(prev.begin(), prev.end(), std::size_t{0});
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

std::size_t d_order(const EntityProfile& a, const EntityProfile& b) {
  return levenshtein(a.entity_seq(), b.entity_seq());
}

ExistenceVectors existence_vectors(const EntityProfile& a,
                                   const EntityProfile& b) {
  ExistenceVectors v;
  std::set_union(a.entity_set().begin(), a.entity_set().end(),
                 b.entity_set().begin(), b.entity_set().end(),
                 std::back_inserter(v.universe));
  v.a.reserve(v.universe.size());
  v.b.reserve(v.universe.size());
  for (const auto& e : v.universe) {
    v.a.push_back(a.entity_set().count(e) > 0);
    v.b.push_back(b.entity_set().count(e) > 0);
  }
  return v;
}

std::size_t d_exist(const EntityProfile& candidate, const EntityProfile& demo,
                    ExistMode mode) {
  const auto v = existence_vectors(candidate, demo);
  std::size_t d = 0;
  for (std::size_t i = 0; i < v.universe.size(); ++i) {
    if (mode == ExistMode::kSymmetric) {
      d += v.a[i] != v.b[i];
    } else {
      // candidate vector minus the union vector: nonzero where demo has an
      // entity the candidate lacks.
      d += v.b[i] && !v.a[i];
    }
  }
  return d;
}

DistanceBreakdown psi(const Trajectory& candidate, const Trajectory& demo,
                      const RewardParams& params) {
  DistanceBreakdown d;
  d.d_sem = d_sem(candidate.emb, demo.emb);
  d.d_order = d_order(candidate.profile, demo.profile);
  d.d_exist = d_exist(candidate.profile, demo.profile, params.exist_mode);
  d.d_psv = params.alpha * static_cast<double>(d.d_order) +
            (1.0 - params.alpha) * static_cast<double>(d.d_exist);
  d.psi = d.d_sem + d.d_psv;
  return d;
}

RewardBreakdown j_il(const Trajectory& candidate, const Trajectory& expert,
                     const std::vector<Trajectory>& amateurs,
                     const RewardParams& params) {
  params.validate();
  RewardBreakdown r;
  r.expert = psi(candidate, expert, params);
  r.psi_pos = r.expert.psi;
  for (const auto& a : amateurs) r.amateurs.push_back(psi(candidate, a, params));

  if (r.amateurs.empty()) {
    r.no_amateurs = true;
    r.psi_neg = 0.0;
  } else {
    switch (params.amateur_aggregation) {
      case Aggregation::kMean: {
        double s = 0.0;
        for (const auto& a : r.amateurs) s += a.psi;
        r.psi_neg = s / static_cast<double>(r.amateurs.size());
        break;
      }
      case Aggregation::kMax:
        r.psi_neg = std::max_element(r.amateurs.begin(), r.amateurs.end(),
                                     [](const auto& x, const auto& y) {
                                       return x.psi < y.psi;
                                     })->psi;
        break;
      case Aggregation::kMin:
        r.psi_neg = std::min_element(r.amateurs.begin(), r.amateurs.end(),
                                     [](const auto& x, const auto& y) {
                                       return x.psi < y.psi;
                                     })->psi;
        break;
    }
  }
  r.j_il = std::max(r.psi_pos - r.psi_neg + params.delta, 0.0);
  return r;
}

Advantage advantage(double sample_j, double greedy_j,
                    const RewardParams& params) {
  if (greedy_j <= params.j_safe) return {std::nullopt, true};
  return {sample_j - greedy_j, false};
}

}  // namespace stylemine
