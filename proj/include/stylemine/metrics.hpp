#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stylemine/corpus.hpp"

namespace stylemine {

inline constexpr std::size_t kMaxOrder = 4;

struct BleuScores {
  std::array<double, kMaxOrder> bleu_n{};
  double bleu_avg = 0.0;
  // Standard geometric 4-gram BLEU, for comparison.
  double bleu_composite = 0.0;
};

// Sufficient statistics; records are aggregated by summing before ratios.
struct BleuStats {
  std::array<std::size_t, kMaxOrder> matches{};
  std::array<std::size_t, kMaxOrder> candidate_ngrams{};
  std::array<std::size_t, kMaxOrder> reference_ngrams{};
  std::size_t candidate_len = 0;
  std::size_t reference_len = 0;

  void add(const Tokens& candidate, const std::vector<Tokens>& references);
  BleuScores scores() const;
};

// Sentence-level average n-gram BLEU. Throws InputError on an empty
// candidate or no references.
BleuScores bleu_avg(const Tokens& candidate,
                    const std::vector<Tokens>& references);

double i_pinc(const Tokens& source, const Tokens& candidate,
              const std::vector<Tokens>& references);

// Geometric mean; throws InputError outside [0, 1].
double gm(double acc, double bleu);

struct EvalRecord {
  Tokens source_tokens;
  Tokens candidate_tokens;
  std::vector<Tokens> reference_token_lists;
  std::optional<bool> predicted_style_correct;
};

enum class BleuMode { kAverage, kComposite };

struct MetricReport {
  std::array<double, kMaxOrder> bleu_n{};
  double bleu_avg = 0.0;
  double bleu_composite = 0.0;
  double i_pinc = 0.0;
  std::optional<double> acc;
  std::optional<double> gm;
  std::size_t count = 0;
  BleuMode bleu_mode = BleuMode::kAverage;

  // The BLEU figure reported and fed into GM.
  double bleu() const {
    return bleu_mode == BleuMode::kAverage ? bleu_avg : bleu_composite;
  }
};

MetricReport evaluate(const std::vector<EvalRecord>& records,
                      BleuMode mode = BleuMode::kAverage,
                      std::size_t workers = 1);

// json-lines {source, candidate, references:[...], style_correct?}; text
// fields are tokenized.
std::vector<EvalRecord> parse_eval_records(std::string_view content,
                                           const std::string& origin = "<memory>");

std::string report_to_json(const MetricReport& report);
// ACC / BLEU / GM / i-PINC on the x100 scale.
std::string report_to_table(const MetricReport& report);

}  // namespace stylemine
