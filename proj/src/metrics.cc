#include "stylemine/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"
#include "stylemine/error.hpp"
#include "stylemine/parallel.hpp"
#include "stylemine/tokenize.hpp"

namespace stylemine {
namespace {

using nlohmann::json;

std::string ngram_key(const Tokens& t, std::size_t begin, std::size_t n) {
  std::string key;
  for (std::size_t i = begin; i < begin + n; ++i) {
    if (i > begin) key += '\x1f';
    key += t[i];
  }
  return key;
}

std::unordered_map<std::string, std::size_t> ngram_counts(const Tokens& t,
                                                          std::size_t n) {
  std::unordered_map<std::string, std::size_t> out;
  if (t.size() < n) return out;
  for (std::size_t i = 0; i + n <= t.size(); ++i) ++out[ngram_key(t, i, n)];
  return out;
}

std::set<std::string> ngram_set(const Tokens& t, std::size_t n) {
  std::set<std::string> out;
  if (t.size() < n) return out;
  for (std::size_t i = 0; i + n <= t.size(); ++i) out.insert(ngram_key(t, i, n));
  return out;
}

std::size_t ngram_total(std::size_t len, std::size_t n) {
  return len >= n ? len - n + 1 : 0;
}

// Closest reference length; ties go to the shorter reference.
std::size_t closest_ref_len(std::size_t c, const std::vector<Tokens>& refs) {
  std::size_t best = refs.front().size();
  for (const auto& r : refs) {
    const std::size_t len = r.size();
    const auto diff = [c](std::size_t x) { return x > c ? x - c : c - x; };
    if (diff(len) < diff(best) || (diff(len) == diff(best) && len < best)) {
      best = len;
    }
  }
  return best;
}

Tokens lowered(const Tokens& t) {
  Tokens out;
  out.reserve(t.size());
  for (const auto& x : t) out.push_back(to_lower_ascii(x));
  return out;
}

}  // namespace

void BleuStats::add(const Tokens& candidate,
                    const std::vector<Tokens>& references) {
  if (candidate.empty()) throw InputError("BLEU of an empty candidate");
  if (references.empty()) throw InputError("BLEU needs at least one reference");
  const std::size_t c = candidate.size();
  const std::size_t r = closest_ref_len(c, references);
  candidate_len += c;
  reference_len += r;
  for (std::size_t n = 1; n <= kMaxOrder; ++n) {
    const auto cand = ngram_counts(candidate, n);
    std::unordered_map<std::string, std::size_t> max_ref;
    for (const auto& ref : references) {
      for (const auto& [g, count] : ngram_counts(ref, n)) {
        auto& m = max_ref[g];
        m = std::max(m, count);
      }
    }
    std::size_t clipped = 0;
    for (const auto& [g, count] : cand) {
      auto it = max_ref.find(g);
      if (it != max_ref.end()) clipped += std::min(count, it->second);
    }
    matches[n - 1] += clipped;
    candidate_ngrams[n - 1] += ngram_total(c, n);
    reference_ngrams[n - 1] += ngram_total(r, n);
  }
}

BleuScores BleuStats::scores() const {
  BleuScores s;
  if (candidate_len == 0) return s;
  const double bp =
      candidate_len < reference_len
          ? std::exp(1.0 - static_cast<double>(reference_len) /
                               static_cast<double>(candidate_len))
          : 1.0;
  // An order is defined when either side has n-grams of that length; orders
  // too long for both candidate and reference are left out of the averages.
  double sum = 0.0;
  double log_sum = 0.0;
  bool any_zero = false;
  std::size_t defined = 0;
  for (std::size_t n = 0; n < kMaxOrder; ++n) {
    if (candidate_ngrams[n] == 0 && reference_ngrams[n] == 0) continue;
    ++defined;
    const double precision =
        candidate_ngrams[n] == 0
            ? 0.0
            : static_cast<double>(matches[n]) /
                  static_cast<double>(candidate_ngrams[n]);
    s.bleu_n[n] = bp * precision;
    sum += s.bleu_n[n];
    if (precision == 0.0) {
      any_zero = true;
    } else {
      log_sum += std::log(precision);
    }
  }
  if (defined > 0) {
    s.bleu_avg = sum / static_cast<double>(defined);
    s.bleu_composite =
        any_zero ? 0.0 : bp * std::exp(log_sum / static_cast<double>(defined));
  }
  return s;
}

BleuScores bleu_avg(const Tokens& candidate,
                    const std::vector<Tokens>& references) {
  BleuStats stats;
  stats.add(candidate, references);
  return stats.scores();
}

double i_pinc(const Tokens& source, const Tokens& candidate,
              const std::vector<Tokens>& references) {
  std::unordered_set<std::string> shared;
  for (const auto& t : source) shared.insert(to_lower_ascii(t));
  auto strip = [&](const Tokens& t) {
    Tokens out;
    for (const auto& x : lowered(t)) {
      if (!shared.count(x)) out.push_back(x);
    }
    return out;
  };
  const Tokens cand = strip(candidate);
  if (cand.empty()) return 0.0;
  std::vector<Tokens> refs;
  for (const auto& r : references) refs.push_back(strip(r));

  double total = 0.0;
  std::size_t valid = 0;
  for (std::size_t n = 1; n <= kMaxOrder; ++n) {
    const auto cand_set = ngram_set(cand, n);
    bool any = false;
    double best = 0.0;
    for (const auto& r : refs) {
      const auto ref_set = ngram_set(r, n);
      if (ref_set.empty()) continue;
      any = true;
      std::size_t hit = 0;
      for (const auto& g : ref_set) hit += cand_set.count(g);
      best = std::max(best, static_cast<double>(hit) /
                                static_cast<double>(ref_set.size()));
    }
    if (any) {
      total += best;
      ++valid;
    }
  }
  return valid == 0 ? 0.0 : total / static_cast<double>(valid);
}

double gm(double acc, double bleu) {
  if (!(acc >= 0.0 && acc <= 1.0)) throw InputError("ACC must lie in [0, 1]");
  if (!(bleu >= 0.0 && bleu <= 1.0)) throw InputError("BLEU must lie in [0, 1]");
  return std::sqrt(acc * bleu);
}

MetricReport evaluate(const std::vector<EvalRecord>& records, BleuMode mode,
                      std::size_t workers) {
  if (records.empty()) throw InputError("evaluate needs at least one record");
  const bool labeled = records.front().predicted_style_correct.has_value();
  for (const auto& r : records) {
    if (r.predicted_style_correct.has_value() != labeled) {
      throw InputError("style labels must be present on all records or none");
    }
    if (r.reference_token_lists.empty()) {
      throw InputError("every record needs at least one reference");
    }
  }

  std::vector<BleuStats> stats(records.size());
  std::vector<double> pinc(records.size());
  parallel_for(records.size(), workers, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      stats[i].add(records[i].candidate_tokens, records[i].reference_token_lists);
      pinc[i] = i_pinc(records[i].source_tokens, records[i].candidate_tokens,
                       records[i].reference_token_lists);
    }
  });

  BleuStats total;
  double pinc_sum = 0.0;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    for (std::size_t n = 0; n < kMaxOrder; ++n) {
      total.matches[n] += stats[i].matches[n];
      total.candidate_ngrams[n] += stats[i].candidate_ngrams[n];
      total.reference_ngrams[n] += stats[i].reference_ngrams[n];
    }
    total.candidate_len += stats[i].candidate_len;
    total.reference_len += stats[i].reference_len;
    pinc_sum += pinc[i];
    if (labeled && *records[i].predicted_style_correct) ++correct;
  }

  MetricReport report;
  report.count = records.size();
  report.bleu_mode = mode;
  const auto s = total.scores();
  report.bleu_n = s.bleu_n;
  report.bleu_avg = s.bleu_avg;
  report.bleu_composite = s.bleu_composite;
  report.i_pinc = pinc_sum / static_cast<double>(records.size());
  if (labeled) {
    report.acc = static_cast<double>(correct) / static_cast<double>(records.size());
    report.gm = gm(*report.acc, report.bleu());
  }
  return report;
}

std::vector<EvalRecord> parse_eval_records(std::string_view content,
                                           const std::string& origin) {
  std::vector<EvalRecord> out;
  std::istringstream in{std::string(content)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = origin + ":" + std::to_string(line_no);
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw InputError(where + ": malformed json: " + e.what());
    }
    auto text = [&](const char* name) {
      if (!j.contains(name) || !j[name].is_string()) {
        throw InputError(where + ": missing string field '" + name + "'");
      }
      return tokenize(j[name].get<std::string>());
    };
    EvalRecord r;
    r.source_tokens = text("source");
    r.candidate_tokens = text("candidate");
    if (!j.contains("references") || !j["references"].is_array() ||
        j["references"].empty()) {
      throw InputError(where + ": 'references' must be a non-empty array");
    }
    for (const auto& ref : j["references"]) {
      if (!ref.is_string()) throw InputError(where + ": references must be strings");
      r.reference_token_lists.push_back(tokenize(ref.get<std::string>()));
    }
    if (j.contains("style_correct") && !j["style_correct"].is_null()) {
      const auto& v = j["style_correct"];
      if (v.is_boolean()) {
        r.predicted_style_correct = v.get<bool>();
      } else if (v.is_number_integer() && (v == 0 || v == 1)) {
        r.predicted_style_correct = v.get<int>() == 1;
      } else {
        throw InputError(where + ": 'style_correct' must be a boolean");
      }
    }
    if (r.candidate_tokens.empty()) throw InputError(where + ": empty candidate");
    out.push_back(std::move(r));
  }
  return out;
}

std::string report_to_json(const MetricReport& r) {
  json j{{"count", r.count},
         {"bleu_n", r.bleu_n},
         {"bleu_avg", r.bleu_avg},
         {"bleu_composite", r.bleu_composite},
         {"bleu_mode", r.bleu_mode == BleuMode::kAverage ? "average" : "composite"},
         {"bleu", r.bleu()},
         {"i_pinc", r.i_pinc},
         {"acc", r.acc ? json(*r.acc) : json()},
         {"gm", r.gm ? json(*r.gm) : json()}};
  return j.dump(2);
}

std::string report_to_table(const MetricReport& r) {
  std::ostringstream os;
  auto cell = [](std::optional<double> v) {
    if (!v) return std::string("-");
    std::ostringstream s;
    s << std::fixed << std::setprecision(1) << *v * 100.0;
    return s.str();
  };
  os << std::right << std::setw(8) << "ACC" << std::setw(8) << "BLEU"
     << std::setw(8) << "GM" << std::setw(8) << "i-PINC" << '\n';
  os << std::setw(8) << cell(r.acc) << std::setw(8) << cell(r.bleu())
     << std::setw(8) << cell(r.gm) << std::setw(8) << cell(r.i_pinc) << '\n';
  os << "BLEU-1..4:";
  for (double b : r.bleu_n) os << ' ' << cell(b);
  os << "  (n=" << r.count << ")\n";
  return os.str();
}

}  // namespace stylemine
