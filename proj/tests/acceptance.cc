// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails. `--perf-only` runs just the mining
// throughput and scaling criterion, which is excluded from the default run.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "stylemine/align.hpp"
#include "stylemine/corpus.hpp"
#include "stylemine/distill.hpp"
#include "stylemine/embed.hpp"
#include "stylemine/fixtures.hpp"
#include "stylemine/metrics.hpp"
#include "stylemine/reward.hpp"
#include "stylemine/scenegraph.hpp"

namespace fs = std::filesystem;
using namespace stylemine;

namespace {

struct Outcome {
  bool passed = true;
  std::string detail;

  void fail(const std::string& why) {
    if (passed) detail = why;
    passed = false;
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int report(const std::string& name, const std::function<Outcome()>& body) {
  const auto t0 = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.fail(std::string("exception: ") + e.what());
  }
  std::ostringstream line;
  line << (o.passed ? "PASS " : "FAIL ") << name << " (" << std::fixed;
  line.precision(2);
  line << seconds_since(t0) << " s)";
  if (!o.detail.empty()) line << ": " << o.detail;
  std::cout << line.str() << std::endl;
  return o.passed ? 0 : 1;
}

const fs::path kFixtures = STYLEMINE_FIXTURES;

std::vector<std::string> random_entities(std::mt19937_64& rng, std::size_t alphabet,
                                         std::size_t max_len) {
  std::uniform_int_distribution<std::size_t> len(0, max_len);
  std::uniform_int_distribution<std::size_t> sym(0, alphabet - 1);
  std::vector<std::string> out(len(rng));
  for (auto& e : out) e = "e" + std::to_string(sym(rng));
  return out;
}

EntityProfile random_profile(std::mt19937_64& rng, std::size_t alphabet,
                             std::size_t max_len) {
  return EntityProfile("x", random_entities(rng, alphabet, max_len));
}

// ---------------------------------------------------------------------------

Outcome gm_reproduction() {
  Outcome o;
  struct Row { double acc, bleu, printed; };
  for (const Row& r : {Row{0.970, 0.341, 0.575}, Row{0.856, 0.212, 0.426}}) {
    const double g = gm(r.acc, r.bleu);
    std::ostringstream s;
    s.precision(6);
    s << "gm(" << r.acc << ", " << r.bleu << ") = " << g << " vs " << r.printed;
    if (std::fabs(g - r.printed) > 0.0005) o.fail(s.str());
    if (o.passed) o.detail += (o.detail.empty() ? "" : "; ") + s.str();
  }
  return o;
}

Outcome ipinc_copy() {
  Outcome o;
  std::mt19937_64 rng(1001);
  std::uniform_int_distribution<int> len(1, 20);
  std::uniform_int_distribution<int> word(0, 299);
  std::uniform_int_distribution<int> nrefs(1, 4);
  auto sentence = [&] {
    Tokens t(len(rng));
    for (auto& w : t) w = "w" + std::to_string(word(rng));
    return t;
  };
  for (int i = 0; i < 1000; ++i) {
    const Tokens s = sentence();
    std::vector<Tokens> refs(nrefs(rng));
    for (auto& r : refs) r = sentence();
    const double v = i_pinc(s, s, refs);
    if (v != 0.0) {
      o.fail("sample " + std::to_string(i) + " gave " + std::to_string(v));
      break;
    }
  }
  if (o.passed) o.detail = "1000 samples, all exactly 0";
  return o;
}

Outcome knapsack_optimality() {
  Outcome o;
  std::mt19937_64 rng(2002);
  std::uniform_int_distribution<int> nd(0, 15);
  std::uniform_int_distribution<std::int64_t> vd(0, 50);
  std::uniform_int_distribution<std::int64_t> wd(1, 50);
  for (int inst = 0; inst < 500 && o.passed; ++inst) {
    const int n = nd(rng);
    std::vector<std::int64_t> v(n), w(n);
    for (int i = 0; i < n; ++i) {
      v[i] = vd(rng);
      w[i] = wd(rng);
    }
    std::uniform_int_distribution<std::int64_t> bd(0, 25 * std::max(n, 1));
    const std::int64_t budget = bd(rng);

    std::int64_t best = 0;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      std::int64_t vs = 0, ws = 0;
      for (int i = 0; i < n; ++i) {
        if (mask & (1u << i)) {
          vs += v[i];
          ws += w[i];
        }
      }
      if (ws <= budget) best = std::max(best, vs);
    }

    const auto r = knapsack(v, w, budget);
    std::int64_t vs = 0, ws = 0;
    for (std::size_t i : r.selected) {
      vs += v[i];
      ws += w[i];
    }
    const std::string tag = "instance " + std::to_string(inst) + ": ";
    if (r.total_value != best) o.fail(tag + "value " + std::to_string(r.total_value) +
                                      " vs exhaustive " + std::to_string(best));
    if (vs != r.total_value || ws != r.total_weight) o.fail(tag + "totals disagree with selection");
    if (ws > budget) o.fail(tag + "selected weight exceeds budget");
  }
  if (o.passed) o.detail = "500 instances match exhaustive enumeration";
  return o;
}

// F-beta written over counts: (1 + b^2) o / (b^2 |S| + |T|).
double sas_oracle(const std::set<std::string>& s, const std::set<std::string>& t,
                  std::size_t tgt_len, double beta, NormMode mode) {
  std::size_t o = 0;
  for (const auto& e : s) o += t.count(e);
  if (s.empty() || t.empty() || o == 0) return 0.0;
  const double b2 = beta * beta;
  const double f = (1.0 + b2) * static_cast<double>(o) /
                   (b2 * static_cast<double>(s.size()) + static_cast<double>(t.size()));
  switch (mode) {
    case NormMode::kTokens: return f / static_cast<double>(tgt_len);
    case NormMode::kEntities: return f / static_cast<double>(t.size());
    case NormMode::kNone: return f;
  }
  return -1.0;
}

Outcome sas_equivalence() {
  Outcome o;
  std::mt19937_64 rng(3003);
  std::uniform_int_distribution<std::size_t> len_d(1, 30);
  double worst = 0.0;
  std::size_t degenerate = 0;
  for (int i = 0; i < 1000 && o.passed; ++i) {
    const auto a = random_profile(rng, 12, 7);
    const auto b = random_profile(rng, 12, 7);
    const std::size_t tgt_len = std::max(len_d(rng), b.size());
    for (double beta : {0.5, 1.0, 2.0}) {
      for (NormMode mode : {NormMode::kTokens, NormMode::kEntities, NormMode::kNone}) {
        const double got = sas(a, b, tgt_len, beta, mode).sas;
        const double want = sas_oracle(a.entity_set(), b.entity_set(), tgt_len, beta, mode);
        if (a.empty() || b.empty()) {
          ++degenerate;
          if (got != 0.0) o.fail("degenerate pair scored " + std::to_string(got));
        }
        worst = std::max(worst, std::fabs(got - want));
        if (std::fabs(got - want) > 1e-12) {
          o.fail("pair " + std::to_string(i) + ": " + std::to_string(got) + " vs " +
                 std::to_string(want));
        }
      }
    }
  }
  // Forced degenerate cases on top of the random ones.
  const EntityProfile empty("x", {});
  const EntityProfile one("y", {"food"});
  for (NormMode mode : {NormMode::kTokens, NormMode::kEntities, NormMode::kNone}) {
    for (const auto& [s, t] : {std::pair{empty, one}, {one, empty}, {empty, empty}}) {
      ++degenerate;
      if (sas(s, t, 3, 1.0, mode).sas != 0.0) o.fail("empty entity set scored nonzero");
    }
  }
  if (o.passed) {
    std::ostringstream s;
    s << "max |diff| " << worst << ", " << degenerate << " degenerate evaluations exactly 0";
    o.detail = s.str();
  }
  return o;
}

std::size_t levenshtein_reference(const std::vector<std::string>& a,
                                  const std::vector<std::string>& b) {
  std::vector<std::vector<std::size_t>> d(a.size() + 1,
                                          std::vector<std::size_t>(b.size() + 1));
  for (std::size_t i = 0; i <= a.size(); ++i) d[i][0] = i;
  for (std::size_t j = 0; j <= b.size(); ++j) d[0][j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1,
                          d[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    }
  }
  return d[a.size()][b.size()];
}

Outcome distance_axioms() {
  Outcome o;
  std::mt19937_64 rng(4004);
  for (int i = 0; i < 2000 && o.passed; ++i) {
    const auto x = random_profile(rng, 10, 6);
    const auto y = random_profile(rng, 10, 6);
    const auto z = random_profile(rng, 10, 6);
    const std::string tag = "triple " + std::to_string(i) + ": ";
    using Dist = std::function<std::size_t(const EntityProfile&, const EntityProfile&)>;
    const Dist order = [](const auto& a, const auto& b) { return d_order(a, b); };
    const Dist exist = [](const auto& a, const auto& b) { return d_exist(a, b); };
    for (const auto& [name, d] : {std::pair{"d_order", order}, {"d_exist", exist}}) {
      if (d(x, x) != 0 || d(y, y) != 0) o.fail(tag + name + " identity");
      if (d(x, y) != d(y, x) || d(y, z) != d(z, y)) o.fail(tag + name + " symmetry");
      if (d(x, z) > d(x, y) + d(y, z)) o.fail(tag + name + " triangle");
    }
    if (d_order(x, y) != levenshtein_reference(x.entity_seq(), y.entity_seq())) {
      o.fail(tag + "d_order disagrees with the quadratic DP");
    }
    std::vector<std::string> sym;
    std::set_symmetric_difference(x.entity_set().begin(), x.entity_set().end(),
                                  y.entity_set().begin(), y.entity_set().end(),
                                  std::back_inserter(sym));
    if (d_exist(x, y) != sym.size()) o.fail(tag + "d_exist is not |symmetric difference|");
  }
  if (o.passed) o.detail = "2000 triples";
  return o;
}

Trajectory random_trajectory(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::vector<double> v(8);
  for (auto& x : v) x = g(rng);
  return {EmbeddingVector(v), random_profile(rng, 10, 6)};
}

Outcome contrastive_contract() {
  Outcome o;
  std::mt19937_64 rng(5005);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> nam(0, 4);
  const Aggregation aggs[] = {Aggregation::kMean, Aggregation::kMax, Aggregation::kMin};
  for (int i = 0; i < 1000 && o.passed; ++i) {
    RewardParams p;
    p.alpha = unit(rng);
    p.delta = 3.0 * unit(rng);
    p.amateur_aggregation = aggs[i % 3];
    p.exist_mode = i % 2 ? ExistMode::kSymmetric : ExistMode::kMissing;
    const auto cand = random_trajectory(rng);
    const auto expert = random_trajectory(rng);
    std::vector<Trajectory> amateurs(nam(rng));
    for (auto& a : amateurs) a = random_trajectory(rng);
    const std::string tag = "sample " + std::to_string(i) + ": ";

    const double j = j_il(cand, expert, amateurs, p).j_il;
    if (!(j >= 0.0)) o.fail(tag + "negative j_il");

    const double same = j_il(cand, expert, {expert}, p).j_il;
    if (same != p.delta) {
      o.fail(tag + "identical expert and amateur gave " + std::to_string(same) +
             " for delta " + std::to_string(p.delta));
    }

    auto bigger = p;
    bigger.delta = p.delta + 2.0 * unit(rng);
    if (j_il(cand, expert, amateurs, bigger).j_il < j) o.fail(tag + "decreased in delta");
  }
  if (o.passed) o.detail = "1000 samples";
  return o;
}

Outcome safe_skip() {
  Outcome o;
  std::size_t checked = 0;
  for (double j_safe : {0.0, 0.2, 0.4, 0.6, 0.8, 1.0, 1.5}) {
    RewardParams p;
    p.j_safe = j_safe;
    for (int gi = 0; gi <= 40; ++gi) {
      const double greedy = gi * 0.05;
      for (double sample : {0.0, 0.3, 1.1}) {
        const auto a = advantage(sample, greedy, p);
        const bool should_skip = greedy <= j_safe;
        ++checked;
        if (a.skipped != should_skip || a.advantage.has_value() == should_skip) {
          o.fail("greedy " + std::to_string(greedy) + " j_safe " + std::to_string(j_safe));
        } else if (!should_skip && *a.advantage != sample - greedy) {
          o.fail("advantage value at greedy " + std::to_string(greedy));
        }
      }
    }
  }
  // Boundary: equal means skipped.
  for (double t : {0.8, 0.6, 0.4}) {
    RewardParams p;
    p.j_safe = t;
    ++checked;
    if (!advantage(0.1, t, p).skipped) o.fail("greedy_j == j_safe not skipped");
  }
  if (o.passed) o.detail = std::to_string(checked) + " grid points";
  return o;
}

using PairSet = std::set<std::pair<std::string, std::string>>;

PairSet pairs_of(const MineResult& r) {
  PairSet out;
  for (const auto& g : r.groups) {
    for (const auto& c : g.candidates) out.insert({g.source_id, c.target_id});
  }
  return out;
}

void mining_properties(const std::string& name, const Corpus& src, const Corpus& tgt,
                       const EmbeddingProvider& provider, Outcome& o) {
  ProfileMap profiles = build_profiles(src, default_stopwords());
  for (auto& kv : build_profiles(tgt, default_stopwords())) profiles.insert(kv);

  AlignmentParams params;
  params.k = 4;
  params.strategy = Strategy::kSentenceEmbeddingSas;
  PairSet prev;
  bool first = true;
  for (double p : {0.0, 0.01, 0.05, 0.1, 0.2, 0.5, 1.0}) {
    params.p = p;
    const auto cur = pairs_of(mine(src, tgt, profiles, &provider, params, 1));
    if (!first && !std::includes(prev.begin(), prev.end(), cur.begin(), cur.end())) {
      o.fail(name + ": p=" + std::to_string(p) + " output is not a subset");
    }
    prev = cur;
    first = false;
  }

  params.p = 0.05;
  for (Strategy s : {Strategy::kRandom, Strategy::kSentenceEmbedding,
                     Strategy::kSentenceEmbeddingSas}) {
    params.strategy = s;
    params.seed = 99;
    const auto one = groups_to_json_lines(mine(src, tgt, profiles, &provider, params, 1), params);
    const auto eight = groups_to_json_lines(mine(src, tgt, profiles, &provider, params, 8), params);
    if (one != eight) o.fail(name + ": " + to_string(s) + " differs between 1 and 8 workers");
    if (s == Strategy::kRandom) {
      const auto again =
          groups_to_json_lines(mine(src, tgt, profiles, &provider, params, 1), params);
      if (again != one) o.fail(name + ": rd not reproducible under a fixed seed");
    }
  }
}

Outcome mining_monotonicity() {
  Outcome o;
  {
    const fs::path in = kFixtures / "mine_5x5/input";
    const auto src = load_corpus(in / "src.jsonl", "", CorpusFormat::kJsonLines);
    const auto tgt = load_corpus(in / "tgt.jsonl", "", CorpusFormat::kJsonLines);
    const FileEmbeddingProvider provider(in / "embeddings.jsonl");
    mining_properties("5x5", src, tgt, provider, o);
  }
  {
    const fs::path in = kFixtures / "mine_200/input";
    const auto src = load_corpus(in / "src.jsonl", "", CorpusFormat::kJsonLines);
    const auto tgt = load_corpus(in / "tgt.jsonl", "", CorpusFormat::kJsonLines);
    const HashingEmbeddingProvider provider(128);
    mining_properties("200x200", src, tgt, provider, o);
  }
  for (const char* fixture : {"mine_5x5", "mine_200"}) {
    const auto r = verify_fixture(kFixtures / fixture);
    if (!r.passed) o.fail(std::string(fixture) + ": " + r.detail);
  }
  if (o.passed) o.detail = "p-subset chain, 1 vs 8 workers byte-identical, rd reproducible";
  return o;
}

Outcome distill_simulation() {
  Outcome o;
  const auto fixture = verify_fixture(kFixtures / "distill_6");
  if (!fixture.passed) o.fail("distill_6: " + fixture.detail);

  const auto articles = parse_articles(
      [] {
        std::ostringstream s;
        std::ifstream f(kFixtures / "distill_6/input/articles.jsonl");
        s << f.rdbuf();
        return s.str();
      }());
  for (const auto& a : articles) {
    const auto plan = distill_article(a, 0.5);
    const auto title_cost = static_cast<std::int64_t>(a.title.normalized_tokens().size());
    std::int64_t spent = 0;
    for (const auto& round : plan.trace) {
      std::int64_t cost = 0;
      for (const auto& id : round.selected) {
        for (const auto& item : round.items) {
          if (item.sentence_id == id) cost += item.cost;
        }
      }
      if (cost > round.capacity) o.fail(a.article_id + ": round over capacity");
      spent += cost;
      if (round.cost_after != title_cost + spent) o.fail(a.article_id + ": running cost mismatch");
      if (spent > plan.budget) o.fail(a.article_id + ": budget exceeded");
    }
    if (plan.total_cost > plan.budget) o.fail(a.article_id + ": total cost over budget");
    if (o.passed) {
      o.detail = a.article_id + ": " + std::to_string(plan.rounds) + " rounds, cost " +
                 std::to_string(plan.total_cost) + " of budget " + std::to_string(plan.budget);
    }
  }
  return o;
}

// ---------------------------------------------------------------------------

Corpus synthetic_corpus(const std::string& style, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> len(6, 16);
  std::uniform_int_distribution<int> word(0, 4999);
  std::vector<Sentence> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    Sentence& s = out[i];
    s.id = style.substr(0, 1) + std::to_string(i);
    s.style = style;
    s.tokens.resize(len(rng));
    for (auto& t : s.tokens) t = "w" + std::to_string(word(rng));
    s.entities = std::vector<std::string>(s.tokens.begin(), s.tokens.begin() + 3);
    for (std::size_t j = 0; j < s.tokens.size(); ++j) {
      s.text += (j ? " " : "") + s.tokens[j];
    }
  }
  return Corpus(style, std::move(out));
}

Outcome mining_performance() {
  Outcome o;
  const Corpus src = synthetic_corpus("negative", 10000, 7);
  const Corpus tgt = synthetic_corpus("positive", 10000, 8);
  ProfileMap profiles = build_profiles(src, default_stopwords());
  for (auto& kv : build_profiles(tgt, default_stopwords())) profiles.insert(kv);
  const HashingEmbeddingProvider provider(128);
  AlignmentParams params;
  params.strategy = Strategy::kSentenceEmbedding;
  params.k = 8;

  auto timed = [&](std::size_t workers, std::string* out) {
    const auto t0 = Clock::now();
    const auto r = mine(src, tgt, profiles, &provider, params, workers);
    const double s = seconds_since(t0);
    *out = groups_to_json_lines(r, params);
    return s;
  };
  std::string eight_out, one_out;
  const double t8 = timed(8, &eight_out);
  const double t1 = timed(1, &one_out);
  const double speedup = t1 / t8;

  std::ostringstream s;
  s.precision(2);
  s << std::fixed << "8 workers " << t8 << " s, 1 worker " << t1 << " s, speedup "
    << speedup << "x on " << std::thread::hardware_concurrency() << " hardware threads";
  o.detail = s.str();
  if (one_out != eight_out) o.fail("outputs differ between 1 and 8 workers; " + s.str());
  if (t8 >= 120.0) o.fail("over 120 s; " + s.str());
  if (speedup < 4.0) o.fail("speedup below 4x; " + s.str());
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const bool perf_only = argc > 1 && std::strcmp(argv[1], "--perf-only") == 0;
  int failures = 0;
  if (perf_only) {
    failures += report("mining performance: 10k x 10k semb, k=8, <120 s, >=4x from 1 to 8 workers",
                       mining_performance);
    return failures == 0 ? 0 : 1;
  }
  failures += report("GM reproduction within 0.0005", gm_reproduction);
  failures += report("i-PINC copy property", ipinc_copy);
  failures += report("knapsack optimality", knapsack_optimality);
  failures += report("SAS oracle equivalence within 1e-12", sas_equivalence);
  failures += report("distance metric axioms", distance_axioms);
  failures += report("contrastive loss contract", contrastive_contract);
  failures += report("safe-skip contract", safe_skip);
  failures += report("mining monotonicity and determinism", mining_monotonicity);
  failures += report("distillation simulation", distill_simulation);
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
