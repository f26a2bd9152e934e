#include "stylemine/fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <utility>

#include "json.hpp"
#include "stylemine/align.hpp"
#include "stylemine/distill.hpp"
#include "stylemine/error.hpp"
#include "stylemine/metrics.hpp"
#include "stylemine/parallel.hpp"
#include "stylemine/reward.hpp"
#include "stylemine/scenegraph.hpp"

namespace stylemine {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Thrown by checks; caught per fixture and reported as a failure detail.
struct Mismatch {
  std::string what;
};

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<json> read_jsonl(const fs::path& path) {
  std::vector<json> out;
  std::istringstream in(read_text(path));
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.push_back(json::parse(line));
  }
  return out;
}

void expect(bool ok, const std::string& what) {
  if (!ok) throw Mismatch{what};
}

void expect_near(double got, double want, double tol, const std::string& what) {
  if (!(std::fabs(got - want) <= tol)) {
    std::ostringstream os;
    os.precision(17);
    os << what << ": got " << got << ", expected " << want;
    throw Mismatch{os.str()};
  }
}

template <typename T>
std::string show(const T& v) {
  return json(v).dump();
}

Corpus load_jsonl(const fs::path& path, const std::string& style) {
  return load_corpus(path, style, CorpusFormat::kJsonLines);
}

ProfileMap profiles_for(const Corpus& a, const Corpus& b) {
  ProfileMap m = build_profiles(a, default_stopwords());
  for (auto& kv : build_profiles(b, default_stopwords())) m.insert(std::move(kv));
  return m;
}

void check_knapsack(const fs::path& dir, const json&) {
  const auto inputs = read_jsonl(dir / "input/instances.jsonl");
  const auto want = read_jsonl(dir / "expected/results.jsonl");
  expect(inputs.size() == want.size(), "instance/result count differs");
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const auto r = knapsack(inputs[i]["values"].get<std::vector<std::int64_t>>(),
                            inputs[i]["weights"].get<std::vector<std::int64_t>>(),
                            inputs[i]["budget"].get<std::int64_t>());
    const std::string at = "instance " + std::to_string(i);
    expect(r.total_value == want[i]["value"].get<std::int64_t>(), at + ": value");
    expect(r.total_weight == want[i]["weight"].get<std::int64_t>(), at + ": weight");
    expect(r.selected == want[i]["selected"].get<std::vector<std::size_t>>(),
           at + ": selected " + show(r.selected));
  }
}

void check_sas(const fs::path& dir, const json& spec) {
  const double tol = spec.value("tolerance", 1e-12);
  const auto inputs = read_jsonl(dir / "input/pairs.jsonl");
  const auto want = read_jsonl(dir / "expected/sas.jsonl");
  expect(inputs.size() == want.size(), "pair/result count differs");
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const auto& in = inputs[i];
    const EntityProfile s("s", in["src"].get<std::vector<std::string>>());
    const EntityProfile t("t", in["tgt"].get<std::vector<std::string>>());
    const auto b = sas(s, t, in["tgt_len"].get<std::size_t>(),
                       in["beta"].get<double>(),
                       parse_norm_mode(in["norm_mode"].get<std::string>()));
    const std::string at = "pair " + std::to_string(i);
    expect(b.overlap == want[i]["overlap"].get<std::size_t>(), at + ": overlap");
    expect(b.norm_len == want[i]["norm_len"].get<std::size_t>(), at + ": norm_len");
    expect_near(b.precision, want[i]["precision"], tol, at + ": precision");
    expect_near(b.recall, want[i]["recall"], tol, at + ": recall");
    expect_near(b.f_beta, want[i]["f_beta"], tol, at + ": f_beta");
    expect_near(b.sas, want[i]["sas"], tol, at + ": sas");
    if (want[i]["sas"].get<double>() == 0.0) expect(b.sas == 0.0, at + ": exact zero");
  }
}

AlignmentParams params_of(const json& j) {
  AlignmentParams p;
  p.strategy = parse_strategy(j.at("strategy").get<std::string>());
  p.k = j.at("k").get<std::size_t>();
  p.p = j.at("p").get<double>();
  p.beta = j.at("beta").get<double>();
  p.norm_mode = parse_norm_mode(j.at("norm_mode").get<std::string>());
  p.seed = j.at("seed").get<std::uint64_t>();
  return p;
}

void check_mine(const fs::path& dir, const json& spec) {
  const double tol = spec.value("tolerance", 1e-9);
  const Corpus src = load_jsonl(dir / "input/src.jsonl", "");
  const Corpus tgt = load_jsonl(dir / "input/tgt.jsonl", "");
  const FileEmbeddingProvider provider(dir / "input/embeddings.jsonl");
  const auto params = params_of(json::parse(read_text(dir / "input/params.json")));
  const auto profiles = profiles_for(src, tgt);
  const json want = json::parse(read_text(dir / "expected/groups.json"));

  for (std::size_t workers : {std::size_t{1}, std::size_t{8}}) {
    const auto got = mine(src, tgt, profiles, &provider, params, workers);
    const std::string w = "workers=" + std::to_string(workers) + ": ";
    expect(got.dropped_sources == want["dropped_sources"].get<std::size_t>(),
           w + "dropped_sources " + std::to_string(got.dropped_sources));
    const auto& groups = want["groups"];
    expect(got.groups.size() == groups.size(),
           w + "group count " + std::to_string(got.groups.size()));
    for (std::size_t g = 0; g < groups.size(); ++g) {
      const auto& G = got.groups[g];
      const auto& E = groups[g];
      const std::string at = w + E["source_id"].get<std::string>();
      expect(G.source_id == E["source_id"], at + ": source id " + G.source_id);
      expect(G.expert_id == E["expert_id"], at + ": expert " + G.expert_id);
      expect(G.amateur_ids == E["amateur_ids"].get<std::vector<std::string>>(),
             at + ": amateurs " + show(G.amateur_ids));
      expect(G.candidates.size() == E["candidates"].size(), at + ": candidate count");
      for (std::size_t c = 0; c < G.candidates.size(); ++c) {
        const auto& ec = E["candidates"][c];
        expect(G.candidates[c].target_id == ec["target_id"],
               at + ": candidate " + std::to_string(c));
        expect(G.candidates[c].cosine && G.candidates[c].sas, at + ": missing scores");
        expect_near(*G.candidates[c].cosine, ec["cosine"], tol, at + ": cosine");
        expect_near(*G.candidates[c].sas, ec["sas"], tol, at + ": sas");
      }
    }
  }
}

std::set<std::pair<std::string, std::string>> pair_set(const MineResult& r) {
  std::set<std::pair<std::string, std::string>> out;
  for (const auto& g : r.groups) {
    for (const auto& c : g.candidates) out.emplace(g.source_id, c.target_id);
  }
  return out;
}

bool subset(const std::set<std::pair<std::string, std::string>>& a,
            const std::set<std::pair<std::string, std::string>>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

void check_mine_properties(const fs::path& dir, const json& spec) {
  const Corpus src = load_jsonl(dir / "input/src.jsonl", "");
  const Corpus tgt = load_jsonl(dir / "input/tgt.jsonl", "");
  const HashingEmbeddingProvider provider(spec.value("dim", std::size_t{128}));
  const auto profiles = profiles_for(src, tgt);

  AlignmentParams base;
  base.k = 8;
  std::set<std::pair<std::string, std::string>> prev;
  bool first = true;
  for (double p : {0.0, 0.02, 0.05, 0.1, 0.2}) {
    base.p = p;
    const auto cur = pair_set(mine(src, tgt, profiles, &provider, base, 1));
    if (!first) {
      expect(subset(cur, prev), "p=" + std::to_string(p) + " not a subset of lower p");
    }
    prev = cur;
    first = false;
  }

  base.p = 0.05;
  auto small = base;
  small.k = 4;
  expect(subset(pair_set(mine(src, tgt, profiles, &provider, small, 1)),
                pair_set(mine(src, tgt, profiles, &provider, base, 1))),
         "k=4 not a subset of k=8");

  for (Strategy s : {Strategy::kRandom, Strategy::kSentenceEmbedding,
                     Strategy::kSentenceEmbeddingSas}) {
    auto params = base;
    params.strategy = s;
    params.seed = 17;
    const auto one = groups_to_json_lines(
        mine(src, tgt, profiles, &provider, params, 1), params);
    const auto eight = groups_to_json_lines(
        mine(src, tgt, profiles, &provider, params, 8), params);
    expect(one == eight, to_string(s) + ": workers 1 and 8 differ");
    if (s == Strategy::kRandom) {
      const auto again = groups_to_json_lines(
          mine(src, tgt, profiles, &provider, params, 3), params);
      expect(one == again, "rd: rerun with the same seed differs");
      params.seed = 18;
      const auto other = groups_to_json_lines(
          mine(src, tgt, profiles, &provider, params, 1), params);
      expect(one != other, "rd: different seeds give identical output");
    }
  }
}

void check_stats(const fs::path& dir, const json& spec) {
  const double tol = spec.value("tolerance", 1e-9);
  const Corpus src = load_jsonl(dir / "input/src.jsonl", "");
  const Corpus tgt = load_jsonl(dir / "input/tgt.jsonl", "");
  AlignmentParams params;
  const auto groups =
      groups_from_json_lines(read_text(dir / "input/groups.jsonl"), &params);
  const auto r = dataset_stats(groups.groups, src, tgt, profiles_for(src, tgt), params);
  const json want = json::parse(read_text(dir / "expected/stats.json"));
  expect(r.sentence_pairs == want["sentence_pairs"].get<std::size_t>(),
         "sentence_pairs " + std::to_string(r.sentence_pairs));
  for (const auto& [side, got] : {std::pair{"source", &r.source},
                                  std::pair{"target", &r.target}}) {
    const auto& w = want[side];
    expect(got->scene_entities == w["scene_entities"].get<std::size_t>(),
           std::string(side) + ".scene_entities");
    expect_near(got->avg_sent_len, w["avg_sent_len"], tol,
                std::string(side) + ".avg_sent_len");
    expect_near(got->avg_entities_per_sent, w["avg_entities_per_sent"], tol,
                std::string(side) + ".avg_entities_per_sent");
  }
  expect_near(r.avg_overlap, want["avg_overlap"], tol, "avg_overlap");
  expect_near(r.avg_sas, want["avg_sas"], tol, "avg_sas");
}

void check_distill(const fs::path& dir, const json& spec) {
  const double lambda = spec.value("lambda", 0.5);
  const auto articles = parse_articles(read_text(dir / "input/articles.jsonl"),
                                       "articles.jsonl");
  const auto want = read_jsonl(dir / "expected/plans.jsonl");
  expect(articles.size() == want.size(), "article/plan count differs");
  for (std::size_t i = 0; i < articles.size(); ++i) {
    const auto plan = distill_article(articles[i], lambda);
    const json got = json::parse(plan_to_json(plan, true));
    expect(got == want[i], "plan differs: " + got.dump());
    std::int64_t spent = 0;
    for (const auto& round : plan.trace) {
      for (const auto& id : round.selected) {
        for (const auto& item : round.items) {
          if (item.sentence_id == id) spent += item.cost;
        }
      }
      expect(spent <= plan.budget, "budget exceeded after a round");
    }
  }
}

void check_metrics(const fs::path& dir, const json& spec) {
  const double tol = spec.value("tolerance", 1e-9);
  const auto records =
      parse_eval_records(read_text(dir / "input/records.jsonl"), "records.jsonl");
  const json want = json::parse(read_text(dir / "expected/report.json"));
  for (std::size_t workers : {std::size_t{1}, std::size_t{4}}) {
    const auto r = evaluate(records, BleuMode::kAverage, workers);
    expect(r.count == want["count"].get<std::size_t>(), "count");
    for (std::size_t n = 0; n < 4; ++n) {
      expect_near(r.bleu_n[n], want["bleu_n"][n], tol,
                  "bleu_" + std::to_string(n + 1));
    }
    expect_near(r.bleu_avg, want["bleu_avg"], tol, "bleu_avg");
    expect_near(r.i_pinc, want["i_pinc"], tol, "i_pinc");
    expect(r.acc && r.gm, "acc/gm missing");
    expect_near(*r.acc, want["acc"], tol, "acc");
    expect_near(*r.gm, want["gm"], tol, "gm");
  }
}

void check_distances(const fs::path& dir, const json&) {
  const auto inputs = read_jsonl(dir / "input/pairs.jsonl");
  const auto want = read_jsonl(dir / "expected/distances.jsonl");
  expect(inputs.size() == want.size(), "pair/result count differs");
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const EntityProfile a("a", inputs[i]["a"].get<std::vector<std::string>>());
    const EntityProfile b("b", inputs[i]["b"].get<std::vector<std::string>>());
    const std::string at = "pair " + std::to_string(i);
    expect(d_order(a, b) == want[i]["d_order"].get<std::size_t>(), at + ": d_order");
    expect(d_exist(a, b, ExistMode::kSymmetric) == want[i]["d_exist"].get<std::size_t>(),
           at + ": d_exist");
    expect(d_exist(a, b, ExistMode::kMissing) ==
               want[i]["d_exist_missing"].get<std::size_t>(),
           at + ": d_exist missing");
  }
}

void check_lcs(const fs::path& dir, const json&) {
  const auto inputs = read_jsonl(dir / "input/pairs.jsonl");
  const auto want = read_jsonl(dir / "expected/lcs.jsonl");
  expect(inputs.size() == want.size(), "pair/result count differs");
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const auto a = inputs[i]["a"].get<Tokens>();
    const auto b = inputs[i]["b"].get<Tokens>();
    expect(lcs_len(a, b) == want[i]["lcs"].get<std::size_t>(),
           "pair " + std::to_string(i));
    expect(lcs_len(b, a) == want[i]["lcs"].get<std::size_t>(),
           "pair " + std::to_string(i) + " reversed");
  }
}

void check_gm(const fs::path& dir, const json& spec) {
  const double tol = spec.value("tolerance", 1e-12);
  const double target_tol = spec.value("target_tolerance", 0.0005);
  const auto inputs = read_jsonl(dir / "input/rows.jsonl");
  const auto want = read_jsonl(dir / "expected/gm.jsonl");
  expect(inputs.size() == want.size(), "row/result count differs");
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const double g = gm(inputs[i]["acc"], inputs[i]["bleu"]);
    const std::string at = "row " + std::to_string(i);
    expect_near(g, want[i]["gm"], tol, at + ": gm");
    expect_near(g, inputs[i]["target_gm"], target_tol, at + ": target gm");
  }
}

using Check = std::function<void(const fs::path&, const json&)>;

const Check* find_check(const std::string& kind) {
  static const std::vector<std::pair<std::string, Check>> checks = {
      {"knapsack", check_knapsack}, {"sas", check_sas},
      {"mine", check_mine},         {"mine_properties", check_mine_properties},
      {"stats", check_stats},       {"distill", check_distill},
      {"metrics", check_metrics},   {"distances", check_distances},
      {"lcs", check_lcs},           {"gm", check_gm},
  };
  for (const auto& [name, fn] : checks) {
    if (name == kind) return &fn;
  }
  return nullptr;
}

}  // namespace

FixtureResult verify_fixture(const fs::path& dir) {
  FixtureResult r;
  r.name = dir.filename().string();
  try {
    const json spec = json::parse(read_text(dir / "fixture.json"));
    const std::string kind = spec.value("kind", "");
    const Check* check = find_check(kind);
    if (check == nullptr) {
      r.detail = "unknown fixture kind '" + kind + "'";
      return r;
    }
    (*check)(dir, spec);
    r.passed = true;
  } catch (const Mismatch& m) {
    r.detail = m.what;
  } catch (const std::exception& e) {
    r.detail = std::string("error: ") + e.what();
  }
  return r;
}

std::vector<FixtureResult> verify_all(const fs::path& root, std::size_t workers) {
  if (!fs::is_directory(root)) {
    throw InputError("fixture root " + root.string() + " is not a directory");
  }
  std::vector<fs::path> dirs;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (entry.is_directory() && fs::exists(entry.path() / "fixture.json")) {
      dirs.push_back(entry.path());
    }
  }
  std::sort(dirs.begin(), dirs.end());
  std::vector<FixtureResult> out(dirs.size());
  parallel_for(dirs.size(), workers, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) out[i] = verify_fixture(dirs[i]);
  });
  return out;
}

}  // namespace stylemine
