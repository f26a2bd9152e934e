#include "doctest.h"
#include "stylemine/distill.hpp"
#include "stylemine/error.hpp"
#include "stylemine/tokenize.hpp"

#include <random>

using namespace stylemine;

namespace {

Article article(const std::string& title, const std::vector<std::string>& sentences) {
  std::string line = "{\"article_id\":\"a\",\"title\":\"" + title + "\",\"sentences\":[";
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    line += (i ? ",\"" : "\"") + sentences[i] + "\"";
  }
  line += "]}";
  return parse_articles(line).front();
}

// Exhaustive reference: best value, then least weight, then smallest index list.
KnapsackResult brute(const std::vector<std::int64_t>& v,
                     const std::vector<std::int64_t>& w, std::int64_t budget) {
  KnapsackResult best;
  const std::size_t n = v.size();
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    KnapsackResult cur;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (1u << i)) {
        cur.selected.push_back(i);
        cur.total_value += v[i];
        cur.total_weight += w[i];
      }
    }
    if (cur.total_weight > budget) continue;
    if (cur.total_value > best.total_value ||
        (cur.total_value == best.total_value &&
         (cur.total_weight < best.total_weight ||
          (cur.total_weight == best.total_weight && cur.selected < best.selected)))) {
      best = cur;
    }
  }
  return best;
}

}  // namespace

TEST_CASE("lcs examples") {
  CHECK(lcs_len({"a", "b", "c", "d"}, {"a", "b", "c", "d"}) == 4);
  CHECK(lcs_len({"the", "cat", "sat"}, {"the", "dog", "sat", "here"}) == 2);
  CHECK(lcs_len({"x", "y"}, {"p", "q"}) == 0);
  CHECK(lcs_len({}, {"p"}) == 0);
  CHECK(lcs_len({"a", "b", "a"}, {"b", "a", "b"}) == 2);
}

TEST_CASE("knapsack examples") {
  auto r = knapsack({3, 4, 5}, {2, 3, 4}, 5);
  CHECK(r.selected == std::vector<std::size_t>{0, 1});
  CHECK(r.total_value == 7);
  CHECK(r.total_weight == 5);
  CHECK(knapsack({3, 4, 5}, {2, 3, 4}, 0).selected.empty());
  r = knapsack({10}, {11}, 10);
  CHECK(r.selected.empty());
  CHECK(r.total_value == 0);
  CHECK(knapsack({}, {}, 10).selected.empty());
  // Zero-value items are never taken.
  CHECK(knapsack({0, 0}, {1, 1}, 5).selected.empty());
  // Ties: equal value, lighter wins; then earliest indices.
  CHECK(knapsack({5, 5}, {3, 2}, 3).selected == std::vector<std::size_t>{1});
  CHECK(knapsack({5, 5}, {2, 2}, 3).selected == std::vector<std::size_t>{0});
}

TEST_CASE("knapsack validates input") {
  CHECK_THROWS_AS(knapsack({1}, {}, 1), InputError);
  CHECK_THROWS_AS(knapsack({1}, {0}, 1), InputError);
  CHECK_THROWS_AS(knapsack({-1}, {1}, 1), InputError);
  CHECK_THROWS_AS(knapsack({1}, {1}, -1), InputError);
}

TEST_CASE("knapsack matches exhaustive enumeration") {
  std::mt19937 rng(2024);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = rng() % 13;
    std::vector<std::int64_t> v(n), w(n);
    for (std::size_t i = 0; i < n; ++i) {
      v[i] = rng() % 8;
      w[i] = 1 + rng() % 8;
    }
    const std::int64_t budget = rng() % 30;
    const auto got = knapsack(v, w, budget);
    const auto want = brute(v, w, budget);
    CHECK(got.total_value == want.total_value);
    CHECK(got.total_weight == want.total_weight);
    CHECK(got.selected == want.selected);
    CHECK(got.total_weight <= budget);
  }
}

TEST_CASE("one sentence equal to the title is selected in round one") {
  const auto plan = distill_article(article("big storm hit the coast", {"big storm hit the coast"}), 1.0);
  CHECK(plan.selected_ids == std::vector<std::string>{"a-0"});
  CHECK(plan.rounds == 1);
  CHECK(plan.total_value == 5);
  CHECK(plan.total_cost == 5);
}

TEST_CASE("a budget below the title length selects nothing") {
  const auto plan = distill_article(
      article("city council approve new park plan",
              {"council approve park", "the weather turn cold today again"}),
      0.3);
  CHECK(plan.budget == 2);
  CHECK(plan.rounds == 0);
  CHECK(plan.selected_ids.empty());
  CHECK(plan.trace.empty());
}

TEST_CASE("cumulative cost never exceeds the budget") {
  std::mt19937 rng(5);
  const std::vector<std::string> vocab = {"city", "park", "vote", "plan", "river",
                                          "mayor", "tree", "road", "bridge", "tax"};
  for (int trial = 0; trial < 200; ++trial) {
    auto sentence = [&](std::size_t max_len) {
      std::string s;
      const std::size_t len = 1 + rng() % max_len;
      for (std::size_t i = 0; i < len; ++i) s += (i ? " " : "") + vocab[rng() % vocab.size()];
      return s;
    };
    std::vector<std::string> sents;
    for (std::size_t i = 0, n = 1 + rng() % 9; i < n; ++i) sents.push_back(sentence(12));
    const double lambda = 0.05 + 0.95 * (rng() % 100) / 100.0;
    const auto plan = distill_article(article(sentence(4), sents), lambda);
    CHECK(plan.total_cost <= plan.budget);
    std::int64_t spent = 0;
    for (const auto& round : plan.trace) {
      CHECK(round.capacity <= plan.budget - spent);
      for (const auto& id : round.selected) {
        for (const auto& item : round.items) {
          if (item.sentence_id == id) spent += item.cost;
        }
      }
      CHECK(spent <= plan.budget);
      CHECK_FALSE(round.selected.empty());
    }
    CHECK(spent == plan.total_cost);
  }
}

TEST_CASE("distill validation and parsing") {
  const auto a = article("t", {"x"});
  CHECK_THROWS_AS(distill_article(a, 0.0), InputError);
  CHECK_THROWS_AS(distill_article(a, 1.5), InputError);
  CHECK_THROWS_AS(distill_article(article("t", {}), 0.5), InputError);
  CHECK_THROWS_WITH_AS(parse_articles("{\"article_id\":\"a\"}", "arts.jsonl"),
                       doctest::Contains("arts.jsonl:1"), InputError);
  CHECK_THROWS_WITH_AS(
      parse_articles("{\"article_id\":\"a\",\"title\":\"t\",\"sentences\":[]}\n"
                     "{\"article_id\":\"a\",\"title\":\"t\",\"sentences\":[]}"),
      doctest::Contains("duplicate article_id a"), InputError);
  CHECK(a.sentences[0].id == "a-0");
  CHECK(a.title.id == "a-title");
}

TEST_CASE("distill_all is independent of workers and feeds a corpus") {
  std::vector<Article> arts;
  for (int i = 0; i < 20; ++i) {
    arts.push_back(article("storm hit coast " + std::to_string(i),
                           {"storm hit the coast hard", "rain fell", "coast road closed",
                            "people stay home"}));
  }
  const auto one = distill_all(arts, 0.6, 1);
  const auto many = distill_all(arts, 0.6, 7);
  for (std::size_t i = 0; i < arts.size(); ++i) {
    CHECK(plan_to_json(one[i], true) == plan_to_json(many[i], true));
  }
  const Corpus c = distilled_corpus({arts[0]}, {one[0]}, "left");
  CHECK(c.size() == one[0].selected_ids.size());
  CHECK(c.style() == "left");
}
