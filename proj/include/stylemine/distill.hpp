#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "stylemine/corpus.hpp"

namespace stylemine {

// Longest common subsequence length, O(|a||b|) time, O(min) memory.
std::size_t lcs_len(const Tokens& a, const Tokens& b);

struct KnapsackResult {
  std::vector<std::size_t> selected;  // ascending indices
  std::int64_t total_value = 0;
  std::int64_t total_weight = 0;
};

// Exact 0/1 knapsack by dynamic programming with backtracking. Among optimal
// selections prefers the lower total weight, then the lexicographically
// smallest index set. Weights must be >= 1, values >= 0, budget >= 0.
KnapsackResult knapsack(const std::vector<std::int64_t>& values,
                        const std::vector<std::int64_t>& weights,
                        std::int64_t budget);

struct DistillItem {
  std::string sentence_id;
  std::int64_t saliency = 0;
  std::int64_t cost = 0;
};

struct DistillRound {
  std::int64_t capacity = 0;
  std::vector<DistillItem> items;     // unselected sentences this round
  std::vector<std::string> selected;  // picked this round, article order
  std::int64_t cost_after = 0;        // W_distill after the update
};

struct DistillPlan {
  std::string article_id;
  std::vector<std::string> selected_ids;  // original article order
  std::int64_t total_value = 0;
  std::int64_t total_cost = 0;
  std::int64_t budget = 0;
  int rounds = 0;
  std::vector<DistillRound> trace;
};

struct Article {
  std::string article_id;
  Sentence title;
  std::vector<Sentence> sentences;
};

// Iterative saliency + knapsack distillation. Sentences use their
// normalized tokens. Throws InputError when lambda is outside (0, 1] or the
// article has no sentences.
DistillPlan distill_article(const Article& article, double lambda);

// json-lines {article_id, title, sentences:[...]}; sentence ids become
// "<article_id>-<index>".
std::vector<Article> parse_articles(std::string_view content,
                                    const std::string& origin = "<memory>");

std::string plan_to_json(const DistillPlan& plan, bool with_trace = false);

// Distills each article independently, results in input order.
std::vector<DistillPlan> distill_all(const std::vector<Article>& articles,
                                     double lambda, std::size_t workers = 1);

// Selected sentences of every plan as one corpus in the json-lines format.
Corpus distilled_corpus(const std::vector<Article>& articles,
                        const std::vector<DistillPlan>& plans,
                        const std::string& style);

}  // namespace stylemine
