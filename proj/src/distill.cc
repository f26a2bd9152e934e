#include "stylemine/distill.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_set>

#include "json.hpp"
#include "stylemine/error.hpp"
#include "stylemine/parallel.hpp"
#include "stylemine/tokenize.hpp"

namespace stylemine {

using nlohmann::json;

std::size_t lcs_len(const Tokens& a, const Tokens& b) {
  const Tokens& outer = a.size() >= b.size() ? a : b;
  const Tokens& inner = a.size() >= b.size() ? b : a;
  std::vector<std::size_t> prev(inner.size() + 1, 0);
  std::vector<std::size_t> cur(inner.size() + 1, 0);
  for (const auto& x : outer) {
    for (std::size_t j = 1; j <= inner.size(); ++j) {
      cur[j] = x == inner[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[inner.size()];
}

KnapsackResult knapsack(const std::vector<std::int64_t>& values,
                        const std::vector<std::int64_t>& weights,
                        std::int64_t budget) {
  if (values.size() != weights.size()) {
    throw InputError("knapsack: values and weights differ in length");
  }
  if (budget < 0) throw InputError("knapsack: negative budget");
  const std::size_t n = values.size();
  std::int64_t total_weight = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (weights[i] < 1) throw InputError("knapsack: weights must be >= 1");
    if (values[i] < 0) throw InputError("knapsack: values must be >= 0");
    total_weight += weights[i];
  }
  const auto cap = static_cast<std::size_t>(std::min(budget, total_weight));
  const std::size_t width = cap + 1;

  // best[i][c]: optimum over items i..n-1 with capacity c, as
  // (max value, then min weight). Filling from the back lets the forward
  // reconstruction take the earliest item whenever it is compatible with an
  // optimum, which yields the lexicographically smallest index set.
  std::vector<std::int64_t> value((n + 1) * width, 0);
  std::vector<std::int64_t> weight((n + 1) * width, 0);
  auto at = [width](std::size_t i, std::size_t c) { return i * width + c; };
  for (std::size_t ii = n; ii-- > 0;) {
    const auto w = static_cast<std::size_t>(weights[ii]);
    for (std::size_t c = 0; c <= cap; ++c) {
      std::int64_t v_best = value[at(ii + 1, c)];
      std::int64_t w_best = weight[at(ii + 1, c)];
      if (w <= c) {
        const std::int64_t v_take = values[ii] + value[at(ii + 1, c - w)];
        const std::int64_t w_take = weights[ii] + weight[at(ii + 1, c - w)];
        if (v_take > v_best || (v_take == v_best && w_take < w_best)) {
          v_best = v_take;
          w_best = w_take;
        }
      }
      value[at(ii, c)] = v_best;
      weight[at(ii, c)] = w_best;
    }
  }

  KnapsackResult r;
  std::size_t c = cap;
  for (std::size_t i = 0; i < n; ++i) {
    const auto w = static_cast<std::size_t>(weights[i]);
    if (w > c) continue;
    if (values[i] + value[at(i + 1, c - w)] == value[at(i, c)] &&
        weights[i] + weight[at(i + 1, c - w)] == weight[at(i, c)]) {
      r.selected.push_back(i);
      r.total_value += values[i];
      r.total_weight += weights[i];
      c -= w;
    }
  }
  return r;
}

DistillPlan distill_article(const Article& article, double lambda) {
  if (!(lambda > 0.0 && lambda <= 1.0)) {
    throw InputError("lambda must lie in (0, 1], got " + std::to_string(lambda));
  }
  if (article.sentences.empty()) {
    throw InputError("article " + article.article_id + " has no sentences");
  }
  const Tokens title = article.title.normalized_tokens();
  std::vector<Tokens> tokens;
  std::int64_t total_cost = 0;
  for (const auto& s : article.sentences) {
    tokens.push_back(s.normalized_tokens());
    total_cost += static_cast<std::int64_t>(tokens.back().size());
  }

  DistillPlan plan;
  plan.article_id = article.article_id;
  plan.budget = static_cast<std::int64_t>(
      std::floor(lambda * static_cast<double>(total_cost)));

  const auto title_cost = static_cast<std::int64_t>(title.size());
  std::vector<bool> selected(article.sentences.size(), false);
  Tokens reference = title;
  std::int64_t spent = 0;
  std::int64_t w_distill = title_cost;

  while (w_distill <= plan.budget) {
    DistillRound round;
    // Clamped so the cumulative selection never exceeds the budget.
    round.capacity = std::min(w_distill, plan.budget - spent);

    std::vector<std::size_t> candidates;
    std::vector<std::int64_t> values;
    std::vector<std::int64_t> weights;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      if (selected[i] || tokens[i].empty()) continue;
      DistillItem item{article.sentences[i].id,
                       static_cast<std::int64_t>(lcs_len(tokens[i], reference)),
                       static_cast<std::int64_t>(tokens[i].size())};
      candidates.push_back(i);
      values.push_back(item.saliency);
      weights.push_back(item.cost);
      round.items.push_back(std::move(item));
    }
    const auto picked = knapsack(values, weights, round.capacity);
    if (picked.selected.empty()) break;

    for (std::size_t idx : picked.selected) {
      const std::size_t i = candidates[idx];
      selected[i] = true;
      round.selected.push_back(article.sentences[i].id);
      reference.insert(reference.end(), tokens[i].begin(), tokens[i].end());
    }
    plan.total_value += picked.total_value;
    spent += picked.total_weight;
    w_distill = title_cost + spent;
    round.cost_after = w_distill;
    plan.trace.push_back(std::move(round));
    ++plan.rounds;
  }

  for (std::size_t i = 0; i < selected.size(); ++i) {
    if (selected[i]) plan.selected_ids.push_back(article.sentences[i].id);
  }
  plan.total_cost = spent;
  return plan;
}

std::vector<Article> parse_articles(std::string_view content,
                                    const std::string& origin) {
  std::vector<Article> out;
  std::unordered_set<std::string> seen;
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
    if (!j.is_object() || !j.contains("article_id") || !j["article_id"].is_string() ||
        !j.contains("title") || !j["title"].is_string() ||
        !j.contains("sentences") || !j["sentences"].is_array()) {
      throw InputError(where + ": expected {article_id, title, sentences:[...]}");
    }
    Article a;
    a.article_id = j["article_id"].get<std::string>();
    if (!seen.insert(a.article_id).second) {
      throw InputError(where + ": duplicate article_id " + a.article_id);
    }
    a.title.id = a.article_id + "-title";
    a.title.text = j["title"].get<std::string>();
    a.title.tokens = tokenize(a.title.text);
    std::size_t idx = 0;
    for (const auto& s : j["sentences"]) {
      if (!s.is_string()) throw InputError(where + ": sentences must be strings");
      Sentence sent;
      sent.id = a.article_id + "-" + std::to_string(idx++);
      sent.text = s.get<std::string>();
      sent.tokens = tokenize(sent.text);
      a.sentences.push_back(std::move(sent));
    }
    out.push_back(std::move(a));
  }
  return out;
}

std::string plan_to_json(const DistillPlan& plan, bool with_trace) {
  json j{{"article_id", plan.article_id},
         {"selected_ids", plan.selected_ids},
         {"total_value", plan.total_value},
         {"total_cost", plan.total_cost},
         {"budget", plan.budget},
         {"rounds", plan.rounds}};
  if (with_trace) {
    json rounds = json::array();
    for (const auto& r : plan.trace) {
      json items = json::array();
      for (const auto& it : r.items) {
        items.push_back({{"sentence_id", it.sentence_id},
                         {"saliency", it.saliency},
                         {"cost", it.cost}});
      }
      rounds.push_back({{"capacity", r.capacity},
                        {"items", std::move(items)},
                        {"selected", r.selected},
                        {"cost_after", r.cost_after}});
    }
    j["trace"] = std::move(rounds);
  }
  return j.dump();
}

std::vector<DistillPlan> distill_all(const std::vector<Article>& articles,
                                     double lambda, std::size_t workers) {
  std::vector<DistillPlan> plans(articles.size());
  parallel_for(articles.size(), workers, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) plans[i] = distill_article(articles[i], lambda);
  });
  return plans;
}

Corpus distilled_corpus(const std::vector<Article>& articles,
                        const std::vector<DistillPlan>& plans,
                        const std::string& style) {
  std::vector<Sentence> out;
  for (std::size_t a = 0; a < articles.size(); ++a) {
    std::unordered_set<std::string> keep(plans[a].selected_ids.begin(),
                                         plans[a].selected_ids.end());
    for (const auto& s : articles[a].sentences) {
      if (!keep.count(s.id)) continue;
      Sentence copy = s;
      copy.style = style;
      out.push_back(std::move(copy));
    }
  }
  return Corpus(style, std::move(out));
}

}  // namespace stylemine
