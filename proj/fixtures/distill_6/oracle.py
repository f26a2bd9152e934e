"""Step-by-step simulation of the salient-sentence distillation loop.

Tokens are whitespace splits of lowercase, suffix-free words, so the
normalizer is the identity on this input. Saliency is LCS length against the
running reference (title followed by selected sentences in selection order);
cost is token count; each round solves a 0/1 knapsack by brute force over all
subsets (max value, then min weight, then lexicographically smallest index
list) with capacity min(W_distill, W_max - spent). The loop runs while
W_distill <= W_max and stops once a round selects nothing.
"""
import itertools
import json
import math


def lcs(a, b):
    if not a or not b:
        return 0
    table = [[0] * (len(b) + 1) for _ in range(len(a) + 1)]
    for i in range(len(a)):
        for j in range(len(b)):
            table[i + 1][j + 1] = (table[i][j] + 1 if a[i] == b[j]
                                   else max(table[i][j + 1], table[i + 1][j]))
    return table[-1][-1]


def brute_knapsack(values, weights, cap):
    best = (0, 0, [])
    for r in range(1, len(values) + 1):
        for combo in itertools.combinations(range(len(values)), r):
            w = sum(weights[i] for i in combo)
            if w > cap:
                continue
            v = sum(values[i] for i in combo)
            key = (-v, w, list(combo))
            if key < (-best[0], best[1], best[2]):
                best = (v, w, list(combo))
    return best


LAMBDA = 0.5
out = []
for line in open("input/articles.jsonl"):
    art = json.loads(line)
    title = art["title"].split()
    sents = [s.split() for s in art["sentences"]]
    ids = [f'{art["article_id"]}-{i}' for i in range(len(sents))]
    budget = math.floor(LAMBDA * sum(len(s) for s in sents))
    selected = [False] * len(sents)
    reference = list(title)
    spent, total_value = 0, 0
    w_distill = len(title)
    trace = []
    while w_distill <= budget:
        cap = min(w_distill, budget - spent)
        cand = [i for i in range(len(sents)) if not selected[i] and sents[i]]
        items = [{"sentence_id": ids[i], "saliency": lcs(sents[i], reference),
                  "cost": len(sents[i])} for i in cand]
        v, w, pick = brute_knapsack([x["saliency"] for x in items],
                                    [x["cost"] for x in items], cap)
        if not pick:
            break
        for idx in pick:
            selected[cand[idx]] = True
            reference += sents[cand[idx]]
        total_value += v
        spent += w
        assert spent <= budget
        w_distill = len(title) + spent
        trace.append({"capacity": cap, "items": items,
                      "selected": [ids[cand[i]] for i in pick],
                      "cost_after": w_distill})
    out.append({"article_id": art["article_id"],
                "selected_ids": [ids[i] for i in range(len(sents)) if selected[i]],
                "total_value": total_value, "total_cost": spent,
                "budget": budget, "rounds": len(trace), "trace": trace})

with open("expected/plans.jsonl", "w") as f:
    for p in out:
        f.write(json.dumps(p) + "\n")
