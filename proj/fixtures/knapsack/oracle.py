"""Exhaustive subset enumeration.

Optimum = max total value; ties -> min total weight; ties -> the
lexicographically smallest ascending index list.
"""
import itertools
import json

with open("input/instances.jsonl") as f, open("expected/results.jsonl", "w") as out:
    for line in f:
        inst = json.loads(line)
        v, w, cap = inst["values"], inst["weights"], inst["budget"]
        n = len(v)
        best = None
        for r in range(n + 1):
            for combo in itertools.combinations(range(n), r):
                tw = sum(w[i] for i in combo)
                if tw > cap:
                    continue
                tv = sum(v[i] for i in combo)
                key = (-tv, tw, list(combo))
                if best is None or key < best:
                    best = key
        out.write(json.dumps({"value": -best[0], "weight": best[1], "selected": best[2]}) + "\n")
