"""Entity-sequence distances by direct recursion and set arithmetic.

d_order: memoized edit-distance recursion (insert/delete/substitute, unit cost).
d_exist: size of the symmetric difference of the entity sets.
d_exist_missing: number of b-entities absent from a.
"""
import functools
import json


def edit(a, b):
    @functools.lru_cache(maxsize=None)
    def go(i, j):
        if i == len(a):
            return len(b) - j
        if j == len(b):
            return len(a) - i
        return min(go(i + 1, j) + 1, go(i, j + 1) + 1,
                   go(i + 1, j + 1) + (a[i] != b[j]))
    return go(0, 0)


with open("expected/distances.jsonl", "w") as f:
    for line in open("input/pairs.jsonl"):
        r = json.loads(line)
        A, B = set(r["a"]), set(r["b"])
        f.write(json.dumps({"d_order": edit(tuple(r["a"]), tuple(r["b"])),
                            "d_exist": len(A ^ B),
                            "d_exist_missing": len(B - A)}) + "\n")
