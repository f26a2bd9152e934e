"""Longest common subsequence by memoized recursion on suffixes."""
import functools
import json


def lcs(a, b):
    @functools.lru_cache(maxsize=None)
    def go(i, j):
        if i == len(a) or j == len(b):
            return 0
        if a[i] == b[j]:
            return 1 + go(i + 1, j + 1)
        return max(go(i + 1, j), go(i, j + 1))
    return go(0, 0)


with open("expected/lcs.jsonl", "w") as f:
    for line in open("input/pairs.jsonl"):
        r = json.loads(line)
        f.write(json.dumps({"lcs": lcs(tuple(r["a"]), tuple(r["b"]))}) + "\n")
