"""Exhaustive pairwise mining oracle.

For every source: cosine against every target from the raw vectors, full
sort by (-cosine, target id), keep the first k, score each with the SAS
formula, keep SAS >= p, expert = max SAS (cosine breaks ties). Sources with no
survivors are dropped and counted.
"""
import json
import math


def load(path):
    with open(path) as f:
        return [json.loads(l) for l in f if l.strip()]


src = load("input/src.jsonl")
tgt = load("input/tgt.jsonl")
vec = {r["id"]: r["vector"] for r in load("input/embeddings.jsonl")}
params = json.load(open("input/params.json"))
k, p, beta = params["k"], params["p"], params["beta"]


def cos(a, b):
    dot = sum(x * y for x, y in zip(a, b))
    return dot / (math.sqrt(sum(x * x for x in a)) * math.sqrt(sum(y * y for y in b)))


def sas(s_ents, t_ents, t_len):
    S, T = set(s_ents), set(t_ents)
    ov = len(S & T)
    if not S or not T or ov == 0:
        return 0.0
    P, R = ov / len(T), ov / len(S)
    b2 = beta * beta
    return (1 + b2) * P * R / (b2 * P + R) / t_len


groups, dropped = [], 0
for s in src:
    scored = sorted(((-cos(vec[s["id"]], vec[t["id"]]), t["id"], t) for t in tgt))[:k]
    kept = []
    for neg_cos, tid, t in scored:
        score = sas(s["entities"], t["entities"], len(t["tokens"]))
        if score >= p:
            kept.append({"target_id": tid, "cosine": -neg_cos, "sas": score})
    if not kept:
        dropped += 1
        continue
    expert = max(kept, key=lambda c: (c["sas"], c["cosine"]))
    groups.append({
        "source_id": s["id"],
        "candidates": kept,
        "expert_id": expert["target_id"],
        "amateur_ids": [c["target_id"] for c in kept if c is not expert],
    })
groups.sort(key=lambda g: g["source_id"])
with open("expected/groups.json", "w") as f:
    json.dump({"dropped_sources": dropped, "groups": groups}, f, indent=1)
