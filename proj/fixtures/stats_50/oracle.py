"""Per-pair dataset statistics recomputed from the raw files.

For every (source, candidate) pair: token counts, entity counts, entity-set
overlap and SAS (F_beta of entity precision/recall divided by the target token
count, 0 when either set is empty or the overlap is 0). Averages are over pairs.
"""
import json

src = {r["id"]: r for r in map(json.loads, open("input/src.jsonl"))}
tgt = {r["id"]: r for r in map(json.loads, open("input/tgt.jsonl"))}
lines = [json.loads(l) for l in open("input/groups.jsonl") if l.strip()]
beta = lines[0]["params"]["beta"]

pairs = src_len = tgt_len = src_ent = tgt_ent = overlap = 0
sas_sum = 0.0
for g in lines[1:]:
    s = src[g["source_id"]]
    S = set(s["entities"])
    for c in g["candidates"]:
        t = tgt[c["target_id"]]
        T = set(t["entities"])
        pairs += 1
        src_len += len(s["tokens"])
        tgt_len += len(t["tokens"])
        src_ent += len(S)
        tgt_ent += len(T)
        ov = len(S & T)
        overlap += ov
        if S and T and ov:
            P, R = ov / len(T), ov / len(S)
            b2 = beta * beta
            sas_sum += (1 + b2) * P * R / (b2 * P + R) / len(t["tokens"])

expected = {
    "sentence_pairs": pairs,
    "source": {"scene_entities": src_ent, "avg_sent_len": src_len / pairs,
               "avg_entities_per_sent": src_ent / pairs},
    "target": {"scene_entities": tgt_ent, "avg_sent_len": tgt_len / pairs,
               "avg_entities_per_sent": tgt_ent / pairs},
    "avg_overlap": overlap / pairs,
    "avg_sas": sas_sum / pairs,
}
with open("expected/stats.json", "w") as f:
    json.dump(expected, f, indent=2)
