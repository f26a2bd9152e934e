"""Two small corpora plus a groups file holding exactly 50 pairs."""
import json
import random

rng = random.Random(5050)
ENTS = ["food", "staff", "menu", "wine", "room", "price", "dessert", "music"]
WORDS = ["the", "a", "so", "very", "our", "and", "then", "it"]


def sentence(sid, style):
    ents = rng.sample(ENTS, rng.randint(0, 4))
    toks = ents + [rng.choice(WORDS) for _ in range(rng.randint(1, 9))]
    rng.shuffle(toks)
    return {"id": sid, "style": style, "text": " ".join(toks),
            "tokens": toks, "entities": ents}


src = [sentence(f"s{i:02d}", "negative") for i in range(20)]
tgt = [sentence(f"t{i:02d}", "positive") for i in range(30)]
for name, rows in [("src", src), ("tgt", tgt)]:
    with open(f"input/{name}.jsonl", "w") as f:
        for r in rows:
            f.write(json.dumps(r) + "\n")

sizes = [1] * 20
for _ in range(30):
    sizes[rng.randrange(20)] += 1
params = {"strategy": "semb-sas", "k": 8, "p": 0.0, "beta": 2.0,
          "norm_mode": "tokens", "seed": 0}
with open("input/groups.jsonl", "w") as f:
    f.write(json.dumps({"v": 1, "kind": "groups", "count": 20,
                        "dropped_sources": 0, "params": params}) + "\n")
    for i, n in enumerate(sizes):
        picks = rng.sample([t["id"] for t in tgt], min(n, 8))
        cands = [{"target_id": t} for t in picks]
        f.write(json.dumps({"source_id": f"s{i:02d}", "candidates": cands,
                            "expert_id": picks[0],
                            "amateur_ids": picks[1:]}) + "\n")
