"""Synthetic 200x200 restaurant-review corpora with scene entities."""
import json
import random

rng = random.Random(4242)
NOUNS = ["food", "service", "pizza", "waiter", "table", "wine", "menu", "staff",
         "dessert", "salad", "burger", "coffee", "bar", "price", "room", "music"]
NEG = ["cold", "slow", "bland", "rude", "dirty", "noisy", "stale", "awful"]
POS = ["hot", "quick", "tasty", "kind", "clean", "quiet", "fresh", "great"]
FILL = ["the", "was", "and", "very", "a", "our", "so", "too"]


def make(prefix, style, adjs):
    out = []
    for i in range(200):
        ents = rng.sample(NOUNS, rng.randint(0, 3))
        toks = []
        for e in ents:
            toks += [rng.choice(FILL), e, rng.choice(FILL), rng.choice(adjs)]
        toks += [rng.choice(FILL) for _ in range(rng.randint(1, 4))]
        out.append({"id": f"{prefix}{i:03d}", "style": style,
                    "text": " ".join(toks), "entities": ents})
    return out


for name, style, adjs, prefix in [("src", "negative", NEG, "n"),
                                  ("tgt", "positive", POS, "p")]:
    with open(f"input/{name}.jsonl", "w") as f:
        for r in make(prefix, style, adjs):
            f.write(json.dumps(r) + "\n")
