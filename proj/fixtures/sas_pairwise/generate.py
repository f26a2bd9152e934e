"""Random entity-profile pairs over a small alphabet, plus hand cases."""
import json
import random

rng = random.Random(77)
alphabet = ["food", "service", "staff", "price", "pizza", "menu", "wine", "table"]
modes = ["tokens", "entities", "none"]
with open("input/pairs.jsonl", "w") as f:
    hand = [
        {"src": ["food", "service"], "tgt": ["food", "staff"], "tgt_len": 8, "beta": 1.0, "norm_mode": "tokens"},
        {"src": ["food"], "tgt": ["food"], "tgt_len": 5, "beta": 1.0, "norm_mode": "tokens"},
        {"src": ["food"], "tgt": ["wine"], "tgt_len": 5, "beta": 1.0, "norm_mode": "tokens"},
        {"src": [], "tgt": ["wine"], "tgt_len": 5, "beta": 2.0, "norm_mode": "none"},
        {"src": ["wine"], "tgt": [], "tgt_len": 5, "beta": 0.5, "norm_mode": "entities"},
    ]
    for h in hand:
        f.write(json.dumps(h) + "\n")
    for _ in range(200):
        src = rng.sample(alphabet, rng.randint(0, 5))
        tgt = rng.sample(alphabet, rng.randint(0, 5))
        f.write(json.dumps({
            "src": src, "tgt": tgt,
            "tgt_len": rng.randint(max(1, len(tgt)), 20),
            "beta": rng.choice([0.5, 1.0, 2.0]),
            "norm_mode": rng.choice(modes),
        }) + "\n")
