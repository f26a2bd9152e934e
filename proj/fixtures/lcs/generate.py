"""Random token-sequence pairs over a small vocabulary, length <= 10."""
import json
import random

rng = random.Random(31337)
VOCAB = ["the", "a", "city", "park", "plan", "vote", "new", "river"]
with open("input/pairs.jsonl", "w") as f:
    for _ in range(200):
        a = [rng.choice(VOCAB) for _ in range(rng.randint(0, 10))]
        b = [rng.choice(VOCAB) for _ in range(rng.randint(0, 10))]
        f.write(json.dumps({"a": a, "b": b}) + "\n")
