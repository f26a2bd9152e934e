"""Random entity-sequence pairs over a 10-symbol alphabet, length <= 6."""
import json
import random

rng = random.Random(909)
ALPHA = list("abcdefghij")
with open("input/pairs.jsonl", "w") as f:
    for _ in range(300):
        a = rng.sample(ALPHA, rng.randint(0, 6))
        b = rng.sample(ALPHA, rng.randint(0, 6))
        f.write(json.dumps({"a": a, "b": b}) + "\n")
