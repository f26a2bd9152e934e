"""Twenty evaluation records built from a small vocabulary.

Words contain no punctuation, so whitespace splitting matches the tokenizer.
"""
import json
import random

rng = random.Random(2020)
VOCAB = ["the", "food", "was", "great", "service", "Good", "slow", "hot", "cold",
         "we", "loved", "it", "staff", "Friendly", "bad", "place", "nice", "very"]


def sent(lo, hi):
    return [rng.choice(VOCAB) for _ in range(rng.randint(lo, hi))]


def mutate(tokens, rate):
    return [rng.choice(VOCAB) if rng.random() < rate else t for t in tokens]


with open("input/records.jsonl", "w") as f:
    for i in range(20):
        source = sent(2, 10)
        ref = mutate(source, 0.4)
        refs = [ref] + [mutate(ref, 0.3) for _ in range(rng.randint(0, 2))]
        if i == 0:
            candidate = list(source)
        elif i == 1:
            candidate = ["nice"]
        else:
            candidate = mutate(rng.choice(refs), 0.3)[: rng.randint(1, 12)]
        f.write(json.dumps({"source": " ".join(source),
                            "candidate": " ".join(candidate),
                            "references": [" ".join(r) for r in refs],
                            "style_correct": rng.random() < 0.7}) + "\n")
