"""Random 0/1 knapsack instances, n <= 15, values and weights <= 50."""
import json
import random

rng = random.Random(20240117)
with open("input/instances.jsonl", "w") as f:
    for _ in range(120):
        n = rng.randint(0, 15)
        values = [rng.randint(0, 50) for _ in range(n)]
        weights = [rng.randint(1, 50) for _ in range(n)]
        budget = rng.randint(0, max(1, sum(weights)))
        f.write(json.dumps({"values": values, "weights": weights, "budget": budget}) + "\n")
    # hand cases
    f.write(json.dumps({"values": [3, 4, 5], "weights": [2, 3, 4], "budget": 5}) + "\n")
    f.write(json.dumps({"values": [3, 4, 5], "weights": [2, 3, 4], "budget": 0}) + "\n")
    f.write(json.dumps({"values": [9], "weights": [7], "budget": 6}) + "\n")
    f.write(json.dumps({"values": [2, 2, 2], "weights": [1, 1, 1], "budget": 2}) + "\n")
    f.write(json.dumps({"values": [5, 5, 0], "weights": [4, 3, 1], "budget": 4}) + "\n")
