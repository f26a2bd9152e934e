"""Geometric mean of accuracy and BLEU, computed with exact decimals."""
import json
from decimal import Decimal, getcontext

getcontext().prec = 40
with open("expected/gm.jsonl", "w") as f:
    for line in open("input/rows.jsonl"):
        r = json.loads(line)
        g = (Decimal(str(r["acc"])) * Decimal(str(r["bleu"]))).sqrt()
        f.write(json.dumps({"gm": float(g), "target_gm": r["target_gm"]}) + "\n")
