"""Direct evaluation of the scene alignment score formula.

P = |S & T| / |T|, R = |S & T| / |S|, F = (1 + b^2) P R / (b^2 P + R),
SAS = F / L with L = tgt_len (tokens), |T| (entities) or 1 (none).
Empty sides or zero overlap give F = 0.
"""
from fractions import Fraction
import json

with open("input/pairs.jsonl") as f, open("expected/sas.jsonl", "w") as out:
    for line in f:
        c = json.loads(line)
        S, T = set(c["src"]), set(c["tgt"])
        ov = len(S & T)
        mode = c["norm_mode"]
        L = {"tokens": max(1, c["tgt_len"]), "entities": max(1, len(T)), "none": 1}[mode]
        if not S or not T or ov == 0:
            P = R = F = Fraction(0)
        else:
            P = Fraction(ov, len(T))
            R = Fraction(ov, len(S))
            b2 = Fraction(c["beta"]) ** 2
            F = (1 + b2) * P * R / (b2 * P + R)
        out.write(json.dumps({"overlap": ov, "precision": float(P), "recall": float(R),
                              "f_beta": float(F), "norm_len": L, "sas": float(F / L)}) + "\n")
