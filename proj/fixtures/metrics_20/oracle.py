"""Independent corpus BLEU / i-PINC / ACC / GM scorer.

BLEU: corpus-level clipped n-gram counts (n = 1..4, clip = max count over the
references), brevity penalty exp(1 - r/c) when c < r with r the sum of
closest reference lengths (ties to the shorter). BLEU-n = BP * p_n. The
average covers orders where either the candidate or reference total n-gram
count is positive.

i-PINC per record: lowercase everything, drop tokens that appear in the
source, then for each n take max over references of
|ngrams(cand) & ngrams(ref)| / |ngrams(ref)| (sets; references without
n-grams of that order are skipped); average over orders with at least one
usable reference; 0 when the stripped candidate is empty. Corpus i-PINC is
the mean over records.
"""
import json
import math
from collections import Counter

records = [json.loads(l) for l in open("input/records.jsonl") if l.strip()]


def grams(t, n):
    return [tuple(t[i:i + n]) for i in range(len(t) - n + 1)]


match = [0] * 4
cand_tot = [0] * 4
ref_tot = [0] * 4
c_len = r_len = 0
pinc = []
correct = 0
for rec in records:
    src = rec["source"].split()
    cand = rec["candidate"].split()
    refs = [r.split() for r in rec["references"]]
    c = len(cand)
    r = min((abs(len(x) - c), len(x)) for x in refs)[1]
    c_len += c
    r_len += r
    for n in range(1, 5):
        cc = Counter(grams(cand, n))
        mx = Counter()
        for ref in refs:
            for g, k in Counter(grams(ref, n)).items():
                mx[g] = max(mx[g], k)
        match[n - 1] += sum(min(k, mx[g]) for g, k in cc.items())
        cand_tot[n - 1] += max(c - n + 1, 0)
        ref_tot[n - 1] += max(r - n + 1, 0)

    shared = {t.lower() for t in src}
    strip = lambda t: [x.lower() for x in t if x.lower() not in shared]
    sc = strip(cand)
    if not sc:
        pinc.append(0.0)
    else:
        total, valid = 0.0, 0
        for n in range(1, 5):
            cs = set(grams(sc, n))
            best, any_ref = 0.0, False
            for ref in refs:
                rs = set(grams(strip(ref), n))
                if not rs:
                    continue
                any_ref = True
                best = max(best, len(cs & rs) / len(rs))
            if any_ref:
                total += best
                valid += 1
        pinc.append(total / valid if valid else 0.0)
    correct += bool(rec["style_correct"])

bp = math.exp(1 - r_len / c_len) if c_len < r_len else 1.0
bleu_n = [0.0] * 4
defined = []
for n in range(4):
    if cand_tot[n] == 0 and ref_tot[n] == 0:
        continue
    p = match[n] / cand_tot[n] if cand_tot[n] else 0.0
    bleu_n[n] = bp * p
    defined.append(bleu_n[n])
bleu_avg = sum(defined) / len(defined)
acc = correct / len(records)
out = {"count": len(records), "bleu_n": bleu_n, "bleu_avg": bleu_avg,
       "i_pinc": sum(pinc) / len(pinc), "acc": acc,
       "gm": math.sqrt(acc * bleu_avg)}
with open("expected/report.json", "w") as f:
    json.dump(out, f, indent=2)
