"""Spot-check the string metrics and the rescaled score on random inputs.

    python3 scripts/metric_properties.py [--n 5000] [--seed 0]
"""

import argparse
import random
import string

from profsim.scoring import new_similarity_score
from profsim.string_metrics import edit_distance_similarity, jaro_similarity, levenshtein_distance


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=5000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rnd = random.Random(args.seed)

    def word():
        return "".join(rnd.choice(string.ascii_lowercase[:6]) for _ in range(rnd.randint(0, 10)))

    bad = 0
    for _ in range(args.n):
        s, t, u = word(), word(), word()
        for f in (jaro_similarity, edit_distance_similarity):
            v = f(s, t)
            bad += not (0 <= v <= 1 and v == f(t, s) and f(s, s) == 1)
        # triangle inequality holds for the raw edit distance
        bad += levenshtein_distance(s, u) > levenshtein_distance(s, t) + levenshtein_distance(t, u)
    print(f"string metric violations: {bad} in {args.n} triples")

    print("Sim' table (rows sim, columns W):")
    weights = [0, 1, 2, 5, 9, 20]
    print("sim " + "".join(f"{w:>8}" for w in weights))
    for sim in (0.0, 0.25, 0.5, 0.75, 1.0):
        print(f"{sim:<4}" + "".join(f"{new_similarity_score(sim, w):>8.4f}" for w in weights))


if __name__ == "__main__":
    main()
