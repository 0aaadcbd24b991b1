"""Recompute the five-friend worked example and set it beside the printed values.

    python3 scripts/reproduce_worked_example.py
"""

import csv
from pathlib import Path

from profsim.cli import RunConfig, run_ranking
from profsim.scoring import decide_all, similar_ids

DATA = Path(__file__).resolve().parents[1] / "data" / "worked_example"


def printed_values():
    with open(DATA / "published_scores.csv", newline="") as fh:
        return {r["candidate_id"]: (float(r["cosine"]), float(r["new_score"])) for r in csv.DictReader(fh)}


def run(rounding):
    cfg = RunConfig(graph=DATA / "network.gdf", profiles=DATA / "profiles.csv", target="Akhila", rounding=rounding)
    return run_ranking(cfg).reports


def main():
    printed = printed_values()
    for rounding in ("table", "full"):
        reports = sorted(run(rounding), key=lambda r: r.candidate_id)
        print(f"== rounding={rounding}")
        print(f"{'candidate':<10}{'W':>4}{'cosine':>10}{'printed':>9}{'new':>10}{'printed':>9}  decision")
        for r in reports:
            pc, ps = printed[r.candidate_id]
            print(f"{r.candidate_id:<10}{r.total_weight:>4.0f}{r.raw_similarity:>10.5f}{pc:>9.2f}"
                  f"{r.new_score:>10.5f}{ps:>9.2f}  {r.decision.value}")
        print(f"threshold {reports[0].threshold:.5f}; Similar: {', '.join(similar_ids(sorted(reports, key=lambda r: r.rank)))}")
        print()

    threshold, decisions = decide_all([ps for _, ps in printed.values()])
    chosen = [cid for cid, d in zip(printed, decisions) if d.value == "Similar"]
    print(f"== printed new-score column: threshold {threshold:.4f}; Similar: {', '.join(chosen)}")


if __name__ == "__main__":
    main()
