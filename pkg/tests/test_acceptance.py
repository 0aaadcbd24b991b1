"""End-to-end acceptance criteria, one test per criterion.

Run ``pytest tests/test_acceptance.py -v`` (or execute this file); the
terminal summary prints a PASS/FAIL line per criterion.

Reference values for the worked example live in
``data/worked_example/published_scores.csv``; see NOTES.md next to it for
the printed cells that the weights do not reproduce.
"""

import csv
import itertools
import math
import random
import string
import sys
import time
from fractions import Fraction
from pathlib import Path

import pytest

from profsim.cli import RunConfig, run_ranking
from profsim.errors import ParseError
from profsim.gdf import GdfDocument, graph_to_document, parse_gdf, parse_gdf_document, serialize_gdf
from profsim.ingest import export_report, load_profiles, read_report
from profsim.model import Profile, SocialGraph
from profsim.scoring import (
    Decision,
    SimilarityReport,
    decide_all,
    matching_threshold,
    new_similarity_score,
    similar_ids,
)
from profsim.string_metrics import (
    cosine_similarity,
    edit_distance_similarity,
    jaro_similarity,
    levenshtein_distance,
)
from profsim.weighting import MutualMode, WeightConfig, mutual_community_weight, mutual_friend_weight

from oracles import levenshtein_oracle

pytestmark = pytest.mark.acceptance

FIXTURES = Path(__file__).parent / "fixtures"


class Clauses:
    """Collects every failing clause so one criterion reports all of them."""

    def __init__(self):
        self.failures = []

    def check(self, ok, message):
        if not ok:
            self.failures.append(message)

    def close(self, value, expected, tol, label):
        self.check(abs(value - expected) <= tol, f"{label}: {value!r} not within {tol} of {expected}")

    def done(self):
        assert not self.failures, "; ".join(self.failures)


def published(worked_paths):
    with open(worked_paths["published"], newline="") as fh:
        return {r["candidate_id"]: (float(r["cosine"]), float(r["new_score"])) for r in csv.DictReader(fh)}


def worked_run(worked_paths, rounding):
    cfg = RunConfig(graph=worked_paths["graph"], profiles=worked_paths["profiles"],
                    target="Akhila", rounding=rounding)
    return {r.candidate_id: r for r in run_ranking(cfg).reports}


def test_criterion_1_worked_example_table_mode(worked_paths):
    c = Clauses()
    start = time.perf_counter()
    reports = worked_run(worked_paths, "table")
    elapsed = time.perf_counter() - start
    printed = published(worked_paths)

    for cid in ["Divya", "Narendra", "Prajwala", "Sneha"]:
        c.close(reports[cid].raw_similarity, printed[cid][0], 0.01, f"cosine {cid}")
    for cid in ["Divya", "Kiran", "Narendra", "Prajwala"]:
        c.close(reports[cid].new_score, printed[cid][1], 0.01, f"new score {cid}")

    printed_scores = [printed[cid][1] for cid in ["Divya", "Kiran", "Narendra", "Prajwala", "Sneha"]]
    threshold, decisions = decide_all(printed_scores)
    c.close(threshold, 1.558, 0.001, "threshold of printed scores")
    decided = {cid for cid, d in zip(printed, decisions) if d is Decision.SIMILAR}
    c.check(decided == {"Divya", "Kiran"}, f"printed-score decisions gave {sorted(decided)}")

    # The pipeline's own threshold is 1.5710 and Sneha scores 1.5745, so
    # the computed set also holds Sneha; see NOTES.md.
    computed = set(similar_ids(sorted(reports.values(), key=lambda r: r.rank)))
    c.check(computed == {"Divya", "Kiran"}, f"rank --rounding table Similar set is {sorted(computed)}")
    c.check(elapsed < 1.0, f"runtime {elapsed:.3f}s")
    c.done()


def test_criterion_2_documented_deviations_full_precision(worked_paths):
    c = Clauses()
    reports = worked_run(worked_paths, "full")
    # Printed cosine for Kiran is 0.83; six ones of nine give sqrt(6)/3.
    c.close(reports["Kiran"].raw_similarity, 0.8165, 0.001, "cosine Kiran")
    # Printed new score for Sneha is 1.50.
    c.close(reports["Sneha"].new_score, 1.5745, 0.001, "new score Sneha")
    got = set(similar_ids(sorted(reports.values(), key=lambda r: r.rank)))
    c.check(got == {"Divya", "Kiran", "Sneha"}, f"full-precision Similar set is {sorted(got)}")
    c.done()


def _random_string(rnd):
    alphabet = rnd.choice([string.ascii_lowercase, "abc", string.ascii_letters + " ", "äöüßéñ"])
    return "".join(rnd.choice(alphabet) for _ in range(rnd.randint(0, 12)))


def test_criterion_3_metric_properties():
    c = Clauses()
    rnd = random.Random(20241015)
    for name, metric in [("jaro", jaro_similarity), ("edit", edit_distance_similarity)]:
        for _ in range(1000):
            s, t = _random_string(rnd), _random_string(rnd)
            v = metric(s, t)
            c.check(0.0 <= v <= 1.0, f"{name}({s!r},{t!r}) = {v} out of range")
            c.check(v == metric(t, s), f"{name} asymmetric on {s!r},{t!r}")
            c.check(metric(s, s) == 1.0, f"{name}({s!r},{s!r}) != 1")

    strings = ["".join(p) for n in range(7) for p in itertools.product("abc", repeat=n)]
    mismatches = 0
    for s in strings:
        for t in strings:
            if levenshtein_distance(s, t) != levenshtein_oracle(s, t):
                mismatches += 1
    c.check(mismatches == 0, f"{mismatches} DP/recursion mismatches")

    for _ in range(1000):
        n = rnd.randint(1, 12)
        u = [rnd.uniform(0, 10) if rnd.random() > 0.2 else 0.0 for _ in range(n)]
        v = [rnd.uniform(0, 10) if rnd.random() > 0.2 else 0.0 for _ in range(n)]
        base = cosine_similarity(u, v)
        c.check(0.0 <= base <= 1.0 and base == cosine_similarity(v, u), f"cosine range/symmetry on {u},{v}")
        if any(u):
            c.check(abs(cosine_similarity(u, u) - 1.0) <= 1e-12, f"cosine identity on {u}")
        for alpha in (0.5, 2, 10):
            scaled = cosine_similarity([alpha * x for x in u], v)
            c.check(abs(scaled - base) <= 1e-12, f"scale {alpha}: {scaled} vs {base}")
    c.done()


def test_criterion_4_rescaled_score_properties():
    c = Clauses()
    rnd = random.Random(4)
    for _ in range(10_000):
        sim, w = rnd.random(), rnd.uniform(0, 100)
        v = new_similarity_score(sim, w)
        c.check(0.0 <= v < 2.0, f"Sim'({sim},{w}) = {v}")
    for w in [0.5 * k for k in range(0, 41)]:
        c.check(new_similarity_score(0.0, w) == 0.0, f"Sim'(0,{w}) != 0")

    sims = [k / 20 for k in range(0, 21)]
    weights = [k / 2 for k in range(0, 41)]
    for w in weights[1:]:
        row = [new_similarity_score(s, w) for s in sims]
        c.check(all(a < b for a, b in zip(row, row[1:])), f"not increasing in sim at W={w}")
    for s in sims[1:]:
        col = [new_similarity_score(s, w) for w in weights]
        c.check(all(a < b for a, b in zip(col, col[1:])), f"not increasing in W at sim={s}")
    c.done()


def test_criterion_5_decision_rule():
    c = Clauses()
    rnd = random.Random(5)
    for i in range(1000):
        n = rnd.randint(1, 25)
        if i % 3 == 0:
            scores = [rnd.choice([1.45, 1.5, 1.57, 1.66, 1.73]) for _ in range(n)]
        else:
            scores = [rnd.uniform(0, 2) for _ in range(n)]
        threshold, decisions = decide_all(scores)
        exact_mean = float(sum(Fraction(s) for s in scores) / n)
        c.check(abs(threshold - exact_mean) <= 4 * math.ulp(exact_mean), f"threshold {threshold} vs mean {exact_mean}")
        c.check(all((d is Decision.SIMILAR) == (s >= threshold) for s, d in zip(scores, decisions)),
                f"decision rule broken on {scores}")
        c.check(decisions[scores.index(max(scores))] is Decision.SIMILAR, f"maximum not Similar in {scores}")

        order = list(range(n))
        rnd.shuffle(order)
        _, shuffled = decide_all([scores[k] for k in order])
        c.check(all(shuffled[j] is decisions[k] for j, k in enumerate(order)), f"order changed decisions on {scores}")
    c.done()


def _random_document(rnd):
    ids = rnd.sample([f"n{i}" for i in range(30)] + ["O'Neil", "a,b", "x y"], rnd.randint(1, 10))
    rows = tuple(
        (nid, rnd.choice(["", "Ann", "Smith, J.", "quote'here", " padded "]),
         rnd.choice([None, rnd.randint(-1000, 1000)]),
         rnd.choice([None, rnd.uniform(-1e6, 1e6), 0.1, 1e-300]),
         rnd.choice([None, True, False]))
        for nid in ids
    )
    pairs = [(a, b) for a in ids for b in ids if a != b]
    edges = tuple(rnd.sample(pairs, min(len(pairs), rnd.randint(0, 12))))
    return GdfDocument(
        (("name", "VARCHAR"), ("label", "VARCHAR"), ("age", "INTEGER"), ("score", "DOUBLE"), ("ok", "BOOLEAN")),
        rows, (("node1", "VARCHAR"), ("node2", "VARCHAR")), edges,
    )


def test_criterion_6_ingestion_round_trip_and_faults(worked_paths):
    c = Clauses()
    rnd = random.Random(6)
    for _ in range(300):
        doc = _random_document(rnd)
        c.check(parse_gdf_document(serialize_gdf(doc)) == doc, f"GDF round trip changed {doc}")

    profiles, schema = load_profiles(worked_paths["profiles"].read_text())
    graph = parse_gdf(worked_paths["graph"].read_text(), schema)
    graph = graph.with_profiles(profiles)
    back = parse_gdf(serialize_gdf(graph_to_document(graph, schema)), schema)
    c.check(back.edges == graph.edges, "worked example edges changed in round trip")
    c.check(all(dict(back.profile(p.id).attributes) == dict(p.attributes) for p in graph),
            "worked example attributes changed in round trip")

    for rounding in ("table", "full"):
        reports = sorted(worked_run(worked_paths, rounding).values(), key=lambda r: r.rank)
        c.check(read_report(export_report(reports)) == reports, f"report round trip ({rounding})")
    for _ in range(200):
        reports = [
            SimilarityReport(f"c{k}", rnd.random(), rnd.uniform(0, 11), rnd.uniform(0, 2), rnd.uniform(0, 2),
                             rnd.choice(list(Decision)), k + 1)
            for k in range(rnd.randint(1, 6))
        ]
        c.check(read_report(export_report(reports)) == reports, "random report round trip")

    faults = [
        ("missing_nodedef.gdf", parse_gdf, 1, "missing nodedef>"),
        ("missing_edgedef.gdf", parse_gdf, 4, "missing edgedef>"),
        ("dangling_edge.gdf", parse_gdf, 6, "'Zed'"),
        ("duplicate_node.gdf", parse_gdf, 4, "duplicate node id"),
        ("ragged_row.gdf", parse_gdf, 3, "ragged row"),
        ("duplicate_id.csv", load_profiles, 4, "duplicate profile id"),
        ("ragged_row.csv", load_profiles, 3, "ragged row"),
    ]
    for name, loader, line, needle in faults:
        try:
            loader((FIXTURES / name).read_text())
        except ParseError as exc:
            c.check(exc.line == line and needle in str(exc), f"{name}: got {exc}")
        else:
            c.check(False, f"{name} was accepted")
    c.done()


def _mutual_fixture(n_friends, shared_friends, n_comms, shared_comms):
    friends = [f"f{i}" for i in range(n_friends)]
    comms = [f"g{i}" for i in range(n_comms)]
    nodes = [Profile(f) for f in friends]
    target = Profile("t", friends=frozenset(friends), communities=frozenset(comms))
    cand = Profile("c", friends=frozenset(friends[:shared_friends]),
                   communities=frozenset(comms[:shared_comms]) | {"other"})
    return SocialGraph([*nodes, target, cand])


MUTUAL_CASES = [
    # (target friends, shared, target communities, shared, waf)
    (1, 0, 1, 0, 100), (1, 1, 1, 1, 100), (2, 1, 4, 2, 100), (3, 1, 3, 2, 50),
    (3, 2, 5, 1, 100), (4, 4, 4, 4, 25), (5, 2, 2, 1, 10), (7, 3, 6, 5, 100),
    (8, 5, 9, 3, 33), (10, 0, 10, 10, 100), (11, 7, 3, 0, 1), (12, 12, 7, 6, 200),
    (13, 6, 8, 2, 100), (17, 9, 11, 4, 75), (20, 3, 12, 12, 100), (25, 24, 1, 1, 0.5),
    (31, 10, 13, 7, 100), (50, 25, 4, 2, 100), (64, 1, 16, 15, 3), (100, 50, 20, 9, 100),
]


def test_criterion_7_mutual_weight_formulas():
    c = Clauses()
    assert len(MUTUAL_CASES) == 20
    for nf, sf, nc, sc, waf in MUTUAL_CASES:
        g = _mutual_fixture(nf, sf, nc, sc)
        t, cand = g.profile("t"), g.profile("c")
        cfg = WeightConfig(waf=waf, mutual_mode=MutualMode.FRACTIONAL)
        waf_q = Fraction(waf).limit_denominator()
        mf_expected = float(Fraction(sf, nf) * 100 / waf_q)
        mc_expected = float(Fraction(sc, nc) * 100 / waf_q)
        mf = mutual_friend_weight(g, t, cand, cfg)
        mc = mutual_community_weight(t, cand, cfg)
        c.close(mf, mf_expected, 1e-12, f"Mf case {nf, sf, waf}")
        c.close(mc, mc_expected, 1e-12, f"Mc case {nc, sc, waf}")

        doubled = WeightConfig(waf=2 * waf, mutual_mode=MutualMode.FRACTIONAL)
        c.close(mutual_friend_weight(g, t, cand, doubled), mf / 2, 1e-12, f"Mf doubling {nf, sf, waf}")
        c.close(mutual_community_weight(t, cand, doubled), mc / 2, 1e-12, f"Mc doubling {nc, sc, waf}")
    c.done()


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v", "-rA"]))
