"""Profile similarity, the rescaled score, the matching threshold and decisions.

Two ways of scoring a candidate are supported:

``vector`` (default)
    cosine between the target's all-ones weight vector and the candidate's
    weight vector (attribute weights plus the two mutual slots), rescaled
    with the candidate's total weight.

``attribute``
    graded per-attribute string similarities, each rescaled with the total
    weight, then averaged.

``Rounding.TABLE`` truncates raw similarities to two decimals before they
are rescaled, which is how the published worked-example tables were
produced. Everything else runs at full precision.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from decimal import ROUND_DOWN, Decimal
from typing import Sequence

from .errors import ProfsimError, SchemaError
from .model import AttributeKind, AttributeSchema, AttributeValue, Profile, SocialGraph
from .string_metrics import METRICS, cosine_similarity, edit_distance_similarity, normalize
from .weighting import WeightConfig, WeightVector, total_weight, weight_vector


class Decision(str, enum.Enum):
    SIMILAR = "Similar"
    NOT_SIMILAR = "NotSimilar"


class Mode(str, enum.Enum):
    VECTOR = "vector"
    ATTRIBUTE = "attribute"


class Rounding(str, enum.Enum):
    FULL = "full"
    TABLE = "table"


@dataclass(frozen=True)
class ScoringConfig:
    metric: str = "jaro"
    mode: Mode = Mode.VECTOR
    rounding: Rounding = Rounding.FULL
    weights: WeightConfig = field(default_factory=WeightConfig)

    def __post_init__(self):
        if self.metric not in METRICS:
            raise ValueError(f"unknown metric {self.metric!r}; choose from {sorted(METRICS)}")
        object.__setattr__(self, "mode", Mode(self.mode))
        object.__setattr__(self, "rounding", Rounding(self.rounding))


@dataclass(frozen=True)
class SimilarityReport:
    candidate_id: str
    raw_similarity: float
    total_weight: float
    new_score: float
    threshold: float
    decision: Decision
    rank: int


def truncate2(x: float) -> float:
    """Drop everything past the second decimal (0.7454 -> 0.74)."""
    return float(Decimal(repr(x)).quantize(Decimal("0.01"), rounding=ROUND_DOWN))


def render_number(x: float) -> str:
    return str(int(x)) if float(x).is_integer() else repr(float(x))


def attribute_similarity(
    kind: AttributeKind,
    a: AttributeValue,
    b: AttributeValue,
    metric: str = "jaro",
) -> float:
    if a is None or b is None:
        return 0.0
    if kind in (AttributeKind.EXACT, AttributeKind.TEXT):
        if not isinstance(a, str) or not isinstance(b, str):
            raise SchemaError(f"{kind.value} attribute expects strings, got {a!r} and {b!r}")
        if kind is AttributeKind.EXACT:
            return 1.0 if normalize(a) == normalize(b) else 0.0
        try:
            fn = METRICS[metric]
        except KeyError:
            raise ValueError(f"unknown metric {metric!r}") from None
        return fn(a, b)
    if kind is AttributeKind.NUMERIC:
        for v in (a, b):
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise SchemaError(f"numeric attribute expects numbers, got {v!r}")
        return edit_distance_similarity(render_number(a), render_number(b))
    if kind is AttributeKind.TAGS:
        if not isinstance(a, frozenset) or not isinstance(b, frozenset):
            raise SchemaError(f"tag-set attribute expects tag sets, got {a!r} and {b!r}")
        sa, sb = {normalize(x) for x in a}, {normalize(x) for x in b}
        union = sa | sb
        return len(sa & sb) / len(union) if union else 0.0
    raise SchemaError(f"unsupported attribute kind {kind!r}")


def raw_profile_similarity(wv: WeightVector) -> float:
    vec = wv.as_vector()
    return cosine_similarity([1.0] * len(vec), vec)


def new_similarity_score(sim: float, weight: float) -> float:
    """``2*sim*W / (1 + sim*W)``; lies in [0, 2) for sim in [0, 1], W >= 0."""
    x = sim * weight
    return 2 * x / (1 + x)


def matching_threshold(scores: Sequence[float]) -> float:
    """Mean of the candidates' rescaled scores.

    Uses an exactly rounded sum so the result does not depend on input
    order, and is clamped into [min, max] against division round-off.
    """
    if len(scores) == 0:
        raise ProfsimError("matching threshold is undefined for zero candidates")
    mean = math.fsum(scores) / len(scores)
    return min(max(mean, min(scores)), max(scores))


def decide(score: float, threshold: float) -> Decision:
    return Decision.SIMILAR if score >= threshold else Decision.NOT_SIMILAR


def decide_all(scores: Sequence[float]) -> tuple[float, list[Decision]]:
    """Threshold a list of rescaled scores at their mean."""
    threshold = matching_threshold(scores)
    return threshold, [decide(s, threshold) for s in scores]


def _score_candidate(
    graph: SocialGraph,
    target: Profile,
    candidate: Profile,
    schema: AttributeSchema,
    cfg: ScoringConfig,
) -> tuple[float, float, float]:
    wv = weight_vector(graph, target, candidate, schema, cfg.weights)
    weight = total_weight(wv)
    if cfg.mode is Mode.VECTOR:
        raw = raw_profile_similarity(wv)
        if cfg.rounding is Rounding.TABLE:
            raw = truncate2(raw)
        return raw, weight, new_similarity_score(raw, weight)

    sims = [
        attribute_similarity(attr.kind, target.get(attr.name), candidate.get(attr.name), cfg.metric)
        for attr in schema
    ]
    if cfg.rounding is Rounding.TABLE:
        sims = [truncate2(s) for s in sims]
    if not sims:
        return 0.0, weight, 0.0
    raw = math.fsum(sims) / len(sims)
    rescaled = math.fsum(new_similarity_score(s, weight) for s in sims) / len(sims)
    return raw, weight, rescaled


def rank_candidates(
    target: Profile,
    candidates: Sequence[Profile],
    graph: SocialGraph,
    schema: AttributeSchema,
    cfg: ScoringConfig = ScoringConfig(),
) -> list[SimilarityReport]:
    """Weight, score, threshold and decide every candidate against ``target``.

    Reports come back ordered by descending score, ties broken by
    ascending candidate id.
    """
    if not candidates:
        raise ProfsimError("no candidate profiles to rank")
    ids = [c.id for c in candidates]
    if len(set(ids)) != len(ids):
        raise ProfsimError("candidate list contains duplicate ids")
    if target.id in ids:
        raise ProfsimError(f"target {target.id!r} cannot also be a candidate")
    schema.validate(target)
    for c in candidates:
        schema.validate(c)

    scored = [(c.id, *_score_candidate(graph, target, c, schema, cfg)) for c in candidates]
    threshold = matching_threshold([s[3] for s in scored])
    scored.sort(key=lambda s: (-s[3], s[0]))
    return [
        SimilarityReport(
            candidate_id=cid,
            raw_similarity=raw,
            total_weight=weight,
            new_score=score,
            threshold=threshold,
            decision=decide(score, threshold),
            rank=i,
        )
        for i, (cid, raw, weight, score) in enumerate(scored, start=1)
    ]


def similar_ids(reports: Sequence[SimilarityReport]) -> list[str]:
    return [r.candidate_id for r in reports if r.decision is Decision.SIMILAR]
