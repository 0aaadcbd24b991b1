"""Binary attribute weights and mutual friend / community weights."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .model import (
    AttributeKind,
    AttributeSchema,
    AttributeValue,
    Profile,
    SocialGraph,
    mutual_communities,
    mutual_friends,
)
from .errors import WeightingError
from .string_metrics import normalize


class MutualMode(str, enum.Enum):
    BINARY = "binary"
    FRACTIONAL = "fractional"


@dataclass(frozen=True)
class WeightConfig:
    """``waf`` is the weight adjustment factor bounding the fractional mutual
    weights at ``100 / waf``."""

    waf: float = 100.0
    mutual_mode: MutualMode = MutualMode.BINARY

    def __post_init__(self):
        if not (self.waf > 0 and math.isfinite(self.waf)):
            raise ValueError(f"waf must be a positive finite number, got {self.waf!r}")
        object.__setattr__(self, "mutual_mode", MutualMode(self.mutual_mode))


@dataclass(frozen=True)
class WeightVector:
    target_id: str
    candidate_id: str
    attribute_weights: tuple[float, ...]
    mf_weight: float = 0.0
    mc_weight: float = 0.0

    def as_vector(self) -> tuple[float, ...]:
        """Attribute weights followed by the mutual-friend and mutual-community slots."""
        return (*self.attribute_weights, self.mf_weight, self.mc_weight)

    @property
    def total(self) -> float:
        return total_weight(self)


def values_match(kind: AttributeKind, a: AttributeValue, b: AttributeValue) -> bool:
    """Strict match used for weighting; graded similarity is a scoring concern."""
    if a is None or b is None:
        return False
    if kind is AttributeKind.NUMERIC:
        return float(a) == float(b)
    if kind is AttributeKind.TAGS:
        return bool({normalize(x) for x in a} & {normalize(x) for x in b})
    return normalize(a) == normalize(b)


def assign_binary_weights(target: Profile, candidate: Profile, schema: AttributeSchema) -> tuple[float, ...]:
    return tuple(
        1.0 if values_match(attr.kind, target.get(attr.name), candidate.get(attr.name)) else 0.0
        for attr in schema
    )


def total_weight(wv: WeightVector) -> float:
    return math.fsum(wv.attribute_weights) + wv.mf_weight + wv.mc_weight


def _mutual_weight(shared: int, total: int, cfg: WeightConfig, what: str) -> float:
    if cfg.mutual_mode is MutualMode.BINARY:
        return 1.0 if shared >= 1 else 0.0
    if total == 0:
        raise WeightingError(f"fractional {what} weight is undefined: target has no {what}s")
    return (shared / total * 100) / cfg.waf


def mutual_friend_weight(graph: SocialGraph, target: Profile, candidate: Profile, cfg: WeightConfig) -> float:
    shared = mutual_friends(graph, target.id, candidate.id)
    return _mutual_weight(len(shared), len(graph.friends(target.id)), cfg, "friend")


def mutual_community_weight(target: Profile, candidate: Profile, cfg: WeightConfig) -> float:
    shared = mutual_communities(target, candidate)
    return _mutual_weight(len(shared), len(target.communities), cfg, "community")


def weight_vector(
    graph: SocialGraph,
    target: Profile,
    candidate: Profile,
    schema: AttributeSchema,
    cfg: WeightConfig = WeightConfig(),
) -> WeightVector:
    return WeightVector(
        target_id=target.id,
        candidate_id=candidate.id,
        attribute_weights=assign_binary_weights(target, candidate, schema),
        mf_weight=mutual_friend_weight(graph, target, candidate, cfg),
        mc_weight=mutual_community_weight(target, candidate, cfg),
    )
