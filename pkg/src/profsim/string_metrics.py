"""String and vector similarity metrics.

All similarities land in [0, 1]. The string similarities compare
normalized text (NFKC, trimmed, casefolded); ``levenshtein_distance`` works
on the raw strings so that a distance of 0 means the inputs are identical.
"""

from __future__ import annotations

import math
import unicodedata
from typing import Sequence


def normalize(s: str) -> str:
    return unicodedata.normalize("NFKC", s).strip().casefold()


def jaro_similarity(s: str, t: str, *, normalized: bool = True) -> float:
    """Jaro similarity of two strings.

    Characters match when equal and no further apart than
    ``max(len(s), len(t)) // 2 - 1`` positions. With ``m`` matches and
    ``tr`` half-transpositions the score is
    ``(m/|s| + m/|t| + (m - tr)/m) / 3``.

    >>> round(jaro_similarity("MARTHA", "MARHTA"), 4)
    0.9444
    """
    if normalized:
        s, t = normalize(s), normalize(t)
    if not s and not t:
        return 1.0
    if not s or not t:
        return 0.0

    window = max(0, max(len(s), len(t)) // 2 - 1)
    s_matched = [False] * len(s)
    t_matched = [False] * len(t)
    m = 0
    for i, ch in enumerate(s):
        lo = max(0, i - window)
        hi = min(len(t), i + window + 1)
        for j in range(lo, hi):
            if not t_matched[j] and t[j] == ch:
                s_matched[i] = t_matched[j] = True
                m += 1
                break
    if m == 0:
        return 0.0

    s_common = [c for c, hit in zip(s, s_matched) if hit]
    t_common = [c for c, hit in zip(t, t_matched) if hit]
    half_transpositions = sum(a != b for a, b in zip(s_common, t_common)) / 2

    return (m / len(s) + m / len(t) + (m - half_transpositions) / m) / 3


def levenshtein_distance(s: str, t: str) -> int:
    """Unit-cost insert/delete/substitute distance (two-row DP)."""
    if s == t:
        return 0
    if len(s) < len(t):
        s, t = t, s
    if not t:
        return len(s)

    prev = list(range(len(t) + 1))
    for i, cs in enumerate(s, start=1):
        cur = [i]
        for j, ct in enumerate(t, start=1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (cs != ct)))
        prev = cur
    return prev[-1]


def edit_distance_similarity(s: str, t: str, *, normalized: bool = True) -> float:
    """``1 - d / max(|s|, |t|)``; two empty strings are fully similar."""
    if normalized:
        s, t = normalize(s), normalize(t)
    longest = max(len(s), len(t))
    if longest == 0:
        return 1.0
    return 1.0 - levenshtein_distance(s, t) / longest


def cosine_similarity(u: Sequence[float], v: Sequence[float]) -> float:
    """Cosine of the angle between two non-negative vectors.

    A zero-norm vector shares nothing with anything, so the result is 0
    rather than NaN. Raises ``ValueError`` on a dimension mismatch.
    """
    if len(u) != len(v):
        raise ValueError(f"weight vectors differ in dimension: {len(u)} != {len(v)}")
    if len(u) == 0:
        raise ValueError("weight vectors must have at least one component")
    # scale by the largest component so tiny or huge inputs neither underflow nor overflow
    su, sv = max(map(abs, u)), max(map(abs, v))
    if su == 0.0 or sv == 0.0:
        return 0.0
    u = [x / su for x in u]
    v = [y / sv for y in v]
    nu = math.fsum(x * x for x in u)
    nv = math.fsum(y * y for y in v)
    dot = math.fsum(x * y for x, y in zip(u, v))
    return min(1.0, max(0.0, dot / math.sqrt(nu * nv)))


METRICS = {
    "jaro": jaro_similarity,
    "edit": edit_distance_similarity,
}
