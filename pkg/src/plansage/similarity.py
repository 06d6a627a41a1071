"""Cosine and Euclidean-distance scoring with deterministic top-k ranking.

Both metrics are computed in double precision with a single fixed
left-to-right accumulation over the slots, so identical inputs always give
bit-identical scores and the ranking never flips between runs. Because the
encodings are component-wise non-negative, the cosine score lands in [0, 1]:
1 means the preference and the plan point the same way, 0 means they share
no selected feature at all. Distances run from 0 (identical feature sets)
upward, so cosine ranks descending and the distance metric ascending.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Mapping, Sequence

from .encoding import FeatureVector
from .errors import SchemaMismatchError, ZeroVectorError


class Metric(str, Enum):
    """Which scoring route ranks the candidates."""

    COSINE = "cosine"
    EUCLIDEAN_KNN = "knn"


@dataclass(frozen=True)
class ScoredCandidate:
    """One plan with its score under a metric."""

    plan_id: str
    score: float
    metric: Metric


def _check_comparable(a: FeatureVector, b: FeatureVector) -> None:
    if a.schema_id != b.schema_id:
        raise SchemaMismatchError(
            f"vectors from different encoding schemas: {a.schema_id!r} vs {b.schema_id!r}"
        )
    if len(a.values) != len(b.values):
        raise SchemaMismatchError(
            f"vector dimensions differ: {len(a.values)} vs {len(b.values)}"
        )


def cosine_similarity(a: FeatureVector, b: FeatureVector) -> float:
    """Cosine of the angle between two vectors: dot(a,b) / (|a| * |b|).

    Symmetric in its arguments. Raises ZeroVectorError when either vector
    has zero norm; the quotient is genuinely undefined there and the
    fallback policy belongs to the caller.
    """
    _check_comparable(a, b)
    dot = 0.0
    norm_a = 0.0
    norm_b = 0.0
    for x, y in zip(a.values, b.values):
        dot += x * y
        norm_a += x * x
        norm_b += y * y
    if norm_a == 0.0 or norm_b == 0.0:
        raise ZeroVectorError("cosine similarity is undefined for a zero vector")
    value = dot / (math.sqrt(norm_a) * math.sqrt(norm_b))
    # Rounding can push the quotient a few ulps past the true cosine range;
    # clamp so the [0,1] guarantee for non-negative inputs actually holds.
    return min(1.0, max(-1.0, value))


def euclidean_distance(a: FeatureVector, b: FeatureVector) -> float:
    """Straight-line distance sqrt(sum((a_i - b_i)^2)); zero iff a equals b."""
    _check_comparable(a, b)
    total = 0.0
    for x, y in zip(a.values, b.values):
        diff = x - y
        total += diff * diff
    return math.sqrt(total)


def score(query: FeatureVector, candidate: FeatureVector, metric: Metric) -> float:
    if metric is Metric.COSINE:
        return cosine_similarity(query, candidate)
    return euclidean_distance(query, candidate)


def rank_candidates(
    query: FeatureVector,
    candidates: Sequence[tuple[str, FeatureVector]],
    metric: Metric,
    k: int,
    tie_ratings: Mapping[str, float] | None = None,
) -> list[ScoredCandidate]:
    """Score every candidate and return the best min(k, n) in metric order.

    Cosine sorts descending, distance ascending. Ties break on higher
    rating when ``tie_ratings`` (plan_id -> mean rating) is supplied, then
    on lexicographic plan_id, which makes the ordering total and the output
    deterministic.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    scored = [
        ScoredCandidate(plan_id, score(query, vector, metric), metric)
        for plan_id, vector in candidates
    ]

    def sort_key(cand: ScoredCandidate) -> tuple[float, float, str]:
        rating = tie_ratings.get(cand.plan_id, 0.0) if tie_ratings else 0.0
        primary = -cand.score if metric is Metric.COSINE else cand.score
        return (primary, -rating, cand.plan_id)

    scored.sort(key=sort_key)
    return scored[:k]
