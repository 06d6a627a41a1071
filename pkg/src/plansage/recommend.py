"""The full recommendation pipeline: filter, score, pool, rerank, top 3.

Stages, in order:

1. Pre-filter: drop every plan the user cannot buy (premium tier above
   their budget) or cannot reach (a Lagos-only plan for a nationwide
   user). No similarity score can resurrect a filtered plan.
2. Score: rank the survivors against the encoded preference with the
   chosen metric and keep a pool of ``pool_size`` (default 5) candidates.
3. Rerank: pick the 3 pool members with the highest HMO rating; unrated
   HMOs count as 0.0 and sort last. Ties keep the similarity order.

The result is at most three :class:`Recommendation` rows, ranked 1..n.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .catalog import (
    SERVICE_FEATURES,
    CoverageRegion,
    PlanRecord,
    RatingRecord,
    UserLocation,
    UserPreference,
)
from .encoding import DEFAULT_SCHEMA, EncodingSchema, FeatureVector, encode_plan, encode_preference
from .errors import (
    EmptyCatalogError,
    EmptyPreferenceError,
    NoCandidatesError,
    RowViolation,
    SchemaViolationError,
)
from .similarity import Metric, ScoredCandidate, rank_candidates

DEFAULT_POOL_SIZE = 5
MIN_POOL_SIZE = 3
TOP_N = 3


@dataclass(frozen=True)
class Recommendation:
    """One ranked result with the fields a client needs to display it."""

    rank: int
    plan_id: str
    hmo_id: str
    hmo_name: str
    plan_name: str
    premium_tier: int
    similarity_score: float
    mean_rating: float
    matched_features: tuple[str, ...]


@dataclass(frozen=True)
class RecommendationRequest:
    """A preference plus scoring knobs. ``pool_size`` is clamped to >= 3
    so the rating rerank always has a real choice set."""

    preference: UserPreference
    metric: Metric = Metric.COSINE
    pool_size: int = DEFAULT_POOL_SIZE

    def __post_init__(self) -> None:
        if self.pool_size < 1:
            raise ValueError(f"pool_size must be >= 1, got {self.pool_size}")
        if self.pool_size < MIN_POOL_SIZE:
            object.__setattr__(self, "pool_size", MIN_POOL_SIZE)


def prefilter(plans: Iterable[PlanRecord], pref: UserPreference) -> list[PlanRecord]:
    """Keep the plans the user can afford and that cover their location.

    A Lagos user accepts Lagos-only and nationwide plans; a nationwide user
    accepts nationwide plans only. Tier keeps plans at or below max_tier.
    May return an empty list.
    """
    keep = []
    for plan in plans:
        if plan.premium_tier > pref.max_tier:
            continue
        if (
            pref.location is UserLocation.NATIONWIDE
            and plan.coverage_region is not CoverageRegion.NATIONWIDE
        ):
            continue
        keep.append(plan)
    return keep


def rerank_by_rating(
    pool: Sequence[ScoredCandidate],
    ratings: Mapping[str, RatingRecord],
    plans: Mapping[str, PlanRecord],
) -> list[ScoredCandidate]:
    """Select the top 3 of a similarity pool by HMO rating.

    Missing ratings count as 0.0. Ties break on better similarity position
    (the pool is already in metric order), then on plan_id. A pool of 3 or
    fewer comes back whole, in rating order.
    """

    def rating_of(cand: ScoredCandidate) -> float:
        plan = plans[cand.plan_id]
        record = ratings.get(plan.hmo_id)
        return record.mean_rating if record is not None else 0.0

    order = sorted(
        range(len(pool)),
        key=lambda i: (-rating_of(pool[i]), i, pool[i].plan_id),
    )
    return [pool[i] for i in order[:TOP_N]]


def matched_features(plan: PlanRecord, pref: UserPreference) -> tuple[str, ...]:
    """Service features the user asked for that the plan actually covers."""
    return tuple(
        name for name in SERVICE_FEATURES if pref.desired[name] and getattr(plan, name)
    )


class PlanRecommender(BaseEstimator):
    """Content-based plan recommender with a scikit-learn style interface.

    ``fit`` ingests the plan catalog (and optional HMO ratings) and encodes
    every plan once; ``recommend`` answers a single preference with up to
    three ranked plans. The fitted state is immutable, so one instance can
    serve any number of concurrent callers.

    Parameters
    ----------
    metric : Metric or str, default Metric.COSINE
        Scoring route: ``"cosine"`` or ``"knn"`` (Euclidean distance).
    pool_size : int, default 5
        Similarity pool handed to the rating rerank; clamped to >= 3.
    schema : EncodingSchema, optional
        Encoding schema binding for all vectors produced by this instance.

    Examples
    --------
    >>> rec = PlanRecommender(metric="cosine").fit(plans, ratings)
    >>> rec.recommend(UserPreference.from_flags("lagos", 2, dental_care=True))
    [Recommendation(rank=1, ...), ...]
    """

    def __init__(
        self,
        metric: Metric | str = Metric.COSINE,
        pool_size: int = DEFAULT_POOL_SIZE,
        schema: EncodingSchema | None = None,
    ):
        self.metric = metric
        self.pool_size = pool_size
        self.schema = schema

    def fit(
        self,
        plans: Iterable[PlanRecord],
        ratings: Mapping[str, RatingRecord] | None = None,
    ) -> "PlanRecommender":
        """Validate and encode the catalog; returns self."""
        plans = tuple(plans)
        if not plans:
            raise EmptyCatalogError("<in-memory catalog>")
        index: dict[str, PlanRecord] = {}
        for plan in plans:
            if plan.plan_id in index:
                raise SchemaViolationError(
                    "<in-memory catalog>",
                    [RowViolation(0, "plan_id", f"duplicate plan_id {plan.plan_id!r}")],
                )
            index[plan.plan_id] = plan
        schema = self.schema or DEFAULT_SCHEMA
        self.schema_ = schema
        self.plans_ = plans
        self.plan_index_ = index
        self.ratings_ = dict(ratings) if ratings else {}
        self.vectors_ = {p.plan_id: encode_plan(p, schema) for p in plans}
        return self

    def _require_fitted(self) -> None:
        if not hasattr(self, "plans_"):
            raise NotFittedError("PlanRecommender must be fitted before recommending")

    def encode_query(self, preference: UserPreference) -> FeatureVector:
        self._require_fitted()
        return encode_preference(preference, self.schema_)

    def recommend(
        self,
        preference: UserPreference,
        metric: Metric | str | None = None,
        pool_size: int | None = None,
    ) -> list[Recommendation]:
        """Run the filter/score/rerank pipeline for one preference.

        Raises NoCandidatesError when the pre-filter leaves nothing, and
        EmptyPreferenceError when the preference encodes to the zero vector
        under the cosine metric (the all-"no" form is legal under the
        distance metric: it simply ranks plans by fewest benefits).
        """
        self._require_fitted()
        chosen_metric = Metric(metric if metric is not None else self.metric)
        chosen_pool = pool_size if pool_size is not None else self.pool_size
        if chosen_pool < 1:
            raise ValueError(f"pool_size must be >= 1, got {chosen_pool}")
        chosen_pool = max(MIN_POOL_SIZE, chosen_pool)

        query = encode_preference(preference, self.schema_)
        if chosen_metric is Metric.COSINE and query.is_zero():
            raise EmptyPreferenceError(
                "the preference selects nothing, so the cosine metric has no "
                "direction to compare; pick at least one feature, ward type "
                "or eye care level, or use the knn metric"
            )

        eligible = prefilter(self.plans_, preference)
        if not eligible:
            raise NoCandidatesError(
                "no plan matches the requested location and price tier"
            )

        tie_ratings = {
            plan.plan_id: self._mean_rating(plan.hmo_id) for plan in eligible
        }
        pool = rank_candidates(
            query,
            [(plan.plan_id, self.vectors_[plan.plan_id]) for plan in eligible],
            chosen_metric,
            chosen_pool,
            tie_ratings,
        )
        top = rerank_by_rating(pool, self.ratings_, self.plan_index_)

        results = []
        for position, cand in enumerate(top, start=1):
            plan = self.plan_index_[cand.plan_id]
            results.append(
                Recommendation(
                    rank=position,
                    plan_id=plan.plan_id,
                    hmo_id=plan.hmo_id,
                    hmo_name=plan.hmo_name,
                    plan_name=plan.plan_name,
                    premium_tier=plan.premium_tier,
                    similarity_score=cand.score,
                    mean_rating=self._mean_rating(plan.hmo_id),
                    matched_features=matched_features(plan, preference),
                )
            )
        return results

    def predict(self, preferences: Iterable[UserPreference]) -> list[str | None]:
        """Top plan_id per preference (None when nothing is eligible)."""
        out: list[str | None] = []
        for pref in preferences:
            try:
                recs = self.recommend(pref)
            except NoCandidatesError:
                out.append(None)
                continue
            out.append(recs[0].plan_id if recs else None)
        return out

    def _mean_rating(self, hmo_id: str) -> float:
        record = self.ratings_.get(hmo_id)
        return record.mean_rating if record is not None else 0.0


def recommend(
    request: RecommendationRequest,
    catalog: Iterable[PlanRecord],
    ratings: Mapping[str, RatingRecord] | None = None,
) -> list[Recommendation]:
    """One-shot pipeline over an in-memory catalog.

    Convenience wrapper over :class:`PlanRecommender` for callers that do
    not keep a fitted instance around.
    """
    model = PlanRecommender(metric=request.metric, pool_size=request.pool_size)
    model.fit(catalog, ratings)
    return model.recommend(request.preference)
