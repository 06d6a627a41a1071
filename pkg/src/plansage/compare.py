"""Agreement harness between the cosine and distance ranking routes.

There is no labelled ground truth for "the right plan", so instead of an
accuracy score this harness quantifies how often the two scoring routes
agree: it generates seeded random preferences, runs the full pipeline once
per metric, and reports the top-1 agreement rate, the mean Jaccard overlap
of the top-3 sets, and a per-trial diff. Fixed seed in, identical report
out.

Preference generation, so an external script can reproduce the stream from
``random.Random(seed)``: one ``choice`` over ("lagos", "nationwide"), one
``randint(1, 4)`` for the tier, then eight ``random() < 0.5`` draws for the
service features in catalog column order. A draw where every feature came
up "no" is discarded and redrawn, because the cosine route cannot score an
all-zero preference. Ward and eye-care preferences are never drawn.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Any, Iterable, Mapping, Sequence

from .catalog import SERVICE_FEATURES, PlanRecord, RatingRecord, UserLocation, UserPreference
from .errors import NoCandidatesError
from .recommend import PlanRecommender
from .similarity import Metric


@dataclass(frozen=True)
class TrialOutcome:
    """Both metrics' answers for one generated preference."""

    trial: int
    location: str
    max_tier: int
    desired: tuple[str, ...]
    cosine_top: tuple[str, ...]
    knn_top: tuple[str, ...]
    top1_agree: bool
    jaccard: float


@dataclass(frozen=True)
class AgreementReport:
    trials: int
    seed: int
    catalog_size: int
    top1_agreement_rate: float
    mean_top3_jaccard: float
    outcomes: tuple[TrialOutcome, ...]

    @property
    def disagreements(self) -> tuple[TrialOutcome, ...]:
        return tuple(o for o in self.outcomes if not o.top1_agree)

    def to_payload(self) -> dict[str, Any]:
        return {
            "trials": self.trials,
            "seed": self.seed,
            "catalog_size": self.catalog_size,
            "top1_agreement_rate": self.top1_agreement_rate,
            "mean_top3_jaccard": self.mean_top3_jaccard,
            "disagreement_count": len(self.disagreements),
            "outcomes": [
                {
                    "trial": o.trial,
                    "location": o.location,
                    "max_tier": o.max_tier,
                    "desired": list(o.desired),
                    "cosine_top": list(o.cosine_top),
                    "knn_top": list(o.knn_top),
                    "top1_agree": o.top1_agree,
                    "jaccard": o.jaccard,
                }
                for o in self.outcomes
            ],
        }


def generate_preferences(count: int, seed: int) -> list[UserPreference]:
    """Seeded random preferences per the documented drawing procedure."""
    rng = random.Random(seed)
    out: list[UserPreference] = []
    while len(out) < count:
        location = UserLocation(rng.choice(("lagos", "nationwide")))
        max_tier = rng.randint(1, 4)
        flags = {name: rng.random() < 0.5 for name in SERVICE_FEATURES}
        if not any(flags.values()):
            continue  # zero vector: unscorable under cosine, redraw
        out.append(UserPreference(location=location, max_tier=max_tier, desired=flags))
    return out


def jaccard(a: Iterable[str], b: Iterable[str]) -> float:
    """Set overlap of two id collections; two empty sets count as 1.0."""
    set_a, set_b = set(a), set(b)
    if not set_a and not set_b:
        return 1.0
    return len(set_a & set_b) / len(set_a | set_b)


def compare_preference(
    recommender: PlanRecommender, preference: UserPreference, trial: int = 0
) -> TrialOutcome:
    """Run one preference through both metrics and diff the answers."""

    def top_ids(metric: Metric) -> tuple[str, ...]:
        try:
            recs = recommender.recommend(preference, metric=metric)
        except NoCandidatesError:
            return ()
        return tuple(r.plan_id for r in recs)

    cosine_top = top_ids(Metric.COSINE)
    knn_top = top_ids(Metric.EUCLIDEAN_KNN)
    agree = cosine_top[:1] == knn_top[:1]
    return TrialOutcome(
        trial=trial,
        location=preference.location.value,
        max_tier=preference.max_tier,
        desired=tuple(n for n in SERVICE_FEATURES if preference.desired[n]),
        cosine_top=cosine_top,
        knn_top=knn_top,
        top1_agree=agree,
        jaccard=jaccard(cosine_top, knn_top),
    )


def run_comparison(
    plans: Sequence[PlanRecord],
    ratings: Mapping[str, RatingRecord] | None,
    trials: int,
    seed: int,
    preferences: Sequence[UserPreference] | None = None,
) -> AgreementReport:
    """Compare both metrics over seeded trials (or explicit preferences).

    Pure function of (plans, ratings, trials, seed): trials run
    sequentially and the report is reproducible byte for byte.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    recommender = PlanRecommender().fit(plans, ratings)
    prefs = list(preferences) if preferences is not None else generate_preferences(trials, seed)
    outcomes = tuple(
        compare_preference(recommender, pref, trial=i) for i, pref in enumerate(prefs)
    )
    agree_rate = sum(1 for o in outcomes if o.top1_agree) / len(outcomes)
    mean_jaccard = sum(o.jaccard for o in outcomes) / len(outcomes)
    return AgreementReport(
        trials=len(outcomes),
        seed=seed,
        catalog_size=len(plans),
        top1_agreement_rate=agree_rate,
        mean_top3_jaccard=mean_jaccard,
        outcomes=outcomes,
    )
