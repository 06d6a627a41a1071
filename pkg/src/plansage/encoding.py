"""Encoding of plans and user preferences into comparable feature vectors.

The vector has a fixed 10-slot layout: the eight boolean service features
(0.0 or 1.0, in catalog column order) followed by the ward-type slot and the
eye-care slot. Ordinal fields are normalised into [0, 1] so no single slot
can dominate the distance metrics:

    ward_type          general -> 1/3, semi_private -> 2/3, private -> 1
    eye_care_limit     level/3 for levels 0..3

Premium tier and coverage region are deliberately not encoded: they are
hard filters applied before scoring, and folding them into the vector would
double-count them in the similarity.

Every vector carries the schema id it was encoded under; vectors from
different schemas are never compared (the scoring layer raises instead).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .catalog import SERVICE_FEATURES, PlanRecord, UserPreference, WardType

ENCODER_VERSION = "fv10.v1"
VECTOR_DIM = 10

SLOT_NAMES: tuple[str, ...] = (*SERVICE_FEATURES, "ward_type", "eye_care_limit")

_WARD_SLOT_VALUES = {
    WardType.GENERAL: 1.0 / 3.0,
    WardType.SEMI_PRIVATE: 2.0 / 3.0,
    WardType.PRIVATE: 1.0,
}


@dataclass(frozen=True)
class EncodingSchema:
    """Names one version of the slot layout.

    A snapshot-scoped schema id (version plus catalog digest) stops vectors
    encoded under an old snapshot from being compared with fresh queries.
    """

    schema_id: str = ENCODER_VERSION

    @property
    def dimension(self) -> int:
        return VECTOR_DIM


DEFAULT_SCHEMA = EncodingSchema()


@dataclass(frozen=True)
class FeatureVector:
    """A dense feature vector bound to its encoding schema."""

    values: tuple[float, ...]
    schema_id: str

    @property
    def dimension(self) -> int:
        return len(self.values)

    def is_zero(self) -> bool:
        return all(v == 0.0 for v in self.values)

    def scaled(self, factor: float) -> "FeatureVector":
        """Same direction, different magnitude; keeps the schema binding."""
        return FeatureVector(tuple(factor * v for v in self.values), self.schema_id)


def encode_plan(plan: PlanRecord, schema: EncodingSchema = DEFAULT_SCHEMA) -> FeatureVector:
    """Encode a plan's service features; total on any valid PlanRecord."""
    values = [1.0 if getattr(plan, name) else 0.0 for name in SERVICE_FEATURES]
    values.append(_WARD_SLOT_VALUES[plan.ward_type])
    values.append(plan.eye_care_limit_level / 3.0)
    return FeatureVector(tuple(values), schema.schema_id)


def encode_preference(
    pref: UserPreference, schema: EncodingSchema = DEFAULT_SCHEMA
) -> FeatureVector:
    """Encode a preference with the same slot layout as plans.

    Absent ward and eye-care preferences encode as 0.0; location and
    max_tier are filter inputs and never appear in the vector.
    """
    values = [1.0 if pref.desired[name] else 0.0 for name in SERVICE_FEATURES]
    if pref.ward_preference is None:
        values.append(0.0)
    else:
        values.append(_WARD_SLOT_VALUES[pref.ward_preference])
    if pref.eye_care_preference is None:
        values.append(0.0)
    else:
        values.append(pref.eye_care_preference / 3.0)
    return FeatureVector(tuple(values), schema.schema_id)


class PlanEncoder(TransformerMixin, BaseEstimator):
    """Transformer that turns PlanRecords into a dense (n, 10) float matrix.

    Exists so the encoding composes with scikit-learn pipelines; the
    recommendation pipeline itself works on :class:`FeatureVector` values
    via :func:`encode_plan` / :func:`encode_preference`.

    Parameters
    ----------
    schema : EncodingSchema, optional
        Layout version to bind the encoding to. Defaults to the library's
        current schema.
    """

    def __init__(self, schema: EncodingSchema | None = None):
        self.schema = schema

    def fit(self, X: Iterable[PlanRecord], y=None) -> "PlanEncoder":
        self.schema_ = self.schema or DEFAULT_SCHEMA
        self.n_features_out_ = self.schema_.dimension
        return self

    def transform(self, X: Iterable[PlanRecord]) -> np.ndarray:
        if not hasattr(self, "schema_"):
            from sklearn.exceptions import NotFittedError

            raise NotFittedError("PlanEncoder must be fitted before transform")
        rows = [encode_plan(plan, self.schema_).values for plan in X]
        return np.asarray(rows, dtype=np.float64).reshape(len(rows), VECTOR_DIM)

    def get_feature_names_out(self, input_features=None) -> np.ndarray:
        return np.asarray(SLOT_NAMES, dtype=object)


def as_matrix(vectors: Sequence[FeatureVector]) -> np.ndarray:
    """Stack feature vectors into an (n, d) array for numeric tooling."""
    return np.asarray([v.values for v in vectors], dtype=np.float64)
