"""Canonical JSON wire formats shared by the HTTP service and the CLI.

Both surfaces build payload dicts here and serialize them with
:func:`dump_json`, so identical inputs produce byte-identical JSON no
matter which front door the request came through. Field order is fixed by
construction order; floats serialize with Python's shortest-repr rules.
"""

from __future__ import annotations

import json
from typing import Any, Mapping, Sequence

from .catalog import (
    MAX_EYE_LEVEL,
    MAX_TIER,
    MIN_EYE_LEVEL,
    MIN_TIER,
    SERVICE_FEATURES,
    PlanRecord,
    UserLocation,
    UserPreference,
    WardType,
    plan_to_mapping,
)
from .errors import FieldError, ValidationFailure
from .recommend import Recommendation, RecommendationRequest
from .similarity import Metric

CODE_OK = "ok"
CODE_NO_CANDIDATES = "no_candidates"
CODE_EMPTY_PREFERENCE = "empty_preference"
CODE_VALIDATION_ERROR = "validation_error"

_METRIC_NAMES = {m.value for m in Metric}
_LOCATION_NAMES = {loc.value for loc in UserLocation}
_WARD_NAMES = {w.value for w in WardType}


def dump_json(payload: Any) -> str:
    """Compact, non-ASCII-preserving JSON with a stable field order."""
    return json.dumps(payload, ensure_ascii=False, allow_nan=False, separators=(",", ":"))


def recommendation_payload(rec: Recommendation) -> dict[str, Any]:
    return {
        "rank": rec.rank,
        "plan_id": rec.plan_id,
        "hmo_id": rec.hmo_id,
        "hmo_name": rec.hmo_name,
        "plan_name": rec.plan_name,
        "premium_tier": rec.premium_tier,
        "similarity_score": rec.similarity_score,
        "mean_rating": rec.mean_rating,
        "matched_features": list(rec.matched_features),
    }


def recommend_response_payload(
    recommendations: Sequence[Recommendation],
    metric: Metric,
    schema_id: str,
    code: str = CODE_OK,
) -> dict[str, Any]:
    return {
        "code": code,
        "metric": metric.value,
        "schema_id": schema_id,
        "recommendations": [recommendation_payload(r) for r in recommendations],
    }


def plans_payload(plans: Sequence[PlanRecord]) -> list[dict[str, Any]]:
    """Catalog listing, stable order by plan_id; doubles as the JSON file form."""
    return [plan_to_mapping(p) for p in sorted(plans, key=lambda p: p.plan_id)]


def error_payload(code: str, message: str) -> dict[str, Any]:
    return {"code": code, "message": message}


def validation_error_payload(failure: ValidationFailure) -> dict[str, Any]:
    return {
        "code": CODE_VALIDATION_ERROR,
        "errors": [{"field": e.field, "message": e.message} for e in failure.errors],
    }


# ---------------------------------------------------------------------------
# Request parsing (collects every field error before failing)


def parse_preference(data: Any, where: str = "preference") -> UserPreference:
    """Parse the preference object of a request body.

    Raises ValidationFailure carrying one FieldError per problem so the
    service can answer with field-level messages.
    """
    errors: list[FieldError] = []
    if not isinstance(data, Mapping):
        raise ValidationFailure([FieldError(where, "must be an object")])

    known_keys = {"location", "max_tier", "desired", "ward_preference", "eye_care_preference"}
    for key in sorted(set(data) - known_keys):
        errors.append(FieldError(f"{where}.{key}", "unknown field"))

    location: UserLocation | None = None
    raw_location = data.get("location")
    if isinstance(raw_location, str) and raw_location.strip().lower() in _LOCATION_NAMES:
        location = UserLocation(raw_location.strip().lower())
    else:
        errors.append(
            FieldError(
                f"{where}.location",
                f"must be one of {sorted(_LOCATION_NAMES)}, got {raw_location!r}",
            )
        )

    max_tier: int | None = None
    raw_tier = data.get("max_tier")
    if isinstance(raw_tier, int) and not isinstance(raw_tier, bool) and MIN_TIER <= raw_tier <= MAX_TIER:
        max_tier = raw_tier
    else:
        errors.append(
            FieldError(
                f"{where}.max_tier",
                f"must be an integer in [{MIN_TIER},{MAX_TIER}], got {raw_tier!r}",
            )
        )

    desired: dict[str, bool] = {}
    raw_desired = data.get("desired")
    if not isinstance(raw_desired, Mapping):
        errors.append(FieldError(f"{where}.desired", "must be an object of feature -> yes/no"))
    else:
        for key in sorted(set(raw_desired) - set(SERVICE_FEATURES)):
            errors.append(FieldError(f"{where}.desired.{key}", "unknown service feature"))
        for name in SERVICE_FEATURES:
            if name not in raw_desired:
                errors.append(FieldError(f"{where}.desired.{name}", "missing answer"))
                continue
            value = raw_desired[name]
            if isinstance(value, bool):
                desired[name] = value
            elif isinstance(value, str) and value.strip().lower() in ("yes", "no"):
                desired[name] = value.strip().lower() == "yes"
            else:
                errors.append(
                    FieldError(f"{where}.desired.{name}", f"must be true/false, got {value!r}")
                )

    ward: WardType | None = None
    raw_ward = data.get("ward_preference")
    if raw_ward is not None:
        if isinstance(raw_ward, str) and raw_ward.strip().lower() in _WARD_NAMES:
            ward = WardType(raw_ward.strip().lower())
        else:
            errors.append(
                FieldError(
                    f"{where}.ward_preference",
                    f"must be one of {sorted(_WARD_NAMES)} or omitted, got {raw_ward!r}",
                )
            )

    eye: int | None = None
    raw_eye = data.get("eye_care_preference")
    if raw_eye is not None:
        if (
            isinstance(raw_eye, int)
            and not isinstance(raw_eye, bool)
            and MIN_EYE_LEVEL <= raw_eye <= MAX_EYE_LEVEL
        ):
            eye = raw_eye
        else:
            errors.append(
                FieldError(
                    f"{where}.eye_care_preference",
                    f"must be an integer in [{MIN_EYE_LEVEL},{MAX_EYE_LEVEL}] or omitted, got {raw_eye!r}",
                )
            )

    if errors:
        raise ValidationFailure(errors)
    assert location is not None and max_tier is not None
    return UserPreference(
        location=location,
        max_tier=max_tier,
        desired=desired,
        ward_preference=ward,
        eye_care_preference=eye,
    )


def parse_recommendation_request(
    data: Any, default_metric: Metric = Metric.COSINE
) -> RecommendationRequest:
    """Parse a full /recommend body: preference plus optional metric and pool."""
    if not isinstance(data, Mapping):
        raise ValidationFailure([FieldError("body", "must be a JSON object")])
    errors: list[FieldError] = []

    known_keys = {"preference", "metric", "pool_size"}
    for key in sorted(set(data) - known_keys):
        errors.append(FieldError(key, "unknown field"))

    preference: UserPreference | None = None
    try:
        preference = parse_preference(data.get("preference"))
    except ValidationFailure as failure:
        errors.extend(failure.errors)

    metric = default_metric
    raw_metric = data.get("metric")
    if raw_metric is not None:
        if isinstance(raw_metric, str) and raw_metric.strip().lower() in _METRIC_NAMES:
            metric = Metric(raw_metric.strip().lower())
        else:
            errors.append(
                FieldError("metric", f"must be one of {sorted(_METRIC_NAMES)}, got {raw_metric!r}")
            )

    pool_size = None
    raw_pool = data.get("pool_size")
    if raw_pool is not None:
        if isinstance(raw_pool, int) and not isinstance(raw_pool, bool) and raw_pool >= 1:
            pool_size = raw_pool
        else:
            errors.append(
                FieldError("pool_size", f"must be a positive integer, got {raw_pool!r}")
            )

    if errors:
        raise ValidationFailure(errors)
    assert preference is not None
    if pool_size is None:
        return RecommendationRequest(preference=preference, metric=metric)
    return RecommendationRequest(preference=preference, metric=metric, pool_size=pool_size)


def preference_to_mapping(pref: UserPreference) -> dict[str, Any]:
    """Serialize a preference back to its request form (round-trip aid)."""
    out: dict[str, Any] = {
        "location": pref.location.value,
        "max_tier": pref.max_tier,
        "desired": {name: pref.desired[name] for name in SERVICE_FEATURES},
    }
    if pref.ward_preference is not None:
        out["ward_preference"] = pref.ward_preference.value
    if pref.eye_care_preference is not None:
        out["eye_care_preference"] = pref.eye_care_preference
    return out
