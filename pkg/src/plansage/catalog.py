"""Plan catalog data model plus file ingestion, validation and serialization.

Catalogs and ratings live in UTF-8 CSV files (or an equivalent JSON array
when the extension is ``.json``). Loading is strict: any row that breaks the
schema fails the load with the offending line number. The ``scan_*``
functions collect every violation instead of stopping at the first one,
which is what the ``plansage validate`` command reports.
"""

from __future__ import annotations

import csv
import json
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Iterable, Mapping

from .errors import (
    EmptyCatalogError,
    MalformedFileError,
    RowViolation,
    SchemaViolationError,
)

# Service features encoded into similarity vectors, in catalog column order.
SERVICE_FEATURES: tuple[str, ...] = (
    "family_planning",
    "mental_health",
    "dental_care",
    "telemedicine",
    "cashback_benefit",
    "anc_delivery",
    "gym_membership",
    "annual_screening",
)

CATALOG_COLUMNS: tuple[str, ...] = (
    "plan_id",
    "hmo_id",
    "hmo_name",
    "plan_name",
    "premium_tier",
    "coverage_region",
    *SERVICE_FEATURES,
    "ward_type",
    "eye_care_limit_level",
)

RATINGS_COLUMNS: tuple[str, ...] = ("hmo_id", "mean_rating", "rating_count")

MIN_TIER, MAX_TIER = 1, 4
MIN_EYE_LEVEL, MAX_EYE_LEVEL = 0, 3


class CoverageRegion(str, Enum):
    """Where a plan's cover is honoured."""

    LAGOS_ONLY = "lagos"
    NATIONWIDE = "nationwide"


class UserLocation(str, Enum):
    """The reach a user needs from their plan."""

    LAGOS = "lagos"
    NATIONWIDE = "nationwide"


class WardType(str, Enum):
    """Admission ward class, ordered by ascending comfort."""

    GENERAL = "general"
    SEMI_PRIVATE = "semi_private"
    PRIVATE = "private"

    @property
    def comfort_level(self) -> int:
        return _WARD_LEVELS[self]


_WARD_LEVELS = {WardType.GENERAL: 1, WardType.SEMI_PRIVATE: 2, WardType.PRIVATE: 3}


@dataclass(frozen=True, slots=True)
class PlanRecord:
    """One purchasable insurance plan."""

    plan_id: str
    hmo_id: str
    hmo_name: str
    plan_name: str
    premium_tier: int
    coverage_region: CoverageRegion
    family_planning: bool
    mental_health: bool
    dental_care: bool
    telemedicine: bool
    cashback_benefit: bool
    anc_delivery: bool
    gym_membership: bool
    annual_screening: bool
    ward_type: WardType
    eye_care_limit_level: int

    def __post_init__(self) -> None:
        if not (MIN_TIER <= self.premium_tier <= MAX_TIER):
            raise ValueError(f"premium_tier must be in [1,4], got {self.premium_tier}")
        if not (MIN_EYE_LEVEL <= self.eye_care_limit_level <= MAX_EYE_LEVEL):
            raise ValueError(
                f"eye_care_limit_level must be in [0,3], got {self.eye_care_limit_level}"
            )

    def feature_flags(self) -> dict[str, bool]:
        """The eight boolean service features, in canonical order."""
        return {name: getattr(self, name) for name in SERVICE_FEATURES}


@dataclass(frozen=True, slots=True)
class RatingRecord:
    """Aggregate prospective-client rating for one HMO."""

    hmo_id: str
    mean_rating: float
    rating_count: int

    def __post_init__(self) -> None:
        if not (0.0 <= self.mean_rating <= 5.0):
            raise ValueError(f"mean_rating must be in [0,5], got {self.mean_rating}")
        if self.rating_count < 0:
            raise ValueError(f"rating_count must be >= 0, got {self.rating_count}")


@dataclass(frozen=True)
class UserPreference:
    """The query side: where the user is, what they can pay, what they want.

    ``desired`` must hold a yes/no answer for every service feature; unknown
    feature names are a construction error. ``ward_preference`` and
    ``eye_care_preference`` are optional and encode as zero when absent.
    """

    location: UserLocation
    max_tier: int
    desired: Mapping[str, bool]
    ward_preference: WardType | None = None
    eye_care_preference: int | None = None

    def __post_init__(self) -> None:
        # Accept wire strings for the enums; identity checks downstream
        # (location is UserLocation.NATIONWIDE) rely on real members.
        object.__setattr__(self, "location", UserLocation(self.location))
        if self.ward_preference is not None:
            object.__setattr__(self, "ward_preference", WardType(self.ward_preference))
        if not (MIN_TIER <= self.max_tier <= MAX_TIER):
            raise ValueError(f"max_tier must be in [1,4], got {self.max_tier}")
        keys = set(self.desired)
        known = set(SERVICE_FEATURES)
        if keys != known:
            unknown = sorted(keys - known)
            missing = sorted(known - keys)
            raise ValueError(
                f"desired must cover exactly the known service features; "
                f"unknown={unknown}, missing={missing}"
            )
        if self.eye_care_preference is not None and not (
            MIN_EYE_LEVEL <= self.eye_care_preference <= MAX_EYE_LEVEL
        ):
            raise ValueError(
                f"eye_care_preference must be in [0,3], got {self.eye_care_preference}"
            )
        # Canonical key order keeps downstream encodings deterministic.
        ordered = {name: bool(self.desired[name]) for name in SERVICE_FEATURES}
        object.__setattr__(self, "desired", ordered)

    @classmethod
    def from_flags(
        cls,
        location: UserLocation | str,
        max_tier: int,
        ward_preference: WardType | str | None = None,
        eye_care_preference: int | None = None,
        **desired: bool,
    ) -> "UserPreference":
        """Build a preference naming only the features the user wants.

        Unnamed features default to "no". Unknown names are rejected.
        """
        unknown = sorted(set(desired) - set(SERVICE_FEATURES))
        if unknown:
            raise ValueError(f"unknown service features: {unknown}")
        flags = {name: bool(desired.get(name, False)) for name in SERVICE_FEATURES}
        return cls(
            location=UserLocation(location),
            max_tier=max_tier,
            desired=flags,
            ward_preference=None if ward_preference is None else WardType(ward_preference),
            eye_care_preference=eye_care_preference,
        )


# ---------------------------------------------------------------------------
# Scanning and loading


@dataclass
class CatalogScan:
    """Everything ``plansage validate`` needs: records, violations, stats."""

    path: str
    records: list[PlanRecord] = field(default_factory=list)
    violations: list[RowViolation] = field(default_factory=list)
    missing_value_counts: dict[str, int] = field(default_factory=dict)
    tier_histogram: dict[int, int] = field(default_factory=dict)
    region_histogram: dict[str, int] = field(default_factory=dict)
    rows_read: int = 0

    @property
    def ok(self) -> bool:
        return not self.violations and bool(self.records)


@dataclass
class RatingsScan:
    path: str
    records: dict[str, RatingRecord] = field(default_factory=dict)
    violations: list[RowViolation] = field(default_factory=list)
    rows_read: int = 0

    @property
    def ok(self) -> bool:
        return not self.violations


class _RowError(Exception):
    def __init__(self, field_name: str, message: str):
        self.field_name = field_name
        self.message = message


def _parse_bool(raw: Any, column: str) -> bool | None:
    """yes/no (CSV) or native bool (JSON); None means the value is missing."""
    if raw is None:
        return None
    if isinstance(raw, bool):
        return raw
    if isinstance(raw, str):
        text = raw.strip().lower()
        if text == "":
            return None
        if text == "yes":
            return True
        if text == "no":
            return False
    raise _RowError(column, f"expected yes/no, got {raw!r}")


def _parse_int(raw: Any, column: str, lo: int, hi: int | None) -> int:
    if isinstance(raw, bool):  # bool is an int subclass; reject explicitly
        raise _RowError(column, f"expected an integer, got {raw!r}")
    if isinstance(raw, int):
        value = raw
    elif isinstance(raw, str) and raw.strip().lstrip("-").isdigit():
        value = int(raw.strip())
    else:
        raise _RowError(column, f"expected an integer, got {raw!r}")
    if hi is None:
        if value < lo:
            raise _RowError(column, f"must be >= {lo}, got {value}")
    elif not (lo <= value <= hi):
        raise _RowError(column, f"must be in [{lo},{hi}], got {value}")
    return value


def _parse_enum(raw: Any, column: str, enum_cls: type[Enum]) -> Any:
    if isinstance(raw, str):
        try:
            return enum_cls(raw.strip().lower())
        except ValueError:
            pass
    allowed = "/".join(member.value for member in enum_cls)
    raise _RowError(column, f"expected one of {allowed}, got {raw!r}")


def _parse_str(raw: Any, column: str) -> str:
    if isinstance(raw, str) and raw.strip():
        return raw.strip()
    raise _RowError(column, "must be a non-empty string")


def _plan_from_mapping(
    data: Mapping[str, Any], line: int, scan: CatalogScan
) -> PlanRecord:
    """Parse one row; raises _RowError and updates missing-value counts."""
    flags: dict[str, bool] = {}
    for name in SERVICE_FEATURES:
        parsed = _parse_bool(data.get(name), name)
        if parsed is None:
            # Missing benefit answers default to "no": never advertise cover
            # the source did not confirm.
            scan.missing_value_counts[name] = scan.missing_value_counts.get(name, 0) + 1
            parsed = False
        flags[name] = parsed
    return PlanRecord(
        plan_id=_parse_str(data.get("plan_id"), "plan_id"),
        hmo_id=_parse_str(data.get("hmo_id"), "hmo_id"),
        hmo_name=_parse_str(data.get("hmo_name"), "hmo_name"),
        plan_name=_parse_str(data.get("plan_name"), "plan_name"),
        premium_tier=_parse_int(data.get("premium_tier"), "premium_tier", MIN_TIER, MAX_TIER),
        coverage_region=_parse_enum(data.get("coverage_region"), "coverage_region", CoverageRegion),
        ward_type=_parse_enum(data.get("ward_type"), "ward_type", WardType),
        eye_care_limit_level=_parse_int(
            data.get("eye_care_limit_level"), "eye_care_limit_level", MIN_EYE_LEVEL, MAX_EYE_LEVEL
        ),
        **flags,
    )


def _iter_rows(path: Path, columns: tuple[str, ...]) -> Iterable[tuple[int, Mapping[str, Any]]]:
    """Yield (line, mapping) rows from a CSV or JSON file.

    Raises MalformedFileError for structural problems (syntax, header);
    yields a _RowError via the mapping sentinel for per-row shape issues.
    """
    if path.suffix.lower() == ".json":
        try:
            payload = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise MalformedFileError(str(path), f"invalid JSON: {exc.msg}", exc.lineno)
        if not isinstance(payload, list):
            raise MalformedFileError(str(path), "expected a JSON array of objects")
        for idx, entry in enumerate(payload, start=1):
            if not isinstance(entry, dict):
                yield idx, _BadRow("entry is not an object")
                continue
            unknown = sorted(set(entry) - set(columns))
            if unknown:
                yield idx, _BadRow(f"unknown keys: {unknown}")
                continue
            yield idx, entry
        return

    try:
        with path.open(newline="", encoding="utf-8") as handle:
            reader = csv.reader(handle)
            try:
                header = next(reader)
            except StopIteration:
                raise MalformedFileError(str(path), "missing header row", 1)
            if tuple(cell.strip().lower() for cell in header) != columns:
                raise MalformedFileError(
                    str(path), f"header must be exactly: {', '.join(columns)}", 1
                )
            for row in reader:
                if not row or all(cell.strip() == "" for cell in row):
                    continue  # skip blank lines
                line = reader.line_num
                if len(row) != len(columns):
                    yield line, _BadRow(
                        f"expected {len(columns)} fields, got {len(row)}"
                    )
                    continue
                yield line, dict(zip(columns, row))
    except csv.Error as exc:
        raise MalformedFileError(str(path), f"invalid CSV: {exc}")
    except OSError as exc:
        raise MalformedFileError(str(path), f"cannot read file: {exc.strerror}")


class _BadRow(dict):
    """Sentinel mapping marking a row whose shape is wrong."""

    def __init__(self, message: str):
        super().__init__()
        self.message = message


def scan_catalog(path: str | Path) -> CatalogScan:
    """Read a catalog file and collect every record and every violation."""
    path = Path(path)
    scan = CatalogScan(path=str(path))
    seen_ids: dict[str, int] = {}
    for line, row in _iter_rows(path, CATALOG_COLUMNS):
        scan.rows_read += 1
        if isinstance(row, _BadRow):
            scan.violations.append(RowViolation(line, "row", row.message))
            continue
        try:
            record = _plan_from_mapping(row, line, scan)
        except _RowError as exc:
            scan.violations.append(RowViolation(line, exc.field_name, exc.message))
            continue
        if record.plan_id in seen_ids:
            scan.violations.append(
                RowViolation(
                    line,
                    "plan_id",
                    f"duplicate plan_id {record.plan_id!r} (first seen on line {seen_ids[record.plan_id]})",
                )
            )
            continue
        seen_ids[record.plan_id] = line
        scan.records.append(record)
        scan.tier_histogram[record.premium_tier] = (
            scan.tier_histogram.get(record.premium_tier, 0) + 1
        )
        scan.region_histogram[record.coverage_region.value] = (
            scan.region_histogram.get(record.coverage_region.value, 0) + 1
        )
    return scan


def load_catalog(path: str | Path) -> list[PlanRecord]:
    """Load and validate a plan catalog; row order is preserved.

    Raises MalformedFileError, SchemaViolationError or EmptyCatalogError.
    """
    scan = scan_catalog(path)
    if scan.violations:
        raise SchemaViolationError(scan.path, scan.violations)
    if not scan.records:
        raise EmptyCatalogError(scan.path)
    return scan.records


def scan_ratings(path: str | Path) -> RatingsScan:
    """Read a ratings file and collect every record and every violation."""
    path = Path(path)
    scan = RatingsScan(path=str(path))
    seen: dict[str, int] = {}
    for line, row in _iter_rows(path, RATINGS_COLUMNS):
        scan.rows_read += 1
        if isinstance(row, _BadRow):
            scan.violations.append(RowViolation(line, "row", row.message))
            continue
        try:
            hmo_id = _parse_str(row.get("hmo_id"), "hmo_id")
            raw_mean = row.get("mean_rating")
            try:
                mean = float(raw_mean) if not isinstance(raw_mean, bool) else None
            except (TypeError, ValueError):
                mean = None
            if mean is None:
                raise _RowError("mean_rating", f"expected a number, got {raw_mean!r}")
            if not (0.0 <= mean <= 5.0):
                raise _RowError("mean_rating", f"must be in [0,5], got {mean}")
            count = _parse_int(row.get("rating_count"), "rating_count", 0, None)
        except _RowError as exc:
            scan.violations.append(RowViolation(line, exc.field_name, exc.message))
            continue
        if hmo_id in seen:
            scan.violations.append(
                RowViolation(
                    line,
                    "hmo_id",
                    f"duplicate hmo_id {hmo_id!r} (first seen on line {seen[hmo_id]})",
                )
            )
            continue
        seen[hmo_id] = line
        scan.records[hmo_id] = RatingRecord(hmo_id, mean, count)
    return scan


def load_ratings(path: str | Path) -> dict[str, RatingRecord]:
    """Load HMO ratings keyed by hmo_id. An empty file yields an empty map."""
    scan = scan_ratings(path)
    if scan.violations:
        raise SchemaViolationError(scan.path, scan.violations)
    return scan.records


# ---------------------------------------------------------------------------
# Serialization (write-then-load must round-trip exactly)


def plan_to_mapping(plan: PlanRecord) -> dict[str, Any]:
    """JSON-friendly mapping in canonical column order."""
    out: dict[str, Any] = {
        "plan_id": plan.plan_id,
        "hmo_id": plan.hmo_id,
        "hmo_name": plan.hmo_name,
        "plan_name": plan.plan_name,
        "premium_tier": plan.premium_tier,
        "coverage_region": plan.coverage_region.value,
    }
    for name in SERVICE_FEATURES:
        out[name] = getattr(plan, name)
    out["ward_type"] = plan.ward_type.value
    out["eye_care_limit_level"] = plan.eye_care_limit_level
    return out


def rating_to_mapping(rating: RatingRecord) -> dict[str, Any]:
    return {
        "hmo_id": rating.hmo_id,
        "mean_rating": rating.mean_rating,
        "rating_count": rating.rating_count,
    }


def write_catalog(records: Iterable[PlanRecord], path: str | Path) -> None:
    """Write plans to CSV (yes/no booleans) or JSON, by file extension."""
    path = Path(path)
    records = list(records)
    if path.suffix.lower() == ".json":
        payload = [plan_to_mapping(p) for p in records]
        path.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
        return
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(CATALOG_COLUMNS)
        for plan in records:
            row = plan_to_mapping(plan)
            writer.writerow(
                [
                    "yes" if row[col] is True else "no" if row[col] is False else row[col]
                    for col in CATALOG_COLUMNS
                ]
            )


def write_ratings(ratings: Mapping[str, RatingRecord] | Iterable[RatingRecord], path: str | Path) -> None:
    path = Path(path)
    records = list(ratings.values()) if isinstance(ratings, Mapping) else list(ratings)
    if path.suffix.lower() == ".json":
        payload = [rating_to_mapping(r) for r in records]
        path.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
        return
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(RATINGS_COLUMNS)
        for rating in records:
            writer.writerow([rating.hmo_id, rating.mean_rating, rating.rating_count])


def tier_counts(records: Iterable[PlanRecord]) -> Counter:
    return Counter(p.premium_tier for p in records)
