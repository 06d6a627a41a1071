"""Immutable catalog snapshots with atomic swap-on-reload.

A snapshot bundles the loaded plans, ratings and a fitted recommender under
a schema id of the form ``<encoder version>+<content digest>``. The digest
covers the raw file bytes, so clients can use the id for cache busting: it
changes exactly when the underlying data (or the encoding layout) changes.

Readers grab the current snapshot once per request and keep using it even
if a reload publishes a new one mid-flight; nothing ever observes a
half-loaded catalog.
"""

from __future__ import annotations

import hashlib
import threading
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping

from .catalog import PlanRecord, RatingRecord, load_catalog, load_ratings
from .encoding import ENCODER_VERSION, EncodingSchema
from .recommend import PlanRecommender
from .similarity import Metric


def content_digest(catalog_path: str | Path, ratings_path: str | Path | None) -> str:
    hasher = hashlib.sha256()
    hasher.update(Path(catalog_path).read_bytes())
    hasher.update(b"\x00")
    if ratings_path is not None:
        hasher.update(Path(ratings_path).read_bytes())
    return hasher.hexdigest()[:12]


@dataclass(frozen=True)
class Snapshot:
    """One immutable view of the catalog, safe for unlimited readers."""

    plans: tuple[PlanRecord, ...]
    ratings: Mapping[str, RatingRecord]
    recommender: PlanRecommender
    schema_id: str

    @property
    def catalog_size(self) -> int:
        return len(self.plans)

    @classmethod
    def from_paths(
        cls,
        catalog_path: str | Path,
        ratings_path: str | Path | None = None,
        default_metric: Metric = Metric.COSINE,
    ) -> "Snapshot":
        """Load files, validate, encode and fit; raises on any bad input."""
        plans = load_catalog(catalog_path)
        ratings = load_ratings(ratings_path) if ratings_path is not None else {}
        schema_id = f"{ENCODER_VERSION}+{content_digest(catalog_path, ratings_path)}"
        schema = EncodingSchema(schema_id=schema_id)
        recommender = PlanRecommender(metric=default_metric, schema=schema)
        recommender.fit(plans, ratings)
        return cls(
            plans=tuple(plans),
            ratings=dict(ratings),
            recommender=recommender,
            schema_id=schema_id,
        )


class SnapshotStore:
    """Holds the live snapshot; replaces it atomically on reload."""

    def __init__(self, snapshot: Snapshot | None = None):
        self._lock = threading.Lock()
        self._current = snapshot

    @property
    def current(self) -> Snapshot | None:
        return self._current

    def swap(self, snapshot: Snapshot) -> None:
        # Single reference assignment; in-flight readers keep the old object.
        with self._lock:
            self._current = snapshot
