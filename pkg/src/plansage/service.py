"""JSON-over-HTTP facade for the recommendation pipeline.

Endpoints (all under /api/v1):

    POST /recommend      run the pipeline for one preference
    GET  /plans          list the catalog, optionally filtered by tier/region
    GET  /health         liveness plus catalog size and schema id
    POST /admin/reload   re-read the data files; old snapshot stays on failure

Responses are built through :mod:`plansage.wire`, so the bytes match the
CLI exactly for identical inputs. Request bodies are parsed by the same
validators the CLI uses; FastAPI is only the transport.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from fastapi import FastAPI, Request, Response
from fastapi.middleware.cors import CORSMiddleware

from . import wire
from .catalog import CoverageRegion, scan_catalog, scan_ratings
from .errors import (
    ConfigError,
    EmptyPreferenceError,
    NoCandidatesError,
    PlansageError,
    ValidationFailure,
)
from .similarity import Metric
from .snapshot import Snapshot, SnapshotStore

ADMIN_TOKEN_ENV = "PLANSAGE_ADMIN_TOKEN"
CONFIG_ENV = "PLANSAGE_CONFIG"
ADMIN_TOKEN_HEADER = "x-admin-token"


@dataclass
class ServiceConfig:
    """Startup configuration, usually read from the PLANSAGE_CONFIG file."""

    catalog_path: str
    ratings_path: str | None = None
    listen_address: str = "127.0.0.1:8080"
    default_metric: Metric = Metric.COSINE
    cors_allowed_origins: tuple[str, ...] = ()

    @property
    def host(self) -> str:
        return self.listen_address.rsplit(":", 1)[0]

    @property
    def port(self) -> int:
        return int(self.listen_address.rsplit(":", 1)[1])

    @classmethod
    def from_file(cls, path: str | Path) -> "ServiceConfig":
        """Parse and validate a JSON config file.

        Relative data paths resolve against the config file's directory.
        Raises ConfigError on any problem (the serve command maps that to
        exit code 2).
        """
        path = Path(path)
        try:
            raw = json.loads(path.read_text(encoding="utf-8"))
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc.strerror}")
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config {path} is not valid JSON: {exc.msg} (line {exc.lineno})")
        if not isinstance(raw, dict):
            raise ConfigError(f"config {path} must be a JSON object")

        known = {
            "catalog_path",
            "ratings_path",
            "listen_address",
            "default_metric",
            "cors_allowed_origins",
        }
        unknown = sorted(set(raw) - known)
        if unknown:
            raise ConfigError(f"config {path} has unknown keys: {unknown}")
        if "catalog_path" not in raw:
            raise ConfigError(f"config {path} is missing catalog_path")

        base = path.parent

        def resolve(p: str) -> str:
            candidate = Path(p)
            return str(candidate if candidate.is_absolute() else base / candidate)

        catalog_path = resolve(str(raw["catalog_path"]))
        ratings_path = resolve(str(raw["ratings_path"])) if raw.get("ratings_path") else None

        listen = str(raw.get("listen_address", "127.0.0.1:8080"))
        if ":" not in listen:
            raise ConfigError(f"listen_address must be host:port, got {listen!r}")
        try:
            port = int(listen.rsplit(":", 1)[1])
        except ValueError:
            raise ConfigError(f"listen_address port is not an integer: {listen!r}")
        if not (1 <= port <= 65535):
            raise ConfigError(f"listen_address port must be in [1,65535], got {port}")

        raw_metric = str(raw.get("default_metric", Metric.COSINE.value)).lower()
        try:
            metric = Metric(raw_metric)
        except ValueError:
            raise ConfigError(f"default_metric must be cosine or knn, got {raw_metric!r}")

        origins = raw.get("cors_allowed_origins", [])
        if not isinstance(origins, list) or not all(isinstance(o, str) for o in origins):
            raise ConfigError("cors_allowed_origins must be a list of origin strings")

        if not Path(catalog_path).exists():
            raise ConfigError(f"catalog_path does not exist: {catalog_path}")
        if ratings_path is not None and not Path(ratings_path).exists():
            raise ConfigError(f"ratings_path does not exist: {ratings_path}")

        return cls(
            catalog_path=catalog_path,
            ratings_path=ratings_path,
            listen_address=listen,
            default_metric=metric,
            cors_allowed_origins=tuple(origins),
        )


def _json_response(payload: Any, status_code: int = 200) -> Response:
    return Response(
        content=wire.dump_json(payload),
        status_code=status_code,
        media_type="application/json",
    )


def create_app(config: ServiceConfig, preload: bool = True) -> FastAPI:
    """Build the FastAPI app around a snapshot store.

    With ``preload`` the catalog is loaded eagerly and load errors propagate
    to the caller (the serve command exits 3 on them). Without it the app
    starts empty and /health reports 503 until a reload succeeds.
    """
    app = FastAPI(title="plansage", docs_url=None, redoc_url=None)
    store = SnapshotStore()
    app.state.config = config
    app.state.store = store

    if preload:
        store.swap(
            Snapshot.from_paths(
                config.catalog_path, config.ratings_path, config.default_metric
            )
        )

    if config.cors_allowed_origins:
        app.add_middleware(
            CORSMiddleware,
            allow_origins=list(config.cors_allowed_origins),
            allow_methods=["*"],
            allow_headers=["*"],
        )

    @app.post("/api/v1/recommend")
    async def recommend_endpoint(request: Request) -> Response:
        content_type = (request.headers.get("content-type") or "").split(";")[0].strip().lower()
        if content_type != "application/json":
            return _json_response(
                wire.error_payload(
                    "unsupported_media_type", "Content-Type must be application/json"
                ),
                status_code=415,
            )
        body = await request.body()
        try:
            data = json.loads(body)
        except json.JSONDecodeError as exc:
            return _json_response(
                wire.error_payload("malformed_json", f"request body is not valid JSON: {exc.msg}"),
                status_code=400,
            )
        try:
            req = wire.parse_recommendation_request(data, config.default_metric)
        except ValidationFailure as failure:
            return _json_response(wire.validation_error_payload(failure), status_code=400)

        snapshot = store.current
        if snapshot is None:
            return _json_response(
                wire.error_payload("catalog_unavailable", "catalog is not loaded"),
                status_code=503,
            )
        try:
            recs = snapshot.recommender.recommend(
                req.preference, metric=req.metric, pool_size=req.pool_size
            )
        except EmptyPreferenceError as exc:
            return _json_response(
                wire.error_payload(wire.CODE_EMPTY_PREFERENCE, str(exc)), status_code=422
            )
        except NoCandidatesError:
            return _json_response(
                wire.recommend_response_payload(
                    [], req.metric, snapshot.schema_id, code=wire.CODE_NO_CANDIDATES
                )
            )
        return _json_response(
            wire.recommend_response_payload(recs, req.metric, snapshot.schema_id)
        )

    @app.get("/api/v1/plans")
    async def plans_endpoint(request: Request) -> Response:
        snapshot = store.current
        if snapshot is None:
            return _json_response(
                wire.error_payload("catalog_unavailable", "catalog is not loaded"),
                status_code=503,
            )
        params = request.query_params
        unknown = sorted(set(params) - {"tier", "region"})
        if unknown:
            return _json_response(
                wire.error_payload("bad_filter", f"unknown filters: {unknown}"),
                status_code=400,
            )
        plans = list(snapshot.plans)
        tier_raw = params.get("tier")
        if tier_raw is not None:
            if tier_raw not in {"1", "2", "3", "4"}:
                return _json_response(
                    wire.error_payload("bad_filter", f"tier must be 1..4, got {tier_raw!r}"),
                    status_code=400,
                )
            plans = [p for p in plans if p.premium_tier == int(tier_raw)]
        region_raw = params.get("region")
        if region_raw is not None:
            normalized = region_raw.strip().lower()
            if normalized not in {r.value for r in CoverageRegion}:
                return _json_response(
                    wire.error_payload(
                        "bad_filter", f"region must be lagos or nationwide, got {region_raw!r}"
                    ),
                    status_code=400,
                )
            plans = [p for p in plans if p.coverage_region.value == normalized]
        return _json_response(wire.plans_payload(plans))

    @app.get("/api/v1/health")
    async def health_endpoint() -> Response:
        snapshot = store.current
        if snapshot is None:
            return _json_response(
                {"status": "unavailable", "catalog_size": 0, "schema_id": None},
                status_code=503,
            )
        return _json_response(
            {
                "status": "ok",
                "catalog_size": snapshot.catalog_size,
                "schema_id": snapshot.schema_id,
            }
        )

    @app.post("/api/v1/admin/reload")
    async def reload_endpoint(request: Request) -> Response:
        expected = os.environ.get(ADMIN_TOKEN_ENV)
        presented = request.headers.get(ADMIN_TOKEN_HEADER)
        if not expected or presented != expected:
            return _json_response(
                wire.error_payload("unauthorized", "missing or invalid admin token"),
                status_code=401,
            )
        # Validate first so a broken file can never displace the live snapshot.
        problems: list[str] = []
        try:
            cat_scan = scan_catalog(config.catalog_path)
            problems.extend(f"catalog {v}" for v in map(str, cat_scan.violations))
            if not cat_scan.records and not cat_scan.violations:
                problems.append("catalog contains no plan rows")
            if config.ratings_path is not None:
                rat_scan = scan_ratings(config.ratings_path)
                problems.extend(f"ratings {v}" for v in map(str, rat_scan.violations))
        except PlansageError as exc:
            problems.append(str(exc))
        if problems:
            return _json_response(
                {"code": "invalid_snapshot", "errors": problems}, status_code=422
            )
        try:
            snapshot = Snapshot.from_paths(
                config.catalog_path, config.ratings_path, config.default_metric
            )
        except PlansageError as exc:
            return _json_response(
                {"code": "invalid_snapshot", "errors": [str(exc)]}, status_code=422
            )
        store.swap(snapshot)
        return _json_response(
            {
                "code": "reloaded",
                "catalog_size": snapshot.catalog_size,
                "schema_id": snapshot.schema_id,
            }
        )

    return app


def run(config: ServiceConfig) -> None:
    """Blocking server entry used by `plansage serve`."""
    import uvicorn

    app = create_app(config, preload=True)
    uvicorn.run(app, host=config.host, port=config.port, log_level="info")
