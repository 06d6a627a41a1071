"""Operator command line: validate data files, run recommendations, compare metrics.

Machine-readable JSON goes to stdout, human-readable notes to stderr.
Exit codes: 0 success, 1 invalid input, 2 bad service config, 3 catalog
load failure at serve time, 4 no candidates survived the filter.
"""

from __future__ import annotations

import json
import os
from pathlib import Path

import click

from . import service as service_mod
from . import wire
from .catalog import scan_catalog, scan_ratings
from .compare import run_comparison
from .errors import (
    ConfigError,
    EmptyPreferenceError,
    MalformedFileError,
    NoCandidatesError,
    PlansageError,
    ValidationFailure,
)
from .similarity import Metric
from .snapshot import Snapshot

EXIT_OK = 0
EXIT_INVALID_INPUT = 1
EXIT_CONFIG_ERROR = 2
EXIT_LOAD_FAILURE = 3
EXIT_NO_CANDIDATES = 4

_METRIC_FLAG = {"cosine": Metric.COSINE, "knn": Metric.EUCLIDEAN_KNN}


@click.group()
@click.version_option(package_name="plansage")
def main() -> None:
    """Content-based health insurance plan recommender."""


@main.command()
@click.option("--catalog", "catalog_path", required=True, type=click.Path(), help="Plan catalog CSV/JSON.")
@click.option("--ratings", "ratings_path", type=click.Path(), default=None, help="Optional HMO ratings CSV/JSON.")
def validate(catalog_path: str, ratings_path: str | None) -> None:
    """Check data files and print a validation report."""
    report: dict = {"valid": True}
    try:
        cat = scan_catalog(catalog_path)
    except MalformedFileError as exc:
        click.echo(wire.dump_json({"valid": False, "error": str(exc)}))
        click.echo(f"error: {exc}", err=True)
        raise SystemExit(EXIT_INVALID_INPUT)

    report["catalog"] = {
        "path": cat.path,
        "rows_read": cat.rows_read,
        "valid_records": len(cat.records),
        "violations": [
            {"line": v.line, "field": v.field, "message": v.message} for v in cat.violations
        ],
        "missing_value_counts": cat.missing_value_counts,
        "tier_histogram": {str(t): cat.tier_histogram.get(t, 0) for t in (1, 2, 3, 4)},
        "region_histogram": cat.region_histogram,
    }
    ok = cat.ok
    if not cat.records and not cat.violations:
        report["catalog"]["violations"].append(
            {"line": 1, "field": "file", "message": "catalog contains no plan rows"}
        )
        ok = False

    if ratings_path is not None:
        try:
            rat = scan_ratings(ratings_path)
        except MalformedFileError as exc:
            click.echo(wire.dump_json({"valid": False, "error": str(exc)}))
            click.echo(f"error: {exc}", err=True)
            raise SystemExit(EXIT_INVALID_INPUT)
        report["ratings"] = {
            "path": rat.path,
            "rows_read": rat.rows_read,
            "valid_records": len(rat.records),
            "violations": [
                {"line": v.line, "field": v.field, "message": v.message} for v in rat.violations
            ],
        }
        ok = ok and rat.ok

    report["valid"] = ok
    click.echo(wire.dump_json(report))

    click.echo(
        f"{len(cat.records)} plans, {len(cat.violations)} violations", err=True
    )
    for violation in cat.violations:
        click.echo(f"  catalog {violation}", err=True)
    if ratings_path is not None:
        click.echo(
            f"{report['ratings']['valid_records']} ratings, "
            f"{len(report['ratings']['violations'])} violations",
            err=True,
        )
        for item in report["ratings"]["violations"]:
            click.echo(
                f"  ratings line {item['line']}, {item['field']}: {item['message']}", err=True
            )
    raise SystemExit(EXIT_OK if ok else EXIT_INVALID_INPUT)


@main.command()
@click.option("--catalog", "catalog_path", required=True, type=click.Path(), help="Plan catalog CSV/JSON.")
@click.option("--ratings", "ratings_path", required=True, type=click.Path(), help="HMO ratings CSV/JSON.")
@click.option("--pref", "pref_path", required=True, type=click.Path(), help="Preference JSON file.")
@click.option("--metric", type=click.Choice(["cosine", "knn"]), default="cosine", show_default=True)
def recommend(catalog_path: str, ratings_path: str, pref_path: str, metric: str) -> None:
    """Print top-3 recommendations as JSON (same payload as the HTTP API)."""
    try:
        raw = json.loads(Path(pref_path).read_text(encoding="utf-8"))
    except OSError as exc:
        click.echo(f"error: cannot read {pref_path}: {exc.strerror}", err=True)
        raise SystemExit(EXIT_INVALID_INPUT)
    except json.JSONDecodeError as exc:
        click.echo(f"error: {pref_path} is not valid JSON: {exc.msg}", err=True)
        raise SystemExit(EXIT_INVALID_INPUT)

    chosen = _METRIC_FLAG[metric]
    try:
        preference = wire.parse_preference(raw)
    except ValidationFailure as failure:
        for err in failure.errors:
            click.echo(f"error: {err.field}: {err.message}", err=True)
        raise SystemExit(EXIT_INVALID_INPUT)

    try:
        snapshot = Snapshot.from_paths(catalog_path, ratings_path, chosen)
    except PlansageError as exc:
        click.echo(f"error: {exc}", err=True)
        raise SystemExit(EXIT_INVALID_INPUT)

    try:
        recs = snapshot.recommender.recommend(preference, metric=chosen)
    except EmptyPreferenceError as exc:
        click.echo(f"error: {exc}", err=True)
        raise SystemExit(EXIT_INVALID_INPUT)
    except NoCandidatesError:
        payload = wire.recommend_response_payload(
            [], chosen, snapshot.schema_id, code=wire.CODE_NO_CANDIDATES
        )
        click.echo(wire.dump_json(payload))
        click.echo("no plan matches the requested location and price tier", err=True)
        raise SystemExit(EXIT_NO_CANDIDATES)

    click.echo(wire.dump_json(wire.recommend_response_payload(recs, chosen, snapshot.schema_id)))


@main.command()
@click.option("--catalog", "catalog_path", required=True, type=click.Path(), help="Plan catalog CSV/JSON.")
@click.option("--ratings", "ratings_path", required=True, type=click.Path(), help="HMO ratings CSV/JSON.")
@click.option("--trials", default=200, show_default=True, type=click.IntRange(min=1))
@click.option("--seed", default=7, show_default=True, type=int)
def compare(catalog_path: str, ratings_path: str, trials: int, seed: int) -> None:
    """Run both metrics over seeded random preferences and report agreement."""
    try:
        snapshot = Snapshot.from_paths(catalog_path, ratings_path)
    except PlansageError as exc:
        click.echo(f"error: {exc}", err=True)
        raise SystemExit(EXIT_INVALID_INPUT)

    report = run_comparison(snapshot.plans, snapshot.ratings, trials, seed)
    click.echo(wire.dump_json(report.to_payload()))

    click.echo(
        f"{report.trials} trials, seed {report.seed}: "
        f"top-1 agreement {report.top1_agreement_rate:.3f}, "
        f"mean top-3 jaccard {report.mean_top3_jaccard:.3f}, "
        f"{len(report.disagreements)} disagreements",
        err=True,
    )
    for outcome in report.disagreements[:10]:
        click.echo(
            f"  trial {outcome.trial}: cosine={list(outcome.cosine_top)} "
            f"knn={list(outcome.knn_top)}",
            err=True,
        )


@main.command()
@click.option(
    "--config",
    "config_path",
    type=click.Path(),
    default=None,
    help=f"Service config JSON (defaults to ${service_mod.CONFIG_ENV}).",
)
def serve(config_path: str | None) -> None:
    """Start the HTTP service."""
    path = config_path or os.environ.get(service_mod.CONFIG_ENV)
    if not path:
        click.echo(
            f"error: pass --config or set {service_mod.CONFIG_ENV}", err=True
        )
        raise SystemExit(EXIT_CONFIG_ERROR)
    try:
        config = service_mod.ServiceConfig.from_file(path)
    except ConfigError as exc:
        click.echo(f"error: {exc}", err=True)
        raise SystemExit(EXIT_CONFIG_ERROR)
    try:
        service_mod.run(config)
    except PlansageError as exc:
        click.echo(f"error: catalog load failed: {exc}", err=True)
        raise SystemExit(EXIT_LOAD_FAILURE)
    raise SystemExit(EXIT_OK)


if __name__ == "__main__":
    main()
