"""Bundled synthetic sample data at production scale: 148 plans, 22 HMOs.

The real plan catalogs this library is meant for are proprietary, so the
package ships a deterministic synthetic stand-in of the same size and
shape. The generator guarantees at least five plans in every tier/region
cell so no sensible query filters down to nothing, and it leaves a few
HMOs unrated to exercise the missing-rating path.

``load_sample_catalog``/``load_sample_ratings`` read the CSVs bundled with
the package; ``build_sample_catalog`` regenerates the identical records in
memory (a unit test pins the two together so they cannot drift).
"""

from __future__ import annotations

import random
from importlib import resources
from pathlib import Path

from .catalog import (
    SERVICE_FEATURES,
    CoverageRegion,
    PlanRecord,
    RatingRecord,
    WardType,
    load_catalog,
    load_ratings,
)

SAMPLE_SEED = 174_022
SAMPLE_PLAN_COUNT = 148

_HMOS: tuple[tuple[str, str], ...] = (
    ("hmo-01", "Everwell Health"),
    ("hmo-02", "BlueCrest HMO"),
    ("hmo-03", "Sterling Care"),
    ("hmo-04", "Haven Medical Trust"),
    ("hmo-05", "Meridian Health Partners"),
    ("hmo-06", "PrimeShield HMO"),
    ("hmo-07", "Cedarway Health"),
    ("hmo-08", "Northbridge Care"),
    ("hmo-09", "Oasis Wellness"),
    ("hmo-10", "Beacon Health Cover"),
    ("hmo-11", "Triumph Medicare"),
    ("hmo-12", "Lighthouse HMO"),
    ("hmo-13", "Crownview Health"),
    ("hmo-14", "SilverArc Care"),
    ("hmo-15", "Palmgrove Health"),
    ("hmo-16", "Ironwood Assurance"),
    ("hmo-17", "Summit Care Partners"),
    ("hmo-18", "Lakeshore HMO"),
    ("hmo-19", "Goldleaf Health"),
    ("hmo-20", "TrueNorth Medical"),
    ("hmo-21", "Harborline Care"),
    ("hmo-22", "Greenfield Health"),
)

_TIER_PRODUCT_NAMES = {1: "Essential", 2: "Classic", 3: "Premier", 4: "Platinum"}
_VARIANTS = ("Individual", "Family", "Plus", "Corporate", "Standard")

# How often each benefit shows up across the synthetic market.
_FEATURE_RATES = {
    "family_planning": 0.45,
    "mental_health": 0.35,
    "dental_care": 0.60,
    "telemedicine": 0.65,
    "cashback_benefit": 0.30,
    "anc_delivery": 0.50,
    "gym_membership": 0.25,
    "annual_screening": 0.70,
}

_UNRATED_HMOS = ("hmo-07", "hmo-14", "hmo-21")


def _tier_region_assignments(rng: random.Random) -> list[tuple[int, CoverageRegion]]:
    """148 (tier, region) cells with every combination represented >= 5 times."""
    cells: list[tuple[int, CoverageRegion]] = []
    for tier in (1, 2, 3, 4):
        for region in (CoverageRegion.LAGOS_ONLY, CoverageRegion.NATIONWIDE):
            cells.extend([(tier, region)] * 5)
    while len(cells) < SAMPLE_PLAN_COUNT:
        tier = rng.choices((1, 2, 3, 4), weights=(30, 30, 25, 15))[0]
        region = (
            CoverageRegion.LAGOS_ONLY if rng.random() < 0.6 else CoverageRegion.NATIONWIDE
        )
        cells.append((tier, region))
    rng.shuffle(cells)
    return cells


def build_sample_catalog(
    seed: int = SAMPLE_SEED,
) -> tuple[list[PlanRecord], dict[str, RatingRecord]]:
    """Deterministically regenerate the bundled sample plans and ratings."""
    rng = random.Random(seed)
    cells = _tier_region_assignments(rng)

    # 16 HMOs carry 7 plans, 6 carry 6: exactly 148.
    owners: list[tuple[str, str]] = []
    for idx, hmo in enumerate(_HMOS):
        owners.extend([hmo] * (7 if idx < 16 else 6))

    plans: list[PlanRecord] = []
    per_hmo_serial: dict[str, int] = {}
    for number, ((hmo_id, hmo_name), (tier, region)) in enumerate(
        zip(owners, cells), start=1
    ):
        serial = per_hmo_serial.get(hmo_id, 0) + 1
        per_hmo_serial[hmo_id] = serial
        flags = {name: rng.random() < _FEATURE_RATES[name] for name in SERVICE_FEATURES}
        # Pricier tiers skew toward better wards and higher eye-care limits.
        ward = rng.choices(
            (WardType.GENERAL, WardType.SEMI_PRIVATE, WardType.PRIVATE),
            weights=(60 - 10 * tier, 30, 10 + 10 * tier),
        )[0]
        eye_level = rng.choices((0, 1, 2, 3), weights=(45 - 8 * tier, 25, 20, 10 + 8 * tier))[0]
        variant = _VARIANTS[(serial - 1) % len(_VARIANTS)]
        plans.append(
            PlanRecord(
                plan_id=f"plan-{number:03d}",
                hmo_id=hmo_id,
                hmo_name=hmo_name,
                plan_name=f"{_TIER_PRODUCT_NAMES[tier]} {variant}",
                premium_tier=tier,
                coverage_region=region,
                ward_type=ward,
                eye_care_limit_level=eye_level,
                **flags,
            )
        )

    ratings: dict[str, RatingRecord] = {}
    for hmo_id, _ in _HMOS:
        if hmo_id in _UNRATED_HMOS:
            continue
        ratings[hmo_id] = RatingRecord(
            hmo_id=hmo_id,
            mean_rating=round(rng.uniform(2.5, 4.9), 1),
            rating_count=rng.randint(12, 480),
        )
    return plans, ratings


def sample_catalog_path() -> Path:
    return Path(str(resources.files("plansage").joinpath("data/sample_catalog.csv")))


def sample_ratings_path() -> Path:
    return Path(str(resources.files("plansage").joinpath("data/sample_ratings.csv")))


def sample_preference_path() -> Path:
    return Path(str(resources.files("plansage").joinpath("data/sample_preference.json")))


def load_sample_catalog() -> list[PlanRecord]:
    return load_catalog(sample_catalog_path())


def load_sample_ratings() -> dict[str, RatingRecord]:
    return load_ratings(sample_ratings_path())
