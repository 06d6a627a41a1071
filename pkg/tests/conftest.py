from __future__ import annotations

import pytest

from plansage.catalog import (
    CoverageRegion,
    PlanRecord,
    RatingRecord,
    UserPreference,
    WardType,
)
from plansage.datasets import (
    load_sample_catalog,
    load_sample_ratings,
    sample_catalog_path,
    sample_ratings_path,
)


def make_plan(plan_id: str = "plan-001", **overrides) -> PlanRecord:
    """Plan factory with quiet defaults; override what the test cares about."""
    fields = dict(
        plan_id=plan_id,
        hmo_id="hmo-01",
        hmo_name="Everwell Health",
        plan_name="Essential Individual",
        premium_tier=1,
        coverage_region=CoverageRegion.LAGOS_ONLY,
        family_planning=False,
        mental_health=False,
        dental_care=False,
        telemedicine=False,
        cashback_benefit=False,
        anc_delivery=False,
        gym_membership=False,
        annual_screening=False,
        ward_type=WardType.GENERAL,
        eye_care_limit_level=0,
    )
    fields.update(overrides)
    return PlanRecord(**fields)


def make_pref(location: str = "lagos", max_tier: int = 4, **desired) -> UserPreference:
    return UserPreference.from_flags(location, max_tier, **desired)


@pytest.fixture(scope="session")
def sample_plans():
    return load_sample_catalog()


@pytest.fixture(scope="session")
def sample_ratings():
    return load_sample_ratings()


@pytest.fixture(scope="session")
def sample_paths():
    return sample_catalog_path(), sample_ratings_path()


@pytest.fixture()
def ten_plan_catalog():
    """4 nationwide plans, 6 Lagos-only plans, mixed tiers."""
    rows = []
    for i, (tier, region) in enumerate(
        [
            (1, CoverageRegion.NATIONWIDE),
            (2, CoverageRegion.NATIONWIDE),
            (3, CoverageRegion.NATIONWIDE),
            (4, CoverageRegion.NATIONWIDE),
            (1, CoverageRegion.LAGOS_ONLY),
            (1, CoverageRegion.LAGOS_ONLY),
            (2, CoverageRegion.LAGOS_ONLY),
            (3, CoverageRegion.LAGOS_ONLY),
            (4, CoverageRegion.LAGOS_ONLY),
            (4, CoverageRegion.LAGOS_ONLY),
        ],
        start=1,
    ):
        rows.append(
            make_plan(
                plan_id=f"plan-{i:03d}",
                hmo_id=f"hmo-{i:02d}",
                premium_tier=tier,
                coverage_region=region,
                dental_care=i % 2 == 0,
                telemedicine=i % 3 == 0,
            )
        )
    return rows


@pytest.fixture()
def disagreement_catalog():
    """Five plans where the two metrics provably pick different winners.

    The query (no features, private ward, eye level 3) encodes to
    [0]*8 + [1, 1]. "plan-dir" is an exact scalar multiple of it (cosine
    1.0 but distance ~0.94), while "plan-mag" sits closest in space
    (distance 1/3) at a slightly worse angle. The rest are chaff.
    """
    plans = [
        make_plan(
            "plan-dir", hmo_id="hmo-01", ward_type=WardType.GENERAL, eye_care_limit_level=1
        ),
        make_plan(
            "plan-mag", hmo_id="hmo-02", ward_type=WardType.PRIVATE, eye_care_limit_level=2
        ),
        make_plan(
            "plan-ch1",
            hmo_id="hmo-03",
            family_planning=True,
            mental_health=True,
            ward_type=WardType.GENERAL,
            eye_care_limit_level=0,
        ),
        make_plan(
            "plan-ch2", hmo_id="hmo-04", ward_type=WardType.SEMI_PRIVATE, eye_care_limit_level=0
        ),
        make_plan(
            "plan-ch3",
            hmo_id="hmo-05",
            gym_membership=True,
            dental_care=True,
            ward_type=WardType.GENERAL,
            eye_care_limit_level=0,
        ),
    ]
    preference = UserPreference.from_flags(
        "lagos", 4, ward_preference=WardType.PRIVATE, eye_care_preference=3
    )
    return plans, preference


@pytest.fixture()
def catalog_csv(tmp_path, ten_plan_catalog):
    from plansage.catalog import write_catalog

    path = tmp_path / "catalog.csv"
    write_catalog(ten_plan_catalog, path)
    return path
