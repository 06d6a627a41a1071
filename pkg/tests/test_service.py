from __future__ import annotations

import json
import shutil
from pathlib import Path

import pytest
from fastapi.testclient import TestClient

from plansage.catalog import write_catalog, write_ratings
from plansage.errors import ConfigError
from plansage.service import ADMIN_TOKEN_ENV, ServiceConfig, create_app

GOLDEN_DIR = Path(__file__).parent / "golden"

VALID_BODY = {
    "preference": {
        "location": "lagos",
        "max_tier": 1,
        "desired": {
            "family_planning": False,
            "mental_health": False,
            "dental_care": True,
            "telemedicine": True,
            "cashback_benefit": True,
            "anc_delivery": False,
            "gym_membership": False,
            "annual_screening": False,
        },
    },
    "metric": "cosine",
}


@pytest.fixture()
def sample_config(tmp_path, sample_paths) -> ServiceConfig:
    catalog, ratings = sample_paths
    return ServiceConfig(catalog_path=str(catalog), ratings_path=str(ratings))


@pytest.fixture()
def client(sample_config) -> TestClient:
    return TestClient(create_app(sample_config))


@pytest.fixture()
def reloadable(tmp_path, sample_plans, sample_ratings):
    """App whose data files live in tmp so tests can rewrite them."""
    catalog_path = tmp_path / "catalog.csv"
    ratings_path = tmp_path / "ratings.csv"
    write_catalog(sample_plans, catalog_path)
    write_ratings(sample_ratings, ratings_path)
    config = ServiceConfig(catalog_path=str(catalog_path), ratings_path=str(ratings_path))
    return TestClient(create_app(config)), catalog_path, ratings_path


def post_recommend(client: TestClient, body: dict):
    return client.post("/api/v1/recommend", json=body)


class TestRecommendEndpoint:
    def test_valid_request_returns_three(self, client):
        response = post_recommend(client, VALID_BODY)
        assert response.status_code == 200
        payload = response.json()
        assert payload["code"] == "ok"
        assert payload["metric"] == "cosine"
        assert payload["schema_id"].startswith("fv10.v1+")
        assert len(payload["recommendations"]) == 3
        assert [r["rank"] for r in payload["recommendations"]] == [1, 2, 3]
        assert all(r["premium_tier"] == 1 for r in payload["recommendations"])

    def test_bad_tier_names_the_field(self, client):
        body = json.loads(json.dumps(VALID_BODY))
        body["preference"]["max_tier"] = 0
        response = post_recommend(client, body)
        assert response.status_code == 400
        payload = response.json()
        assert payload["code"] == "validation_error"
        assert any(e["field"] == "preference.max_tier" for e in payload["errors"])

    def test_bad_enum_names_the_field(self, client):
        body = json.loads(json.dumps(VALID_BODY))
        body["preference"]["location"] = "abuja"
        response = post_recommend(client, body)
        assert response.status_code == 400
        assert any(
            e["field"] == "preference.location" for e in response.json()["errors"]
        )

    def test_unknown_desired_feature_rejected(self, client):
        body = json.loads(json.dumps(VALID_BODY))
        body["preference"]["desired"]["time_travel"] = True
        response = post_recommend(client, body)
        assert response.status_code == 400
        assert any("time_travel" in e["field"] for e in response.json()["errors"])

    def test_missing_desired_answer_rejected(self, client):
        body = json.loads(json.dumps(VALID_BODY))
        del body["preference"]["desired"]["gym_membership"]
        response = post_recommend(client, body)
        assert response.status_code == 400
        assert any(
            e["field"] == "preference.desired.gym_membership"
            for e in response.json()["errors"]
        )

    def test_empty_preference_is_422(self, client):
        body = json.loads(json.dumps(VALID_BODY))
        body["preference"]["desired"] = {k: False for k in body["preference"]["desired"]}
        response = post_recommend(client, body)
        assert response.status_code == 422
        assert response.json()["code"] == "empty_preference"

    def test_empty_preference_legal_under_knn(self, client):
        body = json.loads(json.dumps(VALID_BODY))
        body["preference"]["desired"] = {k: False for k in body["preference"]["desired"]}
        body["metric"] = "knn"
        response = post_recommend(client, body)
        assert response.status_code == 200
        assert len(response.json()["recommendations"]) == 3

    def test_no_candidates_is_valid_answer(self, tmp_path, ten_plan_catalog):
        # fixture has no nationwide tier-1 plan beyond plan-001; drop it
        plans = [p for p in ten_plan_catalog if p.plan_id != "plan-001"]
        catalog_path = tmp_path / "catalog.csv"
        write_catalog(plans, catalog_path)
        app_client = TestClient(create_app(ServiceConfig(catalog_path=str(catalog_path))))
        body = json.loads(json.dumps(VALID_BODY))
        body["preference"]["location"] = "nationwide"
        response = post_recommend(app_client, body)
        assert response.status_code == 200
        payload = response.json()
        assert payload["code"] == "no_candidates"
        assert payload["recommendations"] == []

    def test_wrong_content_type_is_415(self, client):
        response = client.post(
            "/api/v1/recommend", content="location=lagos", headers={"content-type": "text/plain"}
        )
        assert response.status_code == 415

    def test_malformed_json_is_400(self, client):
        response = client.post(
            "/api/v1/recommend",
            content="{not json",
            headers={"content-type": "application/json"},
        )
        assert response.status_code == 400
        assert response.json()["code"] == "malformed_json"

    def test_unknown_top_level_key_rejected(self, client):
        body = json.loads(json.dumps(VALID_BODY))
        body["turbo"] = True
        response = post_recommend(client, body)
        assert response.status_code == 400


class TestPlansEndpoint:
    def test_unfiltered_listing(self, client):
        response = client.get("/api/v1/plans")
        assert response.status_code == 200
        plans = response.json()
        assert len(plans) == 148
        ids = [p["plan_id"] for p in plans]
        assert ids == sorted(ids)
        assert set(plans[0]) == {
            "plan_id",
            "hmo_id",
            "hmo_name",
            "plan_name",
            "premium_tier",
            "coverage_region",
            "family_planning",
            "mental_health",
            "dental_care",
            "telemedicine",
            "cashback_benefit",
            "anc_delivery",
            "gym_membership",
            "annual_screening",
            "ward_type",
            "eye_care_limit_level",
        }

    def test_tier_filter(self, client, sample_plans):
        response = client.get("/api/v1/plans", params={"tier": "2"})
        expected = sum(1 for p in sample_plans if p.premium_tier == 2)
        assert len(response.json()) == expected

    def test_combined_filter_can_be_empty(self, tmp_path, ten_plan_catalog):
        no_tier4_lagos = [
            p
            for p in ten_plan_catalog
            if not (p.premium_tier == 4 and p.coverage_region.value == "lagos")
        ]
        catalog_path = tmp_path / "catalog.csv"
        write_catalog(no_tier4_lagos, catalog_path)
        app_client = TestClient(create_app(ServiceConfig(catalog_path=str(catalog_path))))
        response = app_client.get("/api/v1/plans", params={"tier": "4", "region": "lagos"})
        assert response.status_code == 200
        assert response.json() == []

    def test_unknown_tier_value_is_400(self, client):
        assert client.get("/api/v1/plans", params={"tier": "9"}).status_code == 400

    def test_unknown_region_value_is_400(self, client):
        assert client.get("/api/v1/plans", params={"region": "mars"}).status_code == 400

    def test_unknown_filter_name_is_400(self, client):
        assert client.get("/api/v1/plans", params={"price": "low"}).status_code == 400


class TestHealthEndpoint:
    def test_healthy_after_preload(self, client):
        response = client.get("/api/v1/health")
        assert response.status_code == 200
        payload = response.json()
        assert payload["status"] == "ok"
        assert payload["catalog_size"] == 148
        assert payload["schema_id"].startswith("fv10.v1+")

    def test_unavailable_before_load(self, sample_config):
        app_client = TestClient(create_app(sample_config, preload=False))
        response = app_client.get("/api/v1/health")
        assert response.status_code == 503
        assert response.json()["status"] == "unavailable"


class TestReloadEndpoint:
    def test_missing_token_is_401(self, reloadable, monkeypatch):
        app_client, _, _ = reloadable
        monkeypatch.setenv(ADMIN_TOKEN_ENV, "sekrit")
        assert app_client.post("/api/v1/admin/reload").status_code == 401

    def test_bad_token_is_401_and_catalog_unchanged(self, reloadable, monkeypatch):
        app_client, _, _ = reloadable
        monkeypatch.setenv(ADMIN_TOKEN_ENV, "sekrit")
        response = app_client.post(
            "/api/v1/admin/reload", headers={"x-admin-token": "wrong"}
        )
        assert response.status_code == 401
        assert app_client.get("/api/v1/health").json()["catalog_size"] == 148

    def test_unconfigured_token_disables_reload(self, reloadable, monkeypatch):
        app_client, _, _ = reloadable
        monkeypatch.delenv(ADMIN_TOKEN_ENV, raising=False)
        response = app_client.post(
            "/api/v1/admin/reload", headers={"x-admin-token": "anything"}
        )
        assert response.status_code == 401

    def test_successful_reload_changes_schema_id(
        self, reloadable, monkeypatch, sample_plans
    ):
        app_client, catalog_path, _ = reloadable
        monkeypatch.setenv(ADMIN_TOKEN_ENV, "sekrit")
        before = app_client.get("/api/v1/health").json()

        from conftest import make_plan

        bigger = list(sample_plans) + [
            make_plan("plan-149", hmo_id="hmo-01"),
            make_plan("plan-150", hmo_id="hmo-02"),
        ]
        write_catalog(bigger, catalog_path)
        response = app_client.post(
            "/api/v1/admin/reload", headers={"x-admin-token": "sekrit"}
        )
        assert response.status_code == 200
        after = app_client.get("/api/v1/health").json()
        assert after["catalog_size"] == 150
        assert after["schema_id"] != before["schema_id"]

    def test_corrupt_file_keeps_old_snapshot(self, reloadable, monkeypatch):
        app_client, catalog_path, _ = reloadable
        monkeypatch.setenv(ADMIN_TOKEN_ENV, "sekrit")
        catalog_path.write_text("plan_id,oops\nx,y\n", encoding="utf-8")
        response = app_client.post(
            "/api/v1/admin/reload", headers={"x-admin-token": "sekrit"}
        )
        assert response.status_code == 422
        # old snapshot still serves
        assert app_client.get("/api/v1/health").json()["catalog_size"] == 148
        assert post_recommend(app_client, VALID_BODY).status_code == 200

    def test_invalid_rows_reported_in_422(self, reloadable, monkeypatch, sample_plans):
        app_client, catalog_path, _ = reloadable
        monkeypatch.setenv(ADMIN_TOKEN_ENV, "sekrit")
        text = catalog_path.read_text(encoding="utf-8").replace(
            "plan-001,hmo-01,Everwell Health,Classic Individual,2",
            "plan-001,hmo-01,Everwell Health,Classic Individual,9",
        )
        catalog_path.write_text(text, encoding="utf-8")
        response = app_client.post(
            "/api/v1/admin/reload", headers={"x-admin-token": "sekrit"}
        )
        assert response.status_code == 422
        assert any("premium_tier" in e for e in response.json()["errors"])


class TestServiceConfig:
    def test_from_file_resolves_relative_paths(self, tmp_path, sample_paths):
        catalog, ratings = sample_paths
        shutil.copy(catalog, tmp_path / "catalog.csv")
        shutil.copy(ratings, tmp_path / "ratings.csv")
        config_path = tmp_path / "config.json"
        config_path.write_text(
            json.dumps(
                {
                    "catalog_path": "catalog.csv",
                    "ratings_path": "ratings.csv",
                    "listen_address": "127.0.0.1:9100",
                    "default_metric": "knn",
                    "cors_allowed_origins": ["http://localhost:5173"],
                }
            ),
            encoding="utf-8",
        )
        config = ServiceConfig.from_file(config_path)
        assert config.port == 9100
        assert Path(config.catalog_path).is_absolute() or config.catalog_path.startswith(
            str(tmp_path)
        )
        assert config.default_metric.value == "knn"

    @pytest.mark.parametrize(
        "mutation",
        [
            {"listen_address": "127.0.0.1:0"},
            {"listen_address": "127.0.0.1:70000"},
            {"listen_address": "no-port-here"},
            {"default_metric": "manhattan"},
            {"catalog_path": "missing.csv"},
            {"cors_allowed_origins": "not-a-list"},
            {"surprise": True},
        ],
    )
    def test_invalid_configs_rejected(self, tmp_path, sample_paths, mutation):
        base = {
            "catalog_path": str(sample_paths[0]),
            "ratings_path": str(sample_paths[1]),
        }
        base.update(mutation)
        config_path = tmp_path / "config.json"
        config_path.write_text(json.dumps(base), encoding="utf-8")
        with pytest.raises(ConfigError):
            ServiceConfig.from_file(config_path)

    def test_missing_config_file_rejected(self, tmp_path):
        with pytest.raises(ConfigError):
            ServiceConfig.from_file(tmp_path / "absent.json")

    def test_cors_headers_when_configured(self, sample_paths):
        config = ServiceConfig(
            catalog_path=str(sample_paths[0]),
            ratings_path=str(sample_paths[1]),
            cors_allowed_origins=("http://localhost:5173",),
        )
        app_client = TestClient(create_app(config))
        response = app_client.get(
            "/api/v1/health", headers={"origin": "http://localhost:5173"}
        )
        assert response.headers.get("access-control-allow-origin") == "http://localhost:5173"


class TestWireGolden:
    """Pin the exact response bytes for fixed inputs."""

    def golden(self, name: str) -> bytes:
        return (GOLDEN_DIR / name).read_bytes()

    def test_recommend_bytes(self, ten_plan_catalog, tmp_path):
        catalog_path = tmp_path / "catalog.csv"
        ratings_path = tmp_path / "ratings.csv"
        write_catalog(ten_plan_catalog, catalog_path)
        from plansage.catalog import RatingRecord

        write_ratings(
            {
                "hmo-02": RatingRecord("hmo-02", 4.5, 11),
                "hmo-04": RatingRecord("hmo-04", 3.9, 40),
                "hmo-06": RatingRecord("hmo-06", 4.1, 23),
            },
            ratings_path,
        )
        app_client = TestClient(
            create_app(
                ServiceConfig(catalog_path=str(catalog_path), ratings_path=str(ratings_path))
            )
        )
        body = json.loads(json.dumps(VALID_BODY))
        body["preference"]["max_tier"] = 4
        response = app_client.post(
            "/api/v1/recommend",
            content=json.dumps(body),
            headers={"content-type": "application/json"},
        )
        assert response.status_code == 200
        assert response.content == self.golden("recommend_response.json")

    def test_plans_bytes(self, ten_plan_catalog, tmp_path):
        catalog_path = tmp_path / "catalog.csv"
        write_catalog(ten_plan_catalog, catalog_path)
        app_client = TestClient(create_app(ServiceConfig(catalog_path=str(catalog_path))))
        response = app_client.get("/api/v1/plans", params={"tier": "1"})
        assert response.status_code == 200
        assert response.content == self.golden("plans_response.json")
