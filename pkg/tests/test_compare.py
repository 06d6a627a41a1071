from __future__ import annotations

import pytest

from plansage.compare import (
    compare_preference,
    generate_preferences,
    jaccard,
    run_comparison,
)
from plansage.recommend import PlanRecommender

import oracle


class TestPreferenceGeneration:
    def test_deterministic_for_fixed_seed(self):
        assert generate_preferences(50, seed=7) == generate_preferences(50, seed=7)

    def test_matches_documented_drawing_procedure(self):
        assert generate_preferences(100, seed=13) == oracle.preference_stream(100, seed=13)

    def test_never_emits_an_all_no_preference(self):
        for pref in generate_preferences(500, seed=3):
            assert any(pref.desired.values())

    def test_covers_both_locations_and_all_tiers(self):
        prefs = generate_preferences(200, seed=5)
        assert {p.location.value for p in prefs} == {"lagos", "nationwide"}
        assert {p.max_tier for p in prefs} == {1, 2, 3, 4}


class TestJaccard:
    def test_both_empty_counts_as_full_agreement(self):
        assert jaccard([], []) == 1.0

    def test_disjoint_sets(self):
        assert jaccard(["a"], ["b"]) == 0.0

    def test_partial_overlap(self):
        assert jaccard(["a", "b", "c"], ["b", "c", "d"]) == pytest.approx(0.5)


class TestRunComparison:
    def test_reproducible_reports(self, sample_plans, sample_ratings):
        first = run_comparison(sample_plans, sample_ratings, trials=40, seed=7)
        second = run_comparison(sample_plans, sample_ratings, trials=40, seed=7)
        assert first == second

    def test_stats_match_brute_force(self, sample_plans, sample_ratings):
        trials, seed = 60, 21
        report = run_comparison(sample_plans, sample_ratings, trials=trials, seed=seed)
        prefs = oracle.preference_stream(trials, seed)
        agree = 0
        jac_total = 0.0
        for pref, outcome in zip(prefs, report.outcomes):
            cos = [row[0] for row in oracle.recommend(sample_plans, sample_ratings, pref, "cosine")]
            knn = [row[0] for row in oracle.recommend(sample_plans, sample_ratings, pref, "knn")]
            assert list(outcome.cosine_top) == cos
            assert list(outcome.knn_top) == knn
            agree += cos[:1] == knn[:1]
            union = set(cos) | set(knn)
            jac_total += (len(set(cos) & set(knn)) / len(union)) if union else 1.0
        assert report.top1_agreement_rate == pytest.approx(agree / trials)
        assert report.mean_top3_jaccard == pytest.approx(jac_total / trials)

    def test_trials_must_be_positive(self, sample_plans, sample_ratings):
        with pytest.raises(ValueError):
            run_comparison(sample_plans, sample_ratings, trials=0, seed=1)


class TestProvableDisagreement:
    def test_metrics_pick_different_winners(self, disagreement_catalog):
        plans, preference = disagreement_catalog
        model = PlanRecommender().fit(plans, {})
        outcome = compare_preference(model, preference)
        assert outcome.cosine_top[0] == "plan-dir"
        assert outcome.knn_top[0] == "plan-mag"
        assert outcome.top1_agree is False

    def test_reported_as_disagreement_in_the_harness(self, disagreement_catalog):
        plans, preference = disagreement_catalog
        report = run_comparison(plans, {}, trials=1, seed=0, preferences=[preference])
        assert report.top1_agreement_rate == 0.0
        assert len(report.disagreements) == 1
        payload = report.to_payload()
        assert payload["disagreement_count"] == 1
        assert payload["outcomes"][0]["top1_agree"] is False
