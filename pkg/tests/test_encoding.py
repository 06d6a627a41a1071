from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from plansage.catalog import SERVICE_FEATURES, UserPreference, WardType
from plansage.encoding import (
    DEFAULT_SCHEMA,
    SLOT_NAMES,
    VECTOR_DIM,
    EncodingSchema,
    PlanEncoder,
    encode_plan,
    encode_preference,
)

from conftest import make_plan
from test_catalog import plan_records

THIRD = 1.0 / 3.0
TWO_THIRDS = 2.0 / 3.0


class TestEncodePlan:
    def test_all_false_general_ward_no_eye_care(self):
        vec = encode_plan(make_plan())
        assert vec.values == (0.0,) * 8 + (THIRD, 0.0)

    def test_all_true_private_ward_max_eye_care(self):
        plan = make_plan(
            ward_type=WardType.PRIVATE,
            eye_care_limit_level=3,
            **{name: True for name in SERVICE_FEATURES},
        )
        assert encode_plan(plan).values == (1.0,) * VECTOR_DIM

    def test_three_benefits_semi_private(self):
        # Hand-derived from the slot mapping: three 1.0 boolean slots,
        # ward slot 2/3, everything else 0.
        plan = make_plan(
            dental_care=True,
            telemedicine=True,
            cashback_benefit=True,
            ward_type=WardType.SEMI_PRIVATE,
        )
        assert encode_plan(plan).values == (
            0.0,
            0.0,
            1.0,
            1.0,
            1.0,
            0.0,
            0.0,
            0.0,
            TWO_THIRDS,
            0.0,
        )

    def test_schema_binding(self):
        schema = EncodingSchema(schema_id="fv10.v1+test")
        assert encode_plan(make_plan(), schema).schema_id == "fv10.v1+test"
        assert encode_plan(make_plan()).schema_id == DEFAULT_SCHEMA.schema_id

    @given(plan=plan_records)
    @settings(max_examples=100, deadline=None)
    def test_components_bounded_and_dimension_fixed(self, plan):
        vec = encode_plan(plan)
        assert len(vec.values) == VECTOR_DIM
        assert all(0.0 <= v <= 1.0 for v in vec.values)

    @given(a=plan_records, b=plan_records)
    @settings(max_examples=100, deadline=None)
    def test_injective_on_encoded_fields(self, a, b):
        encoded_fields = (*SERVICE_FEATURES, "ward_type", "eye_care_limit_level")
        differs = any(getattr(a, f) != getattr(b, f) for f in encoded_fields)
        if differs:
            assert encode_plan(a).values != encode_plan(b).values
        else:
            assert encode_plan(a).values == encode_plan(b).values

    @given(plan=plan_records)
    @settings(max_examples=50, deadline=None)
    def test_deterministic(self, plan):
        assert encode_plan(plan) == encode_plan(plan)


class TestEncodePreference:
    def test_all_no_without_optionals_is_zero_vector(self):
        pref = UserPreference.from_flags("lagos", 1)
        vec = encode_preference(pref)
        assert vec.values == (0.0,) * VECTOR_DIM
        assert vec.is_zero()

    def test_three_selected_benefits(self):
        pref = UserPreference.from_flags(
            "lagos", 1, dental_care=True, telemedicine=True, cashback_benefit=True
        )
        assert encode_preference(pref).values == (
            0.0,
            0.0,
            1.0,
            1.0,
            1.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
        )

    def test_ward_preference_only(self):
        pref = UserPreference.from_flags("lagos", 1, ward_preference=WardType.PRIVATE)
        assert encode_preference(pref).values == (0.0,) * 8 + (1.0, 0.0)

    def test_eye_care_preference_levels(self):
        for level in (0, 1, 2, 3):
            pref = UserPreference.from_flags("lagos", 1, eye_care_preference=level)
            assert encode_preference(pref).values[9] == pytest.approx(level / 3.0)

    def test_same_layout_as_plans(self):
        # A preference wanting everything matches the all-true plan exactly.
        pref = UserPreference.from_flags(
            "lagos",
            4,
            ward_preference=WardType.PRIVATE,
            eye_care_preference=3,
            **{name: True for name in SERVICE_FEATURES},
        )
        plan = make_plan(
            ward_type=WardType.PRIVATE,
            eye_care_limit_level=3,
            **{name: True for name in SERVICE_FEATURES},
        )
        assert encode_preference(pref).values == encode_plan(plan).values


class TestPlanEncoder:
    def test_transform_shape_and_values(self, sample_plans):
        matrix = PlanEncoder().fit(sample_plans).transform(sample_plans)
        assert matrix.shape == (148, VECTOR_DIM)
        assert matrix.dtype == np.float64
        assert matrix.min() >= 0.0 and matrix.max() <= 1.0
        first = encode_plan(sample_plans[0]).values
        np.testing.assert_array_equal(matrix[0], np.asarray(first))

    def test_requires_fit(self):
        with pytest.raises(NotFittedError):
            PlanEncoder().transform([make_plan()])

    def test_sklearn_clone_and_params(self):
        schema = EncodingSchema(schema_id="fv10.v1+clone")
        encoder = PlanEncoder(schema=schema)
        assert encoder.get_params() == {"schema": schema}
        cloned = clone(encoder)
        assert cloned.get_params() == {"schema": schema}

    def test_feature_names_out(self):
        encoder = PlanEncoder().fit([])
        assert tuple(encoder.get_feature_names_out()) == SLOT_NAMES
