"""Cubic fields from binary cubic forms, and tower layers."""

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import cubic_fields, field_of, tower_layer
from ifl.classgroup.quadratic import quad_class_group
from ifl.cubic import (
    BinaryCubicForm,
    cubic_fields_isomorphic,
    enumerate_cubic_fields,
    hasse_count_check,
    is_fundamental,
    layer_field,
    normalize_discriminant,
)
from ifl.nf.primes import prime_decomposition

EXAMPLE_F = (1, -1, -39, -109)


def test_one_field_for_211():
    fields = cubic_fields(-211)
    assert len(fields) == 1
    assert fields[0].disc == -211


def test_four_fields_for_9934_including_example_field():
    D, _ = normalize_discriminant(-9934)
    assert D == -39736
    fields = cubic_fields(D)
    assert len(fields) == 4
    target = field_of(*EXAMPLE_F)
    assert sum(cubic_fields_isomorphic(F, target) for F in fields) == 1


@pytest.mark.parametrize("D, count", [(-4, 0), (-3, 0), (-23, 1), (-31, 1), (-59, 1), (-3299, 4)])
def test_small_counts(D, count):
    assert len(enumerate_cubic_fields(D)) == count


def test_hasse_check_examples():
    assert hasse_count_check(-211, cubic_fields(-211), quad_class_group(-211))
    assert hasse_count_check(-39736, cubic_fields(-39736), quad_class_group(-39736))
    assert hasse_count_check(-4, [], quad_class_group(-4))
    assert not hasse_count_check(-211, [], quad_class_group(-211))


def test_count_matches_class_group_oracle_up_to_1000():
    # every field's discriminant is recomputed from its own maximal order,
    # and no two fields in one list are isomorphic
    for D in range(-3, -1001, -1):
        if not is_fundamental(D):
            continue
        fields = enumerate_cubic_fields(D)
        assert hasse_count_check(D, fields, quad_class_group(D)), D
        assert all(F.disc == D for F in fields)
        for A, B in itertools.combinations(fields, 2):
            assert not cubic_fields_isomorphic(A, B)


def test_non_fundamental_rejected():
    with pytest.raises(ValueError):
        enumerate_cubic_fields(-9934)
    with pytest.raises(ValueError):
        enumerate_cubic_fields(-16)


def test_normalize_discriminant():
    assert normalize_discriminant(-211) == (-211, None)
    assert normalize_discriminant(-274)[0] == -1096
    assert normalize_discriminant(-1)[0] == -4
    with pytest.raises(ValueError):
        normalize_discriminant(-12)


@given(st.integers(-6, 6), st.integers(-6, 6), st.integers(-6, 6), st.integers(-6, 6))
@settings(max_examples=300, deadline=None)
def test_form_discriminant_matches_polynomial(a, b, c, d):
    form = BinaryCubicForm(a, b, c, d)
    direct = 18 * a * b * c * d - 4 * b ** 3 * d + b * b * c * c - 4 * a * c ** 3 - 27 * a * a * d * d
    assert form.discriminant == direct
    if a == 1:
        assert form.polynomial().discriminant == direct


def test_isomorphic_recognises_transformed_polynomial():
    # x -> x + 1 gives the same field
    K = field_of(*EXAMPLE_F)
    L = field_of(1, 2, -38, -148)
    assert cubic_fields_isomorphic(K, L)
    assert not cubic_fields_isomorphic(K, cubic_fields(-211)[0])


def test_cyclotomic_cubic_disc():
    assert field_of(1, 0, -3, 1).poly.discriminant == 81


def test_layer_zero_is_identity():
    F = cubic_fields(-211)[0]
    L = layer_field(F, 0)
    assert L.field is F and L.level == 0


def test_layer_depth_cap():
    F = cubic_fields(-211)[0]
    with pytest.raises(ValueError):
        layer_field(F, 2)


@pytest.mark.parametrize("D", [-211, -1096])
def test_degree_nine_layer(D):
    L = tower_layer(D)
    F = L.base
    assert L.field.n == 9
    assert len(L.primes) == len(L.base_primes) == 2
    assert sorted((P.e, P.f) for P in L.primes) == sorted((3 * e, f) for _, e, f in prime_decomposition(F, 3))
