"""Iwasawa lambda of imaginary quadratic fields at p = 3 via Stickelberger series."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import jacobi_symbol

from ifl.iwasawa import (
    DEFAULT_TWIST,
    SCHEDULE,
    LambdaError,
    kronecker,
    lambda_invariant,
    stickelberger_series,
    validate_twist,
)


def kron_oracle(D, a):
    out = 1
    while a % 2 == 0:
        a //= 2
        if D % 2 == 0:
            return 0
        out *= 1 if D % 8 in (1, 7) else -1
    return out * (jacobi_symbol(D % a, a) if a > 1 else 1)


@given(st.integers(-5000, 5000), st.integers(1, 5000))
@settings(max_examples=2000, deadline=None)
def test_kronecker_against_jacobi_oracle(D, a):
    assert kronecker(D, a) == kron_oracle(D, a)


def test_kronecker_negative_argument():
    # (D / -1) = sign(D)
    assert kronecker(-211, -1) == -1
    assert kronecker(5, -1) == 1
    assert kronecker(-211, -7) == -kronecker(-211, 7)


@pytest.mark.parametrize("D, lam", [(-211, 2), (-1096, 4)])
def test_lambda_values(D, lam):
    res = lambda_invariant(D, detail=True)
    assert res.lam == lam
    # two consecutive agreeing readings
    assert res.steps[-1][2] == res.steps[-2][2] == lam
    assert res.twist == DEFAULT_TWIST


def test_reading_at_level_3_precision_10():
    assert stickelberger_series(-211, 3, 3, 10).lambda_reading() == 2


@pytest.mark.parametrize("D, lam", [(-211, 2), (-1096, 4)])
def test_readings_stable_along_the_schedule(D, lam):
    readings = [stickelberger_series(D, 3, n, N).lambda_reading() for n, N in SCHEDULE[1:]]
    assert readings == [lam] * len(readings)


def test_coefficients_before_lambda_are_divisible_by_p():
    s = stickelberger_series(-1096, 3, 4, 12)
    vals = s.valuations()
    assert all(v is None or v >= 1 for v in vals[:4])
    assert vals[4] == 0


def test_split_and_positive_rejected():
    with pytest.raises(ValueError):
        stickelberger_series(-23, 3)  # -23 = 1 mod 3: 3 splits
    with pytest.raises(ValueError):
        stickelberger_series(5, 3)
    with pytest.raises(ValueError):
        stickelberger_series(-211, 3, twist="c")


def test_twist_validation_pins_default():
    assert validate_twist() == DEFAULT_TWIST == "a"


def test_other_twist_gives_no_reading():
    with pytest.raises(LambdaError):
        lambda_invariant(-211, twist="b")


def test_failure_is_an_error_not_a_value():
    with pytest.raises(LambdaError, match="mu-obstruction or precision failure"):
        lambda_invariant(-211, twist="b", schedule=SCHEDULE[:2])
