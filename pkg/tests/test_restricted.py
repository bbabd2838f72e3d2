"""S-ramified abelian 3-groups of Q(sqrt 2) and the non-freeness checker."""

from math import lcm

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import field_of
from ifl.restricted import check_thm16, ray_data, x_q_trivial, xs_finite_level

P = 3
K2 = field_of(1, 0, -2)


# -- oracle: arithmetic in Z[sqrt 2] / q ----------------------------------------
def _mul(x, y, q):
    return ((x[0] * y[0] + 2 * x[1] * y[1]) % q, (x[0] * y[1] + x[1] * y[0]) % q)


def _pow(x, e, q):
    out = (1, 0)
    while e:
        if e & 1:
            out = _mul(out, x, q)
        x = _mul(x, x, q)
        e >>= 1
    return out


def _order(x, q):
    k, y = 1, x
    while y != (1, 0):
        y = _mul(y, x, q)
        k += 1
    return k


def _ppart(m):
    out = 1
    while m % P == 0:
        m //= P
        out *= P
    return out


def unit_group_order(q):
    """|(Z[sqrt 2]/q)^*| for odd unramified q."""
    inert = pow(2, (q - 1) // 2, q) == q - 1
    return q * q - 1 if inert else (q - 1) ** 2


def xs_order_oracle(S):
    """|coker(<-1, 1+sqrt2> -> sum_q Sylow_3 (Z[sqrt 2]/q)^*)|."""
    ambient = 1
    image = 1
    for q in S:
        g = unit_group_order(q)
        a = _ppart(g)
        ambient *= a
        proj = _pow((1, 1), g // a, q)  # 3-part of the image of 1 + sqrt 2; -1 projects to 1
        image = lcm(image, _order(proj, q))
    return ambient // image


def is_inert(q):
    return q % 8 in (3, 5)


COMPLIANT = [q for q in range(5, 400) if all(q % r for r in range(2, q)) and is_inert(q) and q % 3 == 2 and q * q % 9 != 1]
TRIVIAL_X = [q for q in COMPLIANT if xs_order_oracle([q]) == 1]
UNRAMIFIED = [q for q in range(5, 200) if all(q % r for r in range(2, q))]


# -- oracle agreement ------------------------------------------------------------------
def test_oracle_values_for_5_11_29():
    assert xs_order_oracle([5]) == 1
    assert xs_order_oracle([11]) == 1
    assert xs_order_oracle([29]) == 3
    assert 5 in TRIVIAL_X and 11 in TRIVIAL_X and 29 not in TRIVIAL_X


@given(st.lists(st.sampled_from(UNRAMIFIED), min_size=0, max_size=4, unique=True))
@settings(max_examples=60, deadline=None)
def test_xs_order_against_oracle(S):
    assert xs_finite_level(K2, S, P).order == xs_order_oracle(S)


# -- worked examples ------------------------------------------------------------------
def test_xs_examples():
    assert xs_finite_level(K2, [5, 11]).invariants == [3]
    assert xs_finite_level(K2, []).invariants == []
    assert xs_finite_level(K2, [5, 11, 29]).invariants == [3, 3]


def test_x_5_trivial():
    assert x_q_trivial(K2, 5) is True


def test_x_11_by_brute_force():
    # 1 + sqrt 2 has order 24 in F_121^*, and 3 | 24, so the unit map onto R(11) = Z/3 is onto
    assert xs_order_oracle([11]) == 1
    assert x_q_trivial(K2, 11) is True


def test_x_11_claimed_false():
    """The claimed value x_q_trivial(11) = False; the brute force above gives True."""
    assert x_q_trivial(K2, 11) is False


def test_x_q_errors():
    with pytest.raises(ValueError, match="not inert"):
        x_q_trivial(K2, 17)
    with pytest.raises(ValueError, match="trivial"):
        x_q_trivial(K2, 3)
    with pytest.raises(ValueError):
        ray_data(K2, [2])


def test_thm16_fires_on_5_29_11():
    rep = check_thm16(K2, [5, 29, 11])
    assert rep.fires
    assert rep.pair == (5, 11)
    assert rep.xs_invariants == [3, 3]
    assert rep.failing == []
    assert all(all(f.values()) for f in rep.flags.values())


def test_claim_x_29_trivial():
    """The triple was offered with X_5 and X_29 both trivial; X_29 is Z/3."""
    rep = check_thm16(K2, [5, 29, 11])
    assert rep.x_trivial[29] is True


def test_thm16_reports_53():
    rep = check_thm16(K2, [5, 11, 53])
    assert not rep.fires
    assert rep.failing == ["53: square_not_one_mod_p2 fails"]
    assert 53 % 9 == 8


def test_thm16_needs_three_primes():
    with pytest.raises(ValueError, match="r >= 3"):
        check_thm16(K2, [5, 11])


def test_thm16_other_failures():
    rep = check_thm16(K2, [5, 11, 7])  # 7 splits and 7 = 1 mod 3
    assert not rep.fires
    assert "7: inert fails" in rep.failing and "7: minus_one_mod_p fails" in rep.failing


def test_thm16_inapplicable_when_p_divides_h():
    # Q(sqrt 79) has class number 3
    rep = check_thm16(field_of(1, 0, -79), [5, 11, 23])
    assert rep.verdict == "inapplicable"


def test_report_renders():
    rep = check_thm16(K2, [5, 29, 11])
    d = rep.as_dict()
    assert d["verdict"] == "fires" and d["pair"] == [5, 11]
    assert "verdict: fires" in rep.table()


# -- properties ------------------------------------------------------------------------
@given(st.lists(st.sampled_from(COMPLIANT), min_size=3, max_size=5, unique=True))
@settings(max_examples=40, deadline=None)
def test_lemma_structure_on_compliant_sets(S):
    rep = check_thm16(K2, S)
    if sum(q in TRIVIAL_X for q in S) >= 2:
        assert rep.fires
        assert xs_finite_level(K2, S).invariants == [3] * (len(S) - 1)
    else:
        assert not rep.fires and "no two primes with trivial X_q" in rep.failing


@given(st.sampled_from(TRIVIAL_X))
@settings(max_examples=20, deadline=None)
def test_trivial_x_means_trivial_single_level(q):
    assert x_q_trivial(K2, q)
    assert xs_finite_level(K2, [q]).order == 1


@given(st.lists(st.sampled_from(COMPLIANT), min_size=1, max_size=3, unique=True))
@settings(max_examples=30, deadline=None)
def test_firing_is_monotone(extra):
    base = [5, 11, 29]
    S = base + [q for q in extra if q not in base]
    assert check_thm16(K2, base).fires
    assert check_thm16(K2, S).fires
