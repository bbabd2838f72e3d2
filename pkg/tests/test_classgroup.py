"""Class groups: reduced forms, the relation method, Sylow parts and D(F_n)."""

import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import factorint, jacobi_symbol

from conftest import cubic_fields, field_of, layer_class_group, quadratic_field, tower_layer
from ifl.classgroup import (
    AbelianGroupSNF,
    d_order_by_principality,
    d_subgroup_order,
    general_class_group,
    group_from_relations,
    ideal_class_order,
    quad_class_group,
    subgroup_order,
    sylow_p,
)
from ifl.cubic import is_fundamental, layer_field
from ifl.kernel.intmat import hnf, snf_invariants
from ifl.nf.ideal import ideal_multiply
from ifl.nf.primes import prime_decomposition
from ifl.nf.principal import NOT_PRINCIPAL, PRINCIPAL, is_principal
from ifl.units import fundamental_unit

EXAMPLE_F = (1, -1, -39, -109)


# -- independent oracles -----------------------------------------------------
def kron_oracle(D, a):
    """Kronecker symbol (D/a), a > 0, from the Jacobi symbol and (D/2)."""
    out = 1
    while a % 2 == 0:
        a //= 2
        if D % 2 == 0:
            return 0
        out *= 1 if D % 8 in (1, 7) else -1
    return out * (jacobi_symbol(D % a, a) if a > 1 else 1)


def analytic_class_number(D):
    """h = -(w / 2|D|) * sum a chi(a) for imaginary quadratic D."""
    w = {-3: 6, -4: 4}.get(D, 2)
    s = sum(a * kron_oracle(D, a) for a in range(1, -D))
    h = Fraction(-w * s, 2 * -D)
    assert h.denominator == 1
    return int(h)


def genus_two_rank(D):
    return len(factorint(-D)) - 1


# -- quadratic ----------------------------------------------------------------
def test_quad_against_analytic_formula_and_genus_theory():
    for D in range(-3, -2001, -1):
        if not is_fundamental(D):
            continue
        G = quad_class_group(D)
        assert G.order == analytic_class_number(D), D
        assert G.p_rank(2) == genus_two_rank(D), D
        assert all(b % a == 0 for a, b in zip(G.invariants, G.invariants[1:]))


@pytest.mark.parametrize(
    "D, sylow3",
    [(-211, [3]), (-39736, [3, 3]), (-1096, [3]), (-4, []), (-3, []), (-3299, [3, 9])],
)
def test_quad_sylow3(D, sylow3):
    assert sylow_p(quad_class_group(D), 3).invariants == sylow3


def test_quad_known_structures():
    assert quad_class_group(-420).invariants == [2, 2, 2]
    assert quad_class_group(-4).invariants == []
    assert quad_class_group(-23).invariants == [3]


def test_quad_rejects_bad_input():
    with pytest.raises(ValueError):
        quad_class_group(-9934)
    with pytest.raises(ValueError):
        quad_class_group(5)


def test_quad_versus_general_up_to_500():
    for D in range(-3, -501, -1):
        if not is_fundamental(D):
            continue
        G = general_class_group(quadratic_field(D))
        assert G.certification.startswith("minkowski")
        assert G.invariants == quad_class_group(D).invariants, D


# -- abelian group plumbing -----------------------------------------------------
def test_sylow_examples():
    assert sylow_p(AbelianGroupSNF([6]), 3).invariants == [3]
    assert sylow_p(AbelianGroupSNF([3, 3]), 3).invariants == [3, 3]
    assert sylow_p(AbelianGroupSNF([12, 36]), 2).invariants == [4, 4]


def brute_force_order(rows, ngens, box):
    """|Z^n / L| by counting cosets of a box of representatives (reduced mod L via HNF)."""
    H = hnf([[r[i] for r in rows] for i in range(ngens)])
    seen = set()
    for v in itertools.product(range(box), repeat=ngens):
        w = list(v)
        for i in range(ngens - 1, -1, -1):
            q = w[i] // H[i][i]
            for r in range(i + 1):
                w[r] -= q * H[r][i]
        seen.add(tuple(w))
    return len(seen)


def test_group_from_relations_against_coset_count():
    rng = random.Random(11)
    done = 0
    while done < 200:
        n = rng.randint(1, 3)
        rows = [[rng.randint(-6, 6) for _ in range(n)] for _ in range(n + rng.randint(0, 2))]
        try:
            G = group_from_relations(rows, n)
        except ArithmeticError:
            continue
        if G.order ** n > 20000:
            continue
        # every reduced representative lies in [0, H_ii) so a box of size |det| covers them
        assert G.order == brute_force_order(rows, n, G.order)
        assert G.invariants == [d for d in snf_invariants([[r[i] for r in rows] for i in range(n)]) if d != 1]
        done += 1


@given(st.lists(st.sampled_from([2, 3, 4, 6, 9, 12]), min_size=1, max_size=3), st.sampled_from([2, 3]))
@settings(max_examples=100, deadline=None)
def test_sylow_order_is_p_part(invs, p):
    invs = sorted(invs)
    rows = [[d * int(i == j) for j in range(len(invs))] for i, d in enumerate(invs)]
    G = group_from_relations(rows, len(invs))
    S = sylow_p(G, p)
    q = 1
    o = G.order
    while o % p == 0:
        o //= p
        q *= p
    assert S.order == q


def test_subgroup_order():
    G = AbelianGroupSNF([3, 9])
    assert subgroup_order(G, [[0, 3]]) == 3
    assert subgroup_order(G, [[1, 1]]) == 9
    assert subgroup_order(G, []) == 1


# -- cubic fields ---------------------------------------------------------------
@pytest.mark.parametrize(
    "high, invs",
    [
        (None, []),
        (EXAMPLE_F, [9]),
        ((1, 0, 34, -8), [3]),
        ((1, 0, -11, -78), [6]),
        ((1, -1, -26, -190), [3]),
    ],
)
def test_cubic_class_groups(high, invs):
    F = cubic_fields(-211)[0] if high is None else field_of(*high)
    G = general_class_group(F)
    assert G.invariants == invs
    assert G.certification == "minkowski-complete"


def test_F211_and_F1096_trivial_sylow3():
    for D in (-211, -1096):
        F = cubic_fields(D)[0]
        assert sylow_p(general_class_group(F), 3).order == 1


def test_example_field_prime_orders_and_d_subgroup():
    F = field_of(*EXAMPLE_F)
    G = general_class_group(F)
    assert sylow_p(G, 3).order == 9
    primes = [P for P, _, _ in prime_decomposition(F, 3)]
    assert [ideal_class_order(P, G) for P in primes] == [3, 3]
    assert d_subgroup_order(layer_field(F, 0), G) == 3


def test_d_of_F211_at_level_zero():
    F = cubic_fields(-211)[0]
    assert d_subgroup_order(layer_field(F, 0), general_class_group(F)) == 1


def test_principal_ideal_has_class_order_one():
    F = field_of(*EXAMPLE_F)
    G = general_class_group(F)
    P = [P for P, _, f in prime_decomposition(F, 3) if f == 1][0]
    P3 = ideal_multiply(ideal_multiply(P, P), P)
    assert ideal_class_order(P3, G) == 1


def test_principality_never_contradicts_class_group():
    for high in [EXAMPLE_F, (1, 0, -11, -78), (1, 0, 34, -8)]:
        F = field_of(*high)
        G = general_class_group(F)
        eps = fundamental_unit(F).element
        for p in (2, 3, 5, 7, 11, 13):
            for P, _, _ in prime_decomposition(F, p):
                r = is_principal(P, unit=eps)
                order = ideal_class_order(P, G)
                assert r.status == (PRINCIPAL if order == 1 else NOT_PRINCIPAL), (high, p)


def test_norm_map_makes_d_cyclic():
    # the product of the primes above 3 (with multiplicity) is (3), so D(F) is generated by one class
    F = field_of(*EXAMPLE_F)
    G = general_class_group(F)
    vecs = [G.dlog(P) for P, _, _ in prime_decomposition(F, 3)]
    assert G.reduce([a + b for a, b in zip(*vecs)]) == [0] * len(G.invariants)


# -- degree nine ---------------------------------------------------------------
@pytest.mark.slow
@pytest.mark.parametrize("D", [-211, -1096])
def test_degree_nine_sylow_and_d(D):
    G = layer_class_group(D)
    assert G.certification.startswith("heuristic")
    assert sylow_p(G, 3).invariants == [3]
    L = tower_layer(D)
    assert d_subgroup_order(L, G) == 3
    for P in L.primes:
        assert ideal_class_order(P, G) == 3


@pytest.mark.slow
@pytest.mark.parametrize("D", [-211, -1096])
def test_degree_nine_d_by_principality(D):
    res = d_order_by_principality(tower_layer(D))
    assert res["order"] == 3
    assert all(g is not None for g in res["p_power_generators"])
