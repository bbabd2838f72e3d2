"""Decomposition of rational primes in a maximal order.

Dedekind's criterion when ``p`` does not divide the index of ``Z[theta]``;
otherwise the residue algebra ``O / rad(pO)`` is split into fields by
idempotents (Buchmann-Lenstra style).
"""

from __future__ import annotations

import random

from sympy import ZZ
from sympy.polys.galoistools import gf_factor_sqf, gf_gcdex, gf_mul, gf_rem

from ..kernel.intmat import hnf_mod
from ..kernel.modlin import kernel_mod_p
from .field import _mul_coords
from .ideal import Ideal, PrimeIdeal

__all__ = ["prime_decomposition", "primes_above"]


def prime_decomposition(K, p, method="auto"):
    """List of ``(PrimeIdeal, e, f)`` above ``p``; cached on the field."""
    cache = K.__dict__.setdefault("_prime_cache", {})
    key = (p, method)
    if key not in cache:
        if method == "dedekind" or (method == "auto" and K.index % p):
            res = _dedekind(K, p)
        else:
            res = _split_algebra(K, p)
        res.sort(key=lambda t: (t[2], t[1], t[0].hnf))
        for i, (P, _, _) in enumerate(res):
            P.label = (p, i)
        cache[key] = res
    return cache[key]


def primes_above(K, p):
    return [P for P, _, _ in prime_decomposition(K, p)]


def _dedekind(K, p):
    if K.index % p == 0:
        raise ValueError(f"{p} divides the index; Dedekind's criterion does not apply")
    out = []
    for g, m in K.poly.factor_mod(p):
        gl = [int(c) for c in reversed(g)]
        pi = K.from_power_basis(gl)
        pic = [int(c) for c in pi.coords]
        n = K.n
        P0 = Ideal.from_generators(K, [[p] + [0] * (n - 1), pic], p)
        f = len(g) - 1
        P = PrimeIdeal(K, P0.hnf, p, m, f, pi=pic)
        out.append((P, m, f))
    return out


def _radical_basis(K, p):
    n = K.n
    q = p
    while q < n:
        q *= p
    cols = []
    for i in range(n):
        e = [0] * n
        e[i] = 1
        cols.append(_powmod(K.table, e, q, p))
    F = [[cols[j][r] for j in range(n)] for r in range(n)]
    return kernel_mod_p(F, p)


def _powmod(table, x, e, p):
    n = len(x)
    res = [1] + [0] * (n - 1)
    b = [v % p for v in x]
    while e:
        if e & 1:
            res = [v % p for v in _mul_coords(table, res, b)]
        b = [v % p for v in _mul_coords(table, b, b)]
        e >>= 1
    return res


def _mulp(K, x, y, p):
    return [v % p for v in _mul_coords(K.table, x, y)]


def _minpoly_mod(K, x, unit, R, p):
    """Minimal polynomial (high-first, monic) of x in the algebra with identity ``unit`` modulo span(R)."""
    powers = [list(unit)]
    while True:
        nxt = _mulp(K, powers[-1], x, p)
        powers.append(nxt)
        cols = list(R) + powers
        M = [[c[r] for c in cols] for r in range(K.n)]
        ker = kernel_mod_p(M, p)
        for v in ker:
            lead = v[-1]
            if lead % p:
                inv = pow(lead, -1, p)
                coeffs = [c * inv % p for c in v[len(R):]]
                # coeffs low-first of degree len(powers)-1
                return list(reversed(coeffs)), powers
        if len(powers) > K.n + 1:
            raise ArithmeticError("minimal polynomial search failed")


def _eval_poly_at(K, poly_high, powers, p):
    n = K.n
    out = [0] * n
    deg = len(poly_high) - 1
    for i, c in enumerate(poly_high):
        if c:
            k = deg - i
            out = [(a + c * b) % p for a, b in zip(out, powers[k])]
    return out


def _span_rank(vectors, p, n):
    if not vectors:
        return 0
    M = [[v[r] for v in vectors] for r in range(n)]
    return len(vectors) - len(kernel_mod_p(M, p))


def _split_algebra(K, p):
    n = K.n
    R = _radical_basis(K, p)
    one = [1] + [0] * (n - 1)
    rng = random.Random(p * 7919 + n)
    basis = [[int(i == j) for j in range(n)] for i in range(n)]
    dim_total = n - len(R)
    # components: list of idempotents (lifted, mod p)
    todo = [one]
    fields = []
    tries = 0
    while todo:
        e = todo.pop()
        comp = [_mulp(K, e, b, p) for b in basis]
        dim = _span_rank(list(R) + comp, p, n) - len(R)
        split = False
        for _ in range(60):
            tries += 1
            x = [rng.randrange(p) for _ in range(n)]
            x = _mulp(K, e, x, p)
            mu, powers = _minpoly_mod(K, x, e, R, p)
            if len(mu) - 1 == dim:
                facs = gf_factor_sqf(mu, p, ZZ)[1]
                if len(facs) == 1:
                    fields.append((e, dim))
                    split = True
                    break
            facs = gf_factor_sqf(mu, p, ZZ)[1]
            if len(facs) > 1:
                for i, fi in enumerate(facs):
                    rest = [1]
                    for j, fj in enumerate(facs):
                        if j != i:
                            rest = gf_mul(rest, fj, p, ZZ)
                    # e_i(t) = rest * (rest^{-1} mod fi)
                    s, t, g = gf_gcdex(rest, fi, p, ZZ)
                    ei = gf_rem(gf_mul(s, rest, p, ZZ), mu, p, ZZ)
                    ei_vec = _eval_poly_at(K, [int(c) for c in ei], powers, p)
                    todo.append(ei_vec)
                split = True
                break
        if not split:
            raise ArithmeticError(f"could not split residue algebra at {p}")
    assert sum(d for _, d in fields) == dim_total
    out = []
    for e, f in fields:
        # P = { x : e*x in R }
        Me = K.mulmat(e)
        cols = [[Me[r][j] % p for r in range(n)] for j in range(n)] + [[(-v) % p for v in r] for r in R]
        M = [[c[r] for c in cols] for r in range(n)]
        ker = kernel_mod_p(M, p)
        gens = [v[:n] for v in ker] + [[p * int(i == j) for i in range(n)] for j in range(n)]
        H = hnf_mod([[g[r] for g in gens] for r in range(n)], p)
        P = PrimeIdeal(K, H, p, 1, f)
        P.e = P._val_int([p] + [0] * (n - 1))
        out.append((P, P.e, f))
    assert sum(e * f for _, e, f in out) == n, "decomposition does not add up"
    return out
