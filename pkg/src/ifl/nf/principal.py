"""Principality testing by short-vector search in ideal lattices.

Answers are three-valued.  A generator is always verified exactly (it
lies in the ideal and has the ideal's norm).  "Not principal" is only
returned when the search was provably complete: for unit rank 0, or
unit rank 1 given a unit of infinite order, every generator can be moved
by a unit into an explicit T2-ball, and that ball is enumerated in full.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from ..kernel.intmat import lll_gram
from ..kernel.lattice import short_vectors
from .field import FieldElement
from .ideal import Ideal

__all__ = ["PrincipalityResult", "is_principal", "unit_log", "search_generator"]

PRINCIPAL = "principal"
NOT_PRINCIPAL = "not-principal"
UNKNOWN = "unknown"


@dataclass
class PrincipalityResult:
    status: str
    generator: FieldElement | None = None
    method: str = ""

    def __bool__(self):
        return self.status == PRINCIPAL


def unit_log(field, u):
    """``log|sigma_i(u)|`` for each real embedding and each complex pair (floats)."""
    coords = u.coords if isinstance(u, FieldElement) else u
    return [float(math_log_abs(z)) for z in field.conjugates(coords, 30)]


def math_log_abs(z):
    import mpmath

    return mpmath.log(abs(z))


def _ideal_gram(I, G):
    B = I.basis()
    n = len(B)
    GB = [[sum(G[r][c] * B[j][c] for c in range(n)) for r in range(n)] for j in range(n)]
    return [[sum(GB[j][r] * B[i][r] for r in range(n)) for j in range(n)] for i in range(n)], B


def _combine(B, x):
    n = len(B)
    return [sum(x[k] * B[k][c] for k in range(n)) for c in range(n)]


def _is_generator(I, y):
    K = I.field
    if not any(y):
        return False
    return abs(K.norm_int(y)) == I.norm


def search_generator(I, sweeps=12, per_sweep=60, seed=0):
    """Heuristic search: LLL-reduce the ideal lattice under randomly weighted
    Minkowski forms and test short combinations.  Returns coordinates or None."""
    K = I.field
    n = K.n
    if I.norm == 1:
        return [1] + [0] * (n - 1)
    r1, r2 = K.signature
    rng = random.Random(seed)
    for sweep in range(sweeps):
        if sweep == 0:
            w = None
        else:
            spread = min(1.0 + sweep / 2.0, 6.0)
            w = [math.exp(rng.uniform(-spread, spread)) for _ in range(r1 + r2)]
        G = K.t2_gram(w, scale_bits=60)
        GI, B = _ideal_gram(I, G)
        try:
            _, T = lll_gram(GI)
        except Exception:
            continue
        red = [_combine(B, row) for row in T]
        for y in red:
            if _is_generator(I, y):
                return y
        vs, _ = short_vectors(_gram_of(red, G), _bound_for(red, G, 2), limit=per_sweep, reduce=False)
        for x in vs:
            y = _combine(red, x)
            if _is_generator(I, y):
                return y
    return None


def _gram_of(B, G):
    n = len(B)
    GB = [[sum(G[r][c] * B[j][c] for c in range(n)) for r in range(n)] for j in range(n)]
    return [[sum(GB[j][r] * B[i][r] for r in range(n)) for j in range(n)] for i in range(n)]


def _bound_for(B, G, k):
    g = _gram_of(B, G)
    return k * max(g[i][i] for i in range(len(g)))


def _certified_search(I, unit=None):
    """Complete enumeration; returns (generator or None, complete flag)."""
    K = I.field
    n = K.n
    r1, r2 = K.signature
    rank = r1 + r2 - 1
    mult = [1] * r1 + [2] * r2
    N = I.norm
    if rank == 0:
        tiles = [([1.0] * (r1 + r2), n * N ** (2.0 / n))]
    elif rank == 1 and unit is not None:
        L = unit_log(K, unit)
        Lmax = max(abs(x) for x in L)
        if Lmax < 1e-6:
            return None, False
        # generators normalised by the unit have log vector logN/n + s*L, |s| <= 1/2
        steps = max(1, math.ceil(Lmax))
        width = 1.0 / steps
        tiles = []
        for t in range(steps):
            s0 = -0.5 + (t + 0.5) * width
            w = [math.exp(-s0 * x) for x in L]
            bound = N ** (2.0 / n) * sum(m * math.exp(width * abs(x)) for m, x in zip(mult, L))
            tiles.append((w, bound))
    else:
        return None, False
    for w, C in tiles:
        G, s = K.t2_gram_scaled(w, scale_bits=50, lower=True)
        GI, B = _ideal_gram(I, G)
        vs, complete = short_vectors(GI, int(C * s * 1.001) + 1, limit=200000)
        if not complete:
            return None, False
        for x in vs:
            y = _combine(B, x)
            if _is_generator(I, y):
                return y, True
    return None, True


def is_principal(I, class_group=None, unit=None, certify=True):
    """Three-valued principality test.

    ``class_group`` (a certified :class:`~ifl.classgroup.abelian.AbelianGroupSNF`
    of the field with discrete-log support) decides non-principality
    when search fails.  ``unit`` is any unit of infinite order and enables
    the complete search in unit rank one.
    """
    K = I.field
    if I.norm == 1:
        return PrincipalityResult(PRINCIPAL, K.one(), "unit ideal")
    y = search_generator(I)
    if y is not None:
        return PrincipalityResult(PRINCIPAL, K(y), "lattice search")
    if certify and K.n <= 4:
        y, complete = _certified_search(I, unit)
        if y is not None:
            return PrincipalityResult(PRINCIPAL, K(y), "complete enumeration")
        if complete:
            return PrincipalityResult(NOT_PRINCIPAL, None, "complete enumeration")
    if class_group is not None and class_group.certified:
        v = class_group.dlog(I)
        if v is not None and any(v):
            return PrincipalityResult(NOT_PRINCIPAL, None, "class group discrete log")
    return PrincipalityResult(UNKNOWN, None, "search exhausted")
