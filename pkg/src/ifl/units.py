"""Fundamental units in unit rank one, the invariant e(F), and unit orders
in residue fields.

The unit search sweeps the single logarithmic direction in unit-length
tiles; inside each tile every unit lies in an explicit weighted T2 ball
which is enumerated completely, so the first unit found is fundamental
(up to roots of unity).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field

from sympy import factorint

from .kernel.lattice import short_vectors
from .kernel.padic import PadicNumber, valuation
from .kernel.poly import IntPolynomial
from .nf.field import FieldElement, NumberField, _mul_coords
from .nf.primes import prime_decomposition

__all__ = [
    "FundamentalUnit",
    "PadicEmbedding",
    "fundamental_unit",
    "degree_one_prime_above_p",
    "e_of_F",
    "unit_order_mod_q",
    "UnitRankError",
]


class UnitRankError(ValueError):
    pass


@dataclass
class FundamentalUnit:
    field: NumberField
    element: FieldElement
    regulator: float
    certified: bool = True
    note: str = ""

    def as_dict(self):
        return {
            "coords": [int(c) for c in self.element.coords],
            "power_basis": [str(c) for c in self.element.power_basis()],
            "regulator": self.regulator,
            "certified": self.certified,
            "note": self.note,
        }


def _principal_embedding(K):
    """Index of the embedding used for sign/size normalisation (largest real root)."""
    r1, _ = K.signature
    return r1 - 1 if r1 else 0


def _log_direction(K):
    r1, r2 = K.signature
    mult = [1] * r1 + [2] * r2
    # rank one means exactly two archimedean places
    return [1.0, -mult[0] / mult[1]], mult


def _is_unit(K, y):
    return abs(K.norm_int(y)) == 1


def fundamental_unit(K, max_regulator=400.0):
    """Fundamental unit of a field of unit rank one, normalised so that its
    image under the principal real embedding is > 1."""
    if K.unit_rank != 1:
        raise UnitRankError(f"unit rank is {K.unit_rank}, expected 1")
    cache = K.__dict__.setdefault("_unit_cache", {})
    if "fu" in cache:
        return cache["fu"]
    r1, r2 = K.signature
    v, mult = _log_direction(K)
    cap = sum(m * math.exp(2 * max(x, 0.0)) for m, x in zip(mult, v)) * 1.01
    n = K.n
    r0 = 0.0
    best = None
    while r0 < max_regulator:
        w = [math.exp(-r0 * x) for x in v]
        G, s = K.t2_gram_scaled(w, scale_bits=50, lower=True)
        vs, complete = short_vectors(G, int(cap * s) + 1, limit=500000)
        if not complete:
            raise ArithmeticError("unit search tile too large")
        for y in vs:
            if not _is_unit(K, y):
                continue
            r = abs(math.log(float(abs(K.conjugates(y, 30)[0]))))
            if r < 1e-8:
                continue  # root of unity
            if best is None or r < best[0] - 1e-9:
                best = (r, y)
        if best is not None and best[0] <= r0 + 1.0 + 1e-9:
            break
        r0 += 1.0
    if best is None:
        raise ArithmeticError(f"no unit with regulator below {max_regulator}")
    r, y = best
    u = K(y)
    k = _principal_embedding(K)
    z = complex(K.conjugates(y, 30)[k])
    if abs(z) < 1:
        u = u.inverse()
        z = 1 / z
    if z.real < 0:
        u = -u
    fu = FundamentalUnit(K, u, _regulator(K, u), True, "complete tile sweep")
    cache["fu"] = fu
    return fu


def _regulator(K, u):
    conj = K.conjugates(list(u.coords), 30)
    r1, _ = K.signature
    m = 1 if r1 >= 1 else 2
    return abs(m * math.log(float(abs(conj[0]))))


# ---------------------------------------------------------------------------
@dataclass
class PadicEmbedding:
    """Ring map ``O -> Z/p^N`` attached to a prime with e = f = 1."""

    field: NumberField
    prime: object
    p: int
    prec: int
    root: PadicNumber
    images: list = dc_field(default_factory=list)

    def __call__(self, x):
        """Image of an integral element (FieldElement or coordinate list)."""
        coords = x.coords if isinstance(x, FieldElement) else x
        m = self.p ** self.prec
        tot = 0
        for c, im in zip(coords, self.images):
            if getattr(c, "denominator", 1) != 1:
                raise ValueError("element is not integral")
            tot += int(c) * im
        return PadicNumber(self.p, self.prec, tot % m)

    def refine(self, prec):
        return _embedding_at(self.field, self.prime, prec)


def _embedding_at(K, P, N):
    p = P.p
    H = (P ** N).hnf
    n = K.n
    m = p ** N
    if H[0][0] != m or any(H[i][i] != 1 for i in range(1, n)):
        raise ArithmeticError("prime is not of degree one")
    images = [1] + [(-H[0][j]) % m for j in range(1, n)]
    emb = PadicEmbedding(K, P, p, N, PadicNumber(p, N, 0), images)
    theta = K.gen()
    emb.root = emb(theta.coords)
    assert K.poly.eval_mod(int(emb.root), m) == 0
    if P.pi is not None:
        assert emb(P.pi).valuation >= 1
    return emb


def degree_one_prime_above_p(K, p, N=8, unique=None):
    """PadicEmbedding at a prime with e = f = 1 above ``p``.

    Other primes above ``p`` may ramify.  For p = 3 (the setting of e(F))
    the prime with completion Q_3 must be unique; otherwise the one with
    the smallest root residue is taken.
    """
    if unique is None:
        unique = p == 3
    deg1 = [P for P, e, f in prime_decomposition(K, p) if e == 1 and f == 1]
    if not deg1:
        raise ValueError(f"no prime of degree one above {p}")
    if unique and len(deg1) > 1:
        raise ValueError(f"{len(deg1)} degree-one primes above {p}; the choice is not canonical")
    embs = [_embedding_at(K, P, N) for P in deg1]
    embs.sort(key=lambda e: int(e.root) % p)
    return embs[0]


def e_of_F(F, N=8, max_prec=512, unit=None):
    """Valuation at the degree-one prime above 3 of ``eps^2 - 1``."""
    eps = unit if unit is not None else fundamental_unit(F).element
    x = eps * eps - 1
    while N <= max_prec:
        emb = degree_one_prime_above_p(F, 3, N)
        r = emb(x)
        if not r.is_zero() and r.valuation + 2 <= N:
            return r.valuation
        N *= 2
    raise ArithmeticError("precision exhausted computing e(F)")


# ---------------------------------------------------------------------------
def _pow_mod(table, x, e, q):
    n = len(x)
    res = [1] + [0] * (n - 1)
    b = [c % q for c in x]
    while e:
        if e & 1:
            res = [c % q for c in _mul_coords(table, res, b)]
        b = [c % q for c in _mul_coords(table, b, b)]
        e >>= 1
    return res


def _order_at_prime(K, coords, P):
    q = P.p
    g = q ** P.f - 1
    one = [1] + [0] * (K.n - 1)

    def is_one(y):
        return P.contains([a - b for a, b in zip(y, one)])

    if P.contains(coords):
        raise ValueError("element is not prime to q")
    order = g
    for ell, k in factorint(g).items():
        for _ in range(k):
            if order % ell == 0 and is_one(_pow_mod(K.table, coords, order // ell, q)):
                order //= ell
            else:
                break
    return order


def unit_order_mod_q(K, u, q):
    """Multiplicative order of ``u`` in ``(O/qO)^*`` for unramified ``q``
    (least common multiple over the primes above q)."""
    coords = [int(c) for c in (u.coords if isinstance(u, FieldElement) else u)]
    dec = prime_decomposition(K, q)
    if any(e > 1 for _, e, _ in dec):
        raise ValueError(f"{q} ramifies")
    out = 1
    for P, _, _ in dec:
        out = math.lcm(out, _order_at_prime(K, coords, P))
    return out
