"""Finite abelian groups in Smith normal form with discrete-log support."""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

from ..kernel.intmat import hnf, smith_form

__all__ = ["AbelianGroupSNF", "group_from_relations", "sylow_p", "subgroup_order"]


def _unimodular_inverse(U):
    """Inverse of an integer unimodular matrix (exact)."""
    from fractions import Fraction

    n = len(U)
    A = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(U)]
    for c in range(n):
        piv = next(i for i in range(c, n) if A[i][c] != 0)
        A[c], A[piv] = A[piv], A[c]
        pv = A[c][c]
        A[c] = [x / pv for x in A[c]]
        for i in range(n):
            if i != c and A[i][c] != 0:
                f = A[i][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[c])]
    return [[int(x) for x in row[n:]] for row in A]


@dataclass
class AbelianGroupSNF:
    """``Z/d_1 + ... + Z/d_k`` with ``d_1 | d_2 | ...`` (only d_i > 1 kept).

    ``U`` maps coordinates over the original generators to SNF coordinates
    (rows kept for the nontrivial invariants only); ``witnesses`` are
    objects (ideals, forms) or labels generating each cyclic factor.
    """

    invariants: list
    witnesses: list = field(default_factory=list)
    U: list = field(default_factory=list)
    gen_labels: list = field(default_factory=list)
    certified: bool = True
    certification: str = "exact"
    to_coords: object = None  # callable: element -> coordinates over original generators
    data: dict = field(default_factory=dict)

    @property
    def order(self):
        o = 1
        for d in self.invariants:
            o *= d
        return o

    @property
    def rank(self):
        return len(self.invariants)

    def p_rank(self, p):
        return sum(1 for d in self.invariants if d % p == 0)

    def reduce(self, v):
        return [x % d for x, d in zip(v, self.invariants)]

    def coords_to_snf(self, coords):
        return self.reduce([sum(u * c for u, c in zip(row, coords)) for row in self.U])

    def dlog(self, x):
        """SNF coordinates of an element, or None when it cannot be expressed."""
        if self.to_coords is None:
            raise ValueError("group has no discrete-log support")
        c = self.to_coords(x)
        if c is None:
            return None
        return self.coords_to_snf(c)

    def element_order(self, v):
        o = 1
        for x, d in zip(v, self.invariants):
            k = d // gcd(x % d, d)
            o = o * k // gcd(o, k)
        return o

    def as_dict(self):
        return {
            "invariants": list(self.invariants),
            "order": self.order,
            "certified": self.certified,
            "certification": self.certification,
        }

    def __repr__(self):
        return f"AbelianGroupSNF({self.invariants}, {self.certification})"


def group_from_relations(rel_rows, ngens, labels=None):
    """Group ``Z^ngens / span(rel_rows)``; rows must span a full-rank lattice."""
    if ngens == 0:
        return AbelianGroupSNF([], [], [], labels or [])
    M = [[row[i] for row in rel_rows] for i in range(ngens)]  # columns = relations
    H = hnf(M)
    if len(H[0]) < ngens:
        raise ArithmeticError("relations do not have full rank")
    diag, U, _ = smith_form(H)
    keep = [i for i, d in enumerate(diag) if d != 1]
    if any(diag[i] == 0 for i in keep):
        raise ArithmeticError("infinite group")
    Uinv = _unimodular_inverse(U)
    inv = [diag[i] for i in keep]
    Ukeep = [U[i] for i in keep]
    # generator i of the SNF is sum_j Uinv[j][i] * original_j
    wit_vectors = [[Uinv[j][i] for j in range(ngens)] for i in keep]
    G = AbelianGroupSNF(inv, wit_vectors, Ukeep, labels or list(range(ngens)))
    G.data["hnf"] = H
    return G


def sylow_p(G, p, power=None):
    """Sylow p-subgroup; witnesses raised to the prime-to-p cofactor.

    ``power(w, e)`` raises a witness; without it witnesses become
    ``(w, e)`` pairs.

    >>> sylow_p(AbelianGroupSNF([12, 36]), 2).invariants
    [4, 4]
    """
    inv, wit, rows = [], [], []
    for i, d in enumerate(G.invariants):
        q = 1
        while d % p == 0:
            d //= p
            q *= p
        if q > 1:
            inv.append(q)
            if i < len(G.witnesses):
                w = G.witnesses[i]
                wit.append(power(w, d) if power else (w, d))
            if G.U:
                rows.append(G.U[i])
    H = AbelianGroupSNF(inv, wit, [], G.gen_labels, G.certified, G.certification)
    if G.to_coords is not None and G.U:
        # SNF coordinate of the p-part: x_i * (cofactor inverse) mod q_i
        idx = [i for i, d in enumerate(G.invariants) if d % p == 0]

        def to_snf(x, _G=G, _idx=idx, _inv=inv):
            v = _G.dlog(x)
            if v is None:
                return None
            out = []
            for i, q in zip(_idx, _inv):
                cof = _G.invariants[i] // q
                out.append(v[i] * pow(cof, -1, q) % q if q > 1 else 0)
            return out

        H.data["dlog_p"] = to_snf
    return H


def subgroup_order(G, vectors):
    """Order of the subgroup of ``G`` generated by SNF coordinate vectors."""
    k = len(G.invariants)
    if k == 0:
        return 1
    rels = [[G.invariants[i] * int(i == j) for j in range(k)] for i in range(k)] + [list(v) for v in vectors]
    M = [[r[i] for r in rels] for i in range(k)]
    diag, _, _ = smith_form(hnf(M))
    quotient = 1
    for d in diag:
        quotient *= d
    return G.order // quotient
