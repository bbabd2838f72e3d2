"""Integral ideals as HNF lattices on the integral basis."""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from ..kernel.intmat import hnf_mod, hnf_det
from ..kernel.modlin import kernel_mod_p
from .field import FieldElement, FieldMismatch

__all__ = ["Ideal", "PrimeIdeal", "principal_ideal", "ideal_multiply", "ideal_norm", "ideal_equal"]


class Ideal:
    """Nonzero integral ideal: columns of ``hnf`` are a Z-basis (integral-basis coords)."""

    __slots__ = ("field", "hnf", "norm", "_gens2", "__weakref__")

    def __init__(self, field, hnf_matrix, norm=None, gens2=None):
        self.field = field
        self.hnf = hnf_matrix
        self.norm = norm if norm is not None else hnf_det(hnf_matrix)
        self._gens2 = gens2

    @classmethod
    def from_generators(cls, field, gens, modulus):
        """Ideal generated (as O-module) by integral elements ``gens``.

        ``modulus`` must be a nonzero integer lying in the ideal.
        """
        n = field.n
        cols = []
        for g in gens:
            g = list(g.coords) if isinstance(g, FieldElement) else list(g)
            M = field.mulmat(g)
            cols.extend([[M[r][j] for r in range(n)] for j in range(n)])
        D = abs(modulus)
        H = hnf_mod([[c[r] for c in cols] for r in range(n)], D)
        return cls(field, H)

    @classmethod
    def unit(cls, field):
        n = field.n
        return cls(field, [[int(i == j) for j in range(n)] for i in range(n)], 1)

    @classmethod
    def from_int(cls, field, a):
        a = abs(int(a))
        n = field.n
        return cls(field, [[a * int(i == j) for j in range(n)] for i in range(n)], a ** n)

    def basis(self):
        n = self.field.n
        return [[self.hnf[r][j] for r in range(n)] for j in range(n)]

    def min_int(self):
        """Smallest positive integer in the ideal."""
        return self.hnf[0][0]

    def __eq__(self, other):
        if not isinstance(other, Ideal):
            return NotImplemented
        if other.field is not self.field and other.field != self.field:
            return False
        return self.hnf == other.hnf

    def __hash__(self):
        return hash(tuple(tuple(r) for r in self.hnf))

    def __mul__(self, other):
        return ideal_multiply(self, other)

    def __pow__(self, e):
        if e < 0:
            raise ValueError("integral ideals only")
        out = Ideal.unit(self.field)
        b = self
        while e:
            if e & 1:
                out = out * b
            e >>= 1
            if e:
                b = b * b
        return out

    def contains(self, x):
        """Membership test for an element (or coordinate vector)."""
        coords = x.coords if isinstance(x, FieldElement) else x
        if any(isinstance(c, Fraction) and c.denominator != 1 for c in coords):
            return False
        v = [int(c) for c in coords]
        n = self.field.n
        for i in range(n - 1, -1, -1):
            h = self.hnf[i][i]
            if v[i] % h:
                return False
            q = v[i] // h
            if q:
                for r in range(i + 1):
                    v[r] -= q * self.hnf[r][i]
        return True

    def two_generators(self):
        """(a, alpha) with ideal = aO + alpha O, found deterministically."""
        if self._gens2 is not None:
            return self._gens2
        a = self.min_int()
        n = self.field.n
        B = self.basis()
        cands = list(B)
        # small combinations of the basis
        for i in range(n):
            for j in range(i + 1, n):
                cands.append([x + y for x, y in zip(B[i], B[j])])
        for c in cands:
            J = Ideal.from_generators(self.field, [[a] + [0] * (n - 1), c], self.norm)
            if J.hnf == self.hnf:
                self._gens2 = (a, c)
                return self._gens2
        import random

        rng = random.Random(1)
        for _ in range(2000):
            c = [0] * n
            for b in B:
                k = rng.randint(-3, 3)
                if k:
                    c = [x + k * y for x, y in zip(c, b)]
            J = Ideal.from_generators(self.field, [[a] + [0] * (n - 1), c], self.norm)
            if J.hnf == self.hnf:
                self._gens2 = (a, c)
                return self._gens2
        return None

    def __repr__(self):
        return f"Ideal(norm={self.norm}, hnf={self.hnf})"


class PrimeIdeal(Ideal):
    """Prime ideal above ``p`` with ramification ``e`` and residue degree ``f``."""

    __slots__ = ("p", "e", "f", "tau", "pi", "label")

    def __init__(self, field, hnf_matrix, p, e, f, pi=None, label=None):
        super().__init__(field, hnf_matrix, p ** f)
        self.p = p
        self.e = e
        self.f = f
        self.pi = pi
        self.label = label
        self.tau = _anti_uniformizer(field, self)
        if pi is not None:
            self._gens2 = (p, list(pi))

    def valuation(self, x):
        """Valuation of a nonzero element (FieldElement or integral coordinate list)."""
        if isinstance(x, FieldElement):
            d = x.denominator()
            coords = [int(c * d) for c in x.coords]
        else:
            d = 1
            coords = [int(c) for c in x]
        if not any(coords):
            raise ValueError("valuation of zero")
        v = self._val_int(coords)
        if d != 1:
            k = 0
            while d % self.p == 0:
                d //= self.p
                k += 1
            v -= k * self.e
        return v

    def _val_int(self, coords, cap=None):
        p = self.p
        v = 0
        y = coords
        tab = self.field.table
        from .field import _mul_coords

        while cap is None or v < cap:
            z = _mul_coords(tab, y, self.tau)
            if any(c % p for c in z):
                break
            y = [c // p for c in z]
            v += 1
        return v

    def ideal_valuation(self, I):
        return min(self._val_int(b) for b in I.basis() if any(b))

    def __repr__(self):
        return f"PrimeIdeal(p={self.p}, e={self.e}, f={self.f})"


def _anti_uniformizer(field, P):
    """Element tau of O \\ pO with tau * P contained in pO."""
    n = field.n
    p = P.p
    rows = []
    for b in P.basis():
        M = field.mulmat(b)
        # tau*b = M_b tau ; need all coords = 0 mod p
        rows.extend([[x % p for x in row] for row in M])
    ker = kernel_mod_p(rows, p)
    if not ker:
        raise ArithmeticError("no anti-uniformizer; is the ideal prime?")
    return list(ker[0])


def principal_ideal(field, x):
    """Ideal generated by an integral element."""
    if isinstance(x, FieldElement):
        if not x.is_integral():
            raise ValueError("element must be integral")
        coords = [int(c) for c in x.coords]
    else:
        coords = [int(c) for c in x]
    N = abs(field.norm_int(coords))
    if N == 0:
        raise ValueError("zero element")
    M = field.mulmat(coords)
    H = hnf_mod(M, N)
    return Ideal(field, H, N)


def ideal_multiply(a, b):
    if a.field is not b.field and a.field != b.field:
        raise FieldMismatch("ideals of different fields")
    field = a.field
    n = field.n
    N = a.norm * b.norm
    if a.norm == 1:
        return b
    if b.norm == 1:
        return a
    g2 = b._gens2 or (a._gens2 if a._gens2 else None)
    if b._gens2 is not None:
        small, big = b, a
    elif a._gens2 is not None:
        small, big = a, b
    else:
        small, big = b, a
    cols = []
    if small._gens2 is not None:
        k, alpha = small._gens2
        for c in big.basis():
            cols.append([k * x for x in c])
        M = field.mulmat(alpha)
        for c in big.basis():
            cols.append([sum(M[r][j] * c[j] for j in range(n)) for r in range(n)])
    else:
        for c1 in big.basis():
            M = field.mulmat(c1)
            for c2 in small.basis():
                cols.append([sum(M[r][j] * c2[j] for j in range(n)) for r in range(n)])
    H = hnf_mod([[c[r] for c in cols] for r in range(n)], N)
    return Ideal(field, H, hnf_det(H))


def ideal_norm(a):
    return a.norm


def ideal_equal(a, b):
    if a.field is not b.field and a.field != b.field:
        raise FieldMismatch("ideals of different fields")
    return a.hnf == b.hnf
