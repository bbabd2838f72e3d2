"""Truncated p-adic integers and Hensel lifting."""

from __future__ import annotations

from dataclasses import dataclass

__all__ = ["PadicNumber", "hensel_roots", "NonLiftableRoot", "valuation"]


def valuation(n, p):
    """p-adic valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("valuation of zero")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


class NonLiftableRoot(ArithmeticError):
    """A root mod p that is not simple, so Newton lifting does not apply."""


@dataclass(frozen=True)
class PadicNumber:
    """An element of Z_p known modulo ``p**prec``.

    ``valuation`` is exact when below ``prec``; a residue of zero has
    valuation "at least prec", reported as ``prec`` with ``is_zero()``
    true.
    """

    p: int
    prec: int
    residue: int

    def __post_init__(self):
        if self.prec < 0:
            raise ValueError("negative precision")
        object.__setattr__(self, "residue", self.residue % self.p ** self.prec)

    @property
    def modulus(self):
        return self.p ** self.prec

    @property
    def valuation(self):
        if self.residue == 0:
            return self.prec
        return valuation(self.residue, self.p)

    def is_zero(self):
        return self.residue == 0

    def _coerce(self, other):
        if isinstance(other, PadicNumber):
            if other.p != self.p:
                raise ValueError("mixing different primes")
            return other
        return PadicNumber(self.p, self.prec, int(other))

    def __add__(self, other):
        o = self._coerce(other)
        N = min(self.prec, o.prec)
        return PadicNumber(self.p, N, self.residue + o.residue)

    __radd__ = __add__

    def __neg__(self):
        return PadicNumber(self.p, self.prec, -self.residue)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        # absolute precision of a product is min(N1 + v2, N2 + v1)
        o = self._coerce(other)
        N = min(self.prec + o.valuation, o.prec + self.valuation)
        return PadicNumber(self.p, N, self.residue * o.residue)

    __rmul__ = __mul__

    def __pow__(self, e):
        if e < 0:
            return self.inverse() ** (-e)
        out = PadicNumber(self.p, self.prec, 1)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def inverse(self):
        if self.residue % self.p == 0:
            raise ZeroDivisionError("not a p-adic unit")
        return PadicNumber(self.p, self.prec, pow(self.residue, -1, self.modulus))

    def lift(self, prec):
        """Reinterpret at lower precision (never raises precision)."""
        if prec > self.prec:
            raise ValueError("cannot invent precision")
        return PadicNumber(self.p, prec, self.residue)

    def __eq__(self, other):
        if not isinstance(other, PadicNumber):
            return NotImplemented
        N = min(self.prec, other.prec)
        return self.p == other.p and (self.residue - other.residue) % self.p ** N == 0

    def __hash__(self):
        return hash((self.p, self.prec, self.residue))

    def __int__(self):
        return self.residue

    def __repr__(self):
        return f"PadicNumber({self.residue} mod {self.p}^{self.prec})"


def hensel_roots(f, p, N, strict=False):
    """Lift every simple root of ``f`` mod ``p`` to a root mod ``p**N``.

    Multiple roots mod ``p`` are skipped, or raise :class:`NonLiftableRoot`
    when ``strict`` is set.  Results are sorted by residue.

    >>> from ifl.kernel.poly import IntPolynomial
    >>> hensel_roots(IntPolynomial((-2, 0, 1)), 7, 3)
    [PadicNumber(108 mod 7^3), PadicNumber(235 mod 7^3)]
    """
    df = f.derivative()
    out = []
    for r in range(p):
        if f.eval_mod(r, p):
            continue
        if df.eval_mod(r, p) == 0:
            if strict:
                raise NonLiftableRoot(f"root {r} mod {p} is not simple")
            continue
        x = r
        m = p
        # quadratic Newton iteration
        while m < p ** N:
            m = min(m * m, p ** N)
            x = (x - f.eval_mod(x, m) * pow(df.eval_mod(x, m), -1, m)) % m
        out.append(PadicNumber(p, N, x))
    return sorted(out, key=lambda z: z.residue)
