"""Dense integer polynomials in one variable.

Heavy lifting (resultants, factorisation over Q and over F_p) is delegated
to sympy's low-level dense routines; this class keeps the coefficient
tuple canonical and hashable.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from math import gcd

from sympy import Poly, Symbol, ZZ
from sympy.polys.galoistools import gf_factor, gf_from_int_poly, gf_to_int_poly
from sympy.parsing.sympy_parser import implicit_multiplication, parse_expr, standard_transformations

_X = Symbol("x")

__all__ = ["IntPolynomial", "parse_polynomial"]


@dataclass(frozen=True)
class IntPolynomial:
    """Polynomial with integer coefficients, stored low degree first."""

    coeffs: tuple

    def __post_init__(self):
        c = [int(a) for a in self.coeffs]
        while len(c) > 1 and c[-1] == 0:
            c.pop()
        if not c:
            c = [0]
        object.__setattr__(self, "coeffs", tuple(c))

    @classmethod
    def from_high(cls, coeffs):
        return cls(tuple(reversed(list(coeffs))))

    @classmethod
    def parse(cls, text):
        return parse_polynomial(text)

    @property
    def degree(self):
        return len(self.coeffs) - 1

    @property
    def lc(self):
        return self.coeffs[-1]

    def is_monic(self):
        return self.lc == 1

    def high(self):
        return list(reversed(self.coeffs))

    def __call__(self, x):
        acc = 0
        for a in reversed(self.coeffs):
            acc = acc * x + a
        return acc

    def eval_mod(self, x, m):
        acc = 0
        for a in reversed(self.coeffs):
            acc = (acc * x + a) % m
        return acc

    def derivative(self):
        return IntPolynomial(tuple(i * a for i, a in enumerate(self.coeffs))[1:] or (0,))

    def content(self):
        g = 0
        for a in self.coeffs:
            g = gcd(g, a)
        return g

    def to_sympy(self):
        return Poly(self.high(), _X, domain=ZZ)

    @classmethod
    def from_sympy(cls, P):
        return cls.from_high([int(c) for c in Poly(P, _X).all_coeffs()])

    @cached_property
    def discriminant(self):
        return int(self.to_sympy().discriminant())

    def resultant(self, other):
        return int(self.to_sympy().resultant(other.to_sympy()))

    def factor_over_q(self):
        """Irreducible factors over Q as (IntPolynomial, multiplicity)."""
        _, facs = self.to_sympy().factor_list()
        return [(IntPolynomial.from_sympy(f), m) for f, m in facs]

    def is_irreducible(self):
        facs = self.factor_over_q()
        return len(facs) == 1 and facs[0][1] == 1

    def factor_mod(self, p):
        """Monic irreducible factors mod ``p`` as (coefficient list high-first, multiplicity)."""
        f = gf_from_int_poly(self.high(), p)
        _, facs = gf_factor(f, p, ZZ)
        return [([int(c) % p for c in g], m) for g, m in facs]

    def roots_mod(self, p):
        out = []
        for g, m in self.factor_mod(p):
            if len(g) == 2:
                out.append(((-g[1]) * pow(g[0], -1, p) % p, m))
        return sorted(out)

    def monic_transform(self):
        """For ``a x^n + ...`` return the monic polynomial of ``a * root``."""
        a = self.lc
        n = self.degree
        return IntPolynomial(tuple(c * a ** (n - 1 - i) if i < n else 1 for i, c in enumerate(self.coeffs)))

    def shift(self, t):
        """Polynomial of ``root - t``, i.e. ``f(x + t)``."""
        P = self.to_sympy().compose(Poly(_X + t, _X, domain=ZZ))
        return IntPolynomial.from_sympy(P)

    def __str__(self):
        terms = []
        for i in range(self.degree, -1, -1):
            a = self.coeffs[i]
            if a == 0:
                continue
            sign = "-" if a < 0 else "+"
            m = abs(a)
            if i == 0:
                body = str(m)
            else:
                mon = "x" if i == 1 else f"x^{i}"
                body = mon if m == 1 else f"{m}*{mon}"
            terms.append((sign, body))
        if not terms:
            return "0"
        s = ("-" if terms[0][0] == "-" else "") + terms[0][1]
        for sign, body in terms[1:]:
            s += f" {sign} {body}"
        return s


_ALLOWED = re.compile(r"^[\sx0-9+\-*^()]*$")


def parse_polynomial(text):
    """Parse ``x^3 - x^2 - 39*x - 109`` (or ``39x``) style input exactly.

    Only the variable ``x``, integers, ``+ - * ^`` and parentheses are
    accepted.
    """
    if not _ALLOWED.match(text) or not text.strip():
        raise ValueError(f"unsupported characters in polynomial {text!r}")
    expr = parse_expr(text.replace("^", "**"), local_dict={"x": _X}, transformations=standard_transformations + (implicit_multiplication,))
    P = Poly(expr, _X)
    if P.get_domain() != ZZ:
        raise ValueError(f"polynomial {text!r} does not have integer coefficients")
    return IntPolynomial.from_sympy(P)
