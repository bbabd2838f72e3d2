"""Composita of number fields with a primitive element ``alpha + t*beta``."""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm

from sympy import Poly, symbols

from ..kernel.intmat import hnf
from ..kernel.modlin import solve_rational
from ..kernel.poly import IntPolynomial
from .field import NumberField, _normalize_order

__all__ = ["compositum", "CompositumData"]

_x, _y = symbols("x y")


class CompositumData:
    """The compositum field plus the images of both generators (power-basis coefficients)."""

    def __init__(self, field, t, alpha, beta):
        self.field = field
        self.t = t
        self.alpha = alpha
        self.beta = beta


def _tensor_mul(u, v, fa, fb):
    """Product in Q[y,z]/(fa(y), fb(z)); elements are nA x nB coefficient grids."""
    na, nb = len(fa) - 1, len(fb) - 1
    prod = [[Fraction(0)] * (2 * nb - 1) for _ in range(2 * na - 1)]
    for i in range(na):
        for j in range(nb):
            if u[i][j]:
                for k in range(na):
                    for l in range(nb):
                        if v[k][l]:
                            prod[i + k][j + l] += u[i][j] * v[k][l]
    # reduce in y then in z (fa, fb monic, low-first)
    for i in range(2 * na - 2, na - 1, -1):
        row = prod[i]
        for j in range(len(row)):
            c = row[j]
            if c:
                for s in range(na):
                    prod[i - na + s][j] -= c * fa[s]
        prod[i] = [Fraction(0)] * len(row)
    out = []
    for i in range(na):
        row = prod[i]
        for j in range(2 * nb - 2, nb - 1, -1):
            c = row[j]
            if c:
                for s in range(nb):
                    row[j - nb + s] -= c * fb[s]
                row[j] = Fraction(0)
        out.append(row[:nb])
    return out


def _flat(u):
    return [c for row in u for c in row]


def _squarefree(P):
    return P.degree() > 0 and P.gcd(P.diff(_x)).degree() == 0


def compositum(A, B, tmax=50):
    """Compositum of ``A`` and ``B`` as an absolute field.

    The defining polynomial is ``Res_y(fA(y), fB(x - t*y))`` for the
    smallest ``t >= 1`` making it squarefree.  When the discriminants are
    coprime the tensor product of the two maximal orders is already
    maximal and is used directly.
    """
    return compositum_data(A, B, tmax).field


def compositum_data(A, B, tmax=50):
    if B.n == 1:
        return CompositumData(A, 0, [Fraction(int(i == 1)) for i in range(A.n)], [-B.poly.coeffs[0]] + [0] * (A.n - 1))
    if A.n == 1:
        return CompositumData(B, 0, [-A.poly.coeffs[0]] + [0] * (B.n - 1), [Fraction(int(i == 1)) for i in range(B.n)])
    fa = list(A.poly.coeffs)
    fb = list(B.poly.coeffs)
    na, nb = A.n, B.n
    FA = Poly(A.poly.high(), _y)
    for t in range(1, tmax + 1):
        FB = Poly(B.poly.to_sympy().as_expr().subs(symbols("x"), _x - t * _y), _x, _y)
        R = Poly(FA.as_expr(), _y).resultant(Poly(FB.as_expr(), _y))
        H = Poly(R, _x)
        if H.degree() == na * nb and _squarefree(H):
            break
    else:
        raise ArithmeticError("no primitive element alpha + t*beta with t below the bound")
    h = IntPolynomial.from_sympy(H)
    if h.lc < 0:
        h = IntPolynomial(tuple(-c for c in h.coeffs))
    n = na * nb
    # powers of gamma = alpha + t*beta in the tensor basis alpha^i beta^j
    gamma = [[Fraction(0)] * nb for _ in range(na)]
    gamma[1][0] = Fraction(1)
    gamma[0][1] = Fraction(t)
    one = [[Fraction(int(i == 0 and j == 0)) for j in range(nb)] for i in range(na)]
    pw = [one]
    for _ in range(n - 1):
        pw.append(_tensor_mul(pw[-1], gamma, fa, fb))
    M = [[_flat(pw[k])[r] for k in range(n)] for r in range(n)]

    def to_gamma(u):
        return solve_rational(M, _flat(u))

    alpha = [[Fraction(int(i == 1 and j == 0)) for j in range(nb)] for i in range(na)]
    beta = [[Fraction(int(i == 0 and j == 1)) for j in range(nb)] for i in range(na)]
    alpha_g = to_gamma(alpha)
    beta_g = to_gamma(beta)

    # tensor product of integral bases
    def basis_elt(K, j):
        return [Fraction(K.basis_num[r][j], K.basis_den) for r in range(K.n)]

    cols = []
    for i in range(na):
        a = basis_elt(A, i)
        ua = [[a[r] if c == 0 else Fraction(0) for c in range(nb)] for r in range(na)]
        for j in range(nb):
            b = basis_elt(B, j)
            ub = [[b[c] if r == 0 else Fraction(0) for c in range(nb)] for r in range(na)]
            cols.append(to_gamma(_tensor_mul(ua, ub, fa, fb)))
    den = 1
    for c in cols:
        for x in c:
            den = lcm(den, x.denominator)
    num = [[int(cols[j][r] * den) for j in range(n)] for r in range(n)]
    num, den = _normalize_order(hnf(num), den)
    if gcd(A.disc, B.disc) == 1:
        primes = []
    else:
        from sympy import factorint

        primes = [int(p) for p in factorint(gcd(A.disc, B.disc))]
    # coprime degrees force linear disjointness; otherwise check irreducibility
    K = NumberField(h, order=(num, den), disc_primes=primes, check_irreducible=gcd(na, nb) > 1)
    if gcd(A.disc, B.disc) == 1:
        assert K.disc == A.disc ** nb * B.disc ** na, "tensor order is not maximal"
    return CompositumData(K, t, alpha_g, beta_g)
