"""Absolute number fields with their maximal orders.

A field is given by a monic irreducible integer polynomial ``f``; the
maximal order is found by Round-2 saturation at every prime whose square
divides the discriminant of the starting order.  Elements are stored by
their coordinates on the integral basis ``omega_0 = 1, ..., omega_{n-1}``.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import cached_property
from math import gcd, lcm

import mpmath
from sympy import factorint

from ..kernel.intmat import det_bareiss, hnf, hnf_mod
from ..kernel.modlin import kernel_mod_p, solve_upper
from ..kernel.poly import IntPolynomial

__all__ = ["NumberField", "FieldElement", "ReduciblePolynomial", "FieldMismatch"]


class ReduciblePolynomial(ValueError):
    def __init__(self, poly, factor):
        super().__init__(f"{poly} is reducible over Q; factor {factor}")
        self.factor = factor


class FieldMismatch(ValueError):
    pass


def _polymulmod(a, b, f):
    """Product of coefficient lists (low first) reduced modulo monic ``f``."""
    n = len(f) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] += x * y
    for k in range(len(prod) - 1, n - 1, -1):
        c = prod[k]
        if c:
            for i in range(n):
                prod[k - n + i] -= c * f[i]
        prod[k] = 0
    prod = prod[:n] + [0] * (n - len(prod[:n]))
    return prod


def _order_table(num, den, f):
    n = len(num)
    cols = [[num[r][j] for r in range(n)] for j in range(n)]
    table = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            prod = _polymulmod(cols[i], cols[j], f)
            c = solve_upper(num, den, prod)
            if any(x.denominator != 1 for x in c):
                return None
            v = [int(x) for x in c]
            table[i][j] = table[j][i] = v
    return table


def _mul_coords(table, x, y):
    n = len(x)
    out = [0] * n
    for i in range(n):
        xi = x[i]
        if not xi:
            continue
        ti = table[i]
        for j in range(n):
            yj = y[j]
            if yj:
                c = xi * yj
                for k, t in enumerate(ti[j]):
                    if t:
                        out[k] += c * t
    return out


def _pow_coords_mod(table, x, e, p):
    n = len(x)
    result = [1] + [0] * (n - 1)
    base = [v % p for v in x]
    while e:
        if e & 1:
            result = [v % p for v in _mul_coords(table, result, base)]
        base = [v % p for v in _mul_coords(table, base, base)]
        e >>= 1
    return result


def _normalize_order(num, den):
    g = den
    for row in num:
        for x in row:
            g = gcd(g, x)
    if g > 1:
        num = [[x // g for x in row] for row in num]
        den //= g
    return num, den


def round2_step(num, den, f, p):
    """One enlargement step at ``p``.  Returns the new (num, den) or None if p-maximal."""
    n = len(num)
    table = _order_table(num, den, f)
    if table is None:
        raise ArithmeticError("basis does not span a ring")
    # p-radical: kernel of x -> x^(p^j) on O/pO with p^j >= n
    q = p
    while q < n:
        q *= p
    frob_cols = []
    for i in range(n):
        e = [0] * n
        e[i] = 1
        frob_cols.append(_pow_coords_mod(table, e, q, p))
    F = [[frob_cols[j][r] for j in range(n)] for r in range(n)]
    ker = kernel_mod_p(F, p)
    gens = [list(v) for v in ker] + [[p * int(r == c) for r in range(n)] for c in range(n)]
    Ip = hnf_mod([[g[r] for g in gens] for r in range(n)], p)
    beta = [[Ip[r][k] for r in range(n)] for k in range(n)]
    # U = ker(O -> End(Ip / p Ip))
    rows = []
    blocks = []
    for i in range(n):
        e = [0] * n
        e[i] = 1
        block = []
        for k in range(n):
            prod = _mul_coords(table, e, beta[k])
            c = solve_upper(Ip, 1, prod)
            block.append([int(x) % p for x in c])
        blocks.append(block)
    for k in range(n):
        for r in range(n):
            rows.append([blocks[i][k][r] for i in range(n)])
    ker = kernel_mod_p(rows, p)
    if not ker:
        return None
    gens = [list(v) for v in ker] + [[p * int(r == c) for r in range(n)] for c in range(n)]
    U = hnf_mod([[g[r] for g in gens] for r in range(n)], p)
    # new order (1/p) U expressed on the power basis
    newnum = [[sum(num[r][l] * U[l][c] for l in range(n)) for c in range(n)] for r in range(n)]
    newnum = hnf(newnum)
    return _normalize_order(newnum, den * p)


def maximal_order(f, num=None, den=1, primes=None):
    """Round-2 maximal order of ``Z[x]/f``; returns (num, den, disc)."""
    n = f.degree
    if num is None:
        num = [[int(i == j) for j in range(n)] for i in range(n)]
        den = 1
    fc = list(f.coeffs)
    pdisc = f.discriminant
    idx = Fraction(det_bareiss(num), den ** n)
    disc = Fraction(pdisc) * idx * idx
    assert disc.denominator == 1
    disc = int(disc)
    if primes is None:
        primes = [p for p, e in factorint(abs(disc)).items() if e >= 2]
    for p in sorted(set(primes)):
        while True:
            d_now = int(Fraction(pdisc) * Fraction(det_bareiss(num), den ** n) ** 2)
            if d_now % (p * p):
                break
            step = round2_step(num, den, fc, p)
            if step is None:
                break
            num, den = step
    idx = Fraction(det_bareiss(num), den ** n)
    disc = int(Fraction(pdisc) * idx * idx)
    return num, den, disc


class NumberField:
    """Number field ``Q[x]/(f)`` with maximal order.

    ``order`` optionally seeds Round 2 with a known order (columns of
    ``num / den`` on the power basis) and ``disc_primes`` lists the primes
    at which it might fail to be maximal; both are used by compositum
    construction where the discriminant factorisation is known.
    """

    def __init__(self, poly, order=None, disc_primes=None, check_irreducible=True, name=None):
        if isinstance(poly, str):
            poly = IntPolynomial.parse(poly)
        if not poly.is_monic():
            raise ValueError("defining polynomial must be monic")
        if poly.degree < 1:
            raise ValueError("degree must be positive")
        if check_irreducible and poly.degree > 1:
            facs = poly.factor_over_q()
            if len(facs) != 1 or facs[0][1] != 1:
                raise ReduciblePolynomial(poly, facs[0][0])
        self.poly = poly
        self.n = poly.degree
        self.name = name
        num, den = (order if order is not None else (None, 1))
        self.basis_num, self.basis_den, self.disc = maximal_order(poly, num, den, disc_primes)
        self.index = int(Fraction(self.basis_den ** self.n, det_bareiss(self.basis_num)))
        tab = _order_table(self.basis_num, self.basis_den, list(poly.coeffs))
        self.table = tab
        # multiplication-by-omega_i matrices: column j = coords of omega_i * omega_j
        self._mulmats = [[[tab[i][j][k] for j in range(self.n)] for k in range(self.n)] for i in range(self.n)]

    # ----- basic data -------------------------------------------------
    def __repr__(self):
        return f"NumberField({self.poly})"

    def __eq__(self, other):
        return isinstance(other, NumberField) and self.poly == other.poly

    def __hash__(self):
        return hash(self.poly)

    @property
    def degree(self):
        return self.n

    @cached_property
    def signature(self):
        r1 = int(self.poly.to_sympy().count_roots())
        return r1, (self.n - r1) // 2

    @property
    def unit_rank(self):
        r1, r2 = self.signature
        return r1 + r2 - 1

    @cached_property
    def disc_factorization(self):
        return {int(p): int(e) for p, e in factorint(abs(self.disc)).items()}

    # ----- element plumbing --------------------------------------------
    def zero(self):
        return FieldElement(self, [0] * self.n)

    def one(self):
        return FieldElement(self, [1] + [0] * (self.n - 1))

    def __call__(self, x):
        if isinstance(x, FieldElement):
            if x.field is not self:
                raise FieldMismatch("element of another field")
            return x
        if isinstance(x, (int, Fraction)):
            return FieldElement(self, [x] + [0] * (self.n - 1))
        return FieldElement(self, list(x))

    def from_power_basis(self, coeffs):
        """Element ``sum c_i theta^i`` from (rational) power-basis coefficients."""
        c = [Fraction(x) for x in coeffs] + [Fraction(0)] * (self.n - len(coeffs))
        if len(c) > self.n:
            # reduce modulo f
            den = lcm(*[x.denominator for x in c]) if c else 1
            ci = [int(x * den) for x in c]
            ci = _polymulmod(ci, [1], list(self.poly.coeffs))
            c = [Fraction(x, den) for x in ci]
        den = lcm(*[x.denominator for x in c])
        ci = [int(x * den) for x in c]
        coords = solve_upper(self.basis_num, 1, [x * self.basis_den for x in ci])
        return FieldElement(self, [x / den for x in coords])

    def gen(self):
        return self.from_power_basis([0, 1])

    def to_power_basis(self, coords):
        out = []
        for r in range(self.n):
            row = self.basis_num[r]
            out.append(sum(Fraction(row[j]) * coords[j] for j in range(self.n)) / self.basis_den)
        return out

    def mul_int(self, x, y):
        return _mul_coords(self.table, x, y)

    def mulmat(self, x):
        """Integer/rational matrix of multiplication by coordinates ``x``."""
        n = self.n
        M = [[0] * n for _ in range(n)]
        for i, xi in enumerate(x):
            if xi:
                Mi = self._mulmats[i]
                for r in range(n):
                    Mr, Mir = M[r], Mi[r]
                    for c in range(n):
                        if Mir[c]:
                            Mr[c] += xi * Mir[c]
        return M

    def norm_int(self, x):
        return det_bareiss(self.mulmat(x))

    # ----- embeddings ----------------------------------------------------
    def roots(self, dps=50):
        """Complex roots ordered: real ones ascending, then one of each
        conjugate pair with positive imaginary part (ascending real part)."""
        key = ("roots", dps)
        cache = self.__dict__.setdefault("_roots_cache", {})
        if key in cache:
            return cache[key]
        with mpmath.workdps(dps + 10):
            rts = mpmath.polyroots(self.poly.high(), maxsteps=400, extraprec=4 * dps + 50)
            r1, r2 = self.signature
            real = sorted([mpmath.re(z) for z in rts if abs(mpmath.im(z)) < mpmath.mpf(10) ** (-(dps // 2))])
            cplx = sorted([z for z in rts if mpmath.im(z) > mpmath.mpf(10) ** (-(dps // 2))], key=lambda z: (mpmath.re(z), mpmath.im(z)))
            if len(real) != r1 or len(cplx) != r2:
                raise ArithmeticError("root isolation failed; raise precision")
            out = [mpmath.mpc(z) for z in real] + cplx
        cache[key] = out
        return out

    def root_radii(self, dps=50):
        """Certified radii: a true root lies within ``n |f(z)/f'(z)|`` of each approximation."""
        f = self.poly
        df = f.derivative()
        with mpmath.workdps(dps + 10):
            out = []
            for z in self.roots(dps):
                fz = mpmath.polyval(f.high(), z)
                dz = mpmath.polyval(df.high(), z)
                out.append(self.n * abs(fz) / abs(dz))
        return out

    def embedding_matrix(self, dps=30):
        """``E[i][j]`` = i-th embedding (real first) of ``omega_j``, as mpc."""
        key = ("emb", dps)
        cache = self.__dict__.setdefault("_roots_cache", {})
        if key in cache:
            return cache[key]
        extra = self._cancellation_digits()
        with mpmath.workdps(dps + extra + 10):
            rts = self.roots(max(dps, 30) + extra)
            E = []
            for z in rts:
                pw = [mpmath.mpc(1)]
                for _ in range(self.n - 1):
                    pw.append(pw[-1] * z)
                row = []
                for j in range(self.n):
                    s = mpmath.mpc(0)
                    for r in range(self.n):
                        if self.basis_num[r][j]:
                            s += self.basis_num[r][j] * pw[r]
                    row.append(s / self.basis_den)
                E.append(row)
        cache[key] = E
        return E

    def embeddings_float(self):
        """Same as :meth:`embedding_matrix` but as Python complex numbers (fast path)."""
        cache = self.__dict__.setdefault("_roots_cache", {})
        if "embf" not in cache:
            cache["embf"] = [[complex(x) for x in row] for row in self.embedding_matrix(30)]
        return cache["embf"]

    def t2_gram(self, weights=None, scale_bits=40):
        """Integer approximation ``round(2^k * T2)`` of the Minkowski form on the integral basis.

        ``weights`` rescales each embedding (one weight per row of the
        embedding matrix).  Used only to steer LLL; every downstream
        decision is re-verified exactly.
        """
        return self.t2_gram_scaled(weights, scale_bits)[0]

    def _cancellation_digits(self):
        """Digits lost when evaluating basis elements as sums of num * theta^r / den."""
        cache = self.__dict__.setdefault("_roots_cache", {})
        if "cancel" not in cache:
            numdig = max(len(str(abs(c))) for row in self.basis_num for c in row)
            rad = max(abs(complex(z)) for z in self.roots(30))
            cache["cancel"] = numdig + int(self.n * math.log10(rad + 1.0)) + 1
        return cache["cancel"]

    def _reduced_basis(self):
        """LLL-reduced integral basis for T2: ``(T, E_red_mp, E_red_float, dps)``.

        Rows of ``T`` express the reduced basis in the stored one.  Gram
        matrices are built in the reduced basis (well conditioned) and
        pulled back exactly, so huge integral-basis elements do not eat
        the floating-point precision.
        """
        cache = self.__dict__.setdefault("_roots_cache", {})
        if "reduced" in cache:
            return cache["reduced"]
        n = self.n
        dps = 60
        E = self.embedding_matrix(dps)
        r1, _ = self.signature
        with mpmath.workdps(dps):
            G = [[mpmath.mpf(0)] * n for _ in range(n)]
            for i, row in enumerate(E):
                m = 1 if i < r1 else 2
                for a in range(n):
                    for b in range(a, n):
                        G[a][b] += m * mpmath.re(row[a] * mpmath.conj(row[b]))
            mn = min(G[a][a] for a in range(n))
            s = mpmath.mpf(2) ** 40 / mn
            Gi = [[int(mpmath.nint(G[min(a, b)][max(a, b)] * s)) for b in range(n)] for a in range(n)]
            for a in range(n):
                Gi[a][a] += n
            from ..kernel.intmat import lll_gram

            _, T = lll_gram(Gi)
            Er = [[mpmath.fsum(T[k][j] * row[j] for j in range(n) if T[k][j]) for k in range(n)] for row in E]
        Ef = [[complex(x) for x in row] for row in Er]
        # old coordinates x relate to reduced ones y by x = T^t y
        from ..kernel.modlin import solve_rational

        cols = [solve_rational([list(r) for r in zip(*T)], [int(i == j) for i in range(n)]) for j in range(n)]
        Tinv = [[int(cols[j][i]) for j in range(n)] for i in range(n)]  # (T^t)^-1
        cache["reduced"] = (Tinv, Er, Ef, dps)
        return cache["reduced"]

    def t2_gram_scaled(self, weights=None, scale_bits=40, lower=False):
        """``(G, s)`` with ``G`` an integer matrix close to ``s * T2``.

        The diagonal (in the reduced basis) is shifted by ``n`` so that
        ``G >= s*T2`` as quadratic forms (or ``G <= s*T2`` when ``lower`` is
        set), which is what complete enumerations need.
        """
        r1, r2 = self.signature
        n = self.n
        w = weights or [1.0] * (r1 + r2)
        T, Er, Ef, dps = self._reduced_basis()
        spread = max(w) / min(w)
        if spread > 1e3:
            # badly scaled forms lose the small directions in double precision
            extra = int(2 * math.log2(spread)) + 8
            Gr, s = self._t2_gram_mp(Er, w, scale_bits + extra, lower, dps + int(extra * 0.302) + 5)
        else:
            G = [[0.0] * n for _ in range(n)]
            for i, row in enumerate(Ef):
                mult = 1.0 if i < r1 else 2.0
                wi = w[i] ** 2 * mult
                for a in range(n):
                    ra = row[a]
                    for b in range(a, n):
                        G[a][b] += wi * (ra * row[b].conjugate()).real
            for a in range(n):
                for b in range(a):
                    G[a][b] = G[b][a]
            mx = max(abs(G[a][a]) for a in range(n))
            s = 2.0 ** scale_bits / mx
            Gr = [[int(round(G[a][b] * s)) for b in range(n)] for a in range(n)]
            # rounding errors are below 1/2 per entry, so a shift of n dominates them
            for a in range(n):
                Gr[a][a] += -n if lower else n
        # pull back: y = P x with P = (T^t)^-1, so G = P^t Gr P
        P = T
        PG = [[sum(P[k][a] * Gr[k][l] for k in range(n) if P[k][a]) for l in range(n)] for a in range(n)]
        Gi = [[sum(PG[a][l] * P[l][b] for l in range(n) if P[l][b]) for b in range(n)] for a in range(n)]
        return Gi, s

    def _t2_gram_mp(self, E, w, bits, lower, dps):
        r1, r2 = self.signature
        n = self.n
        with mpmath.workdps(dps):
            G = [[mpmath.mpf(0)] * n for _ in range(n)]
            for i, row in enumerate(E):
                wi = mpmath.mpf(w[i]) ** 2 * (1 if i < r1 else 2)
                for a in range(n):
                    for b in range(a, n):
                        G[a][b] += wi * mpmath.re(row[a] * mpmath.conj(row[b]))
            mx = max(abs(G[a][a]) for a in range(n))
            s = mpmath.mpf(2) ** bits / mx
            Gi = [[int(mpmath.nint(G[min(a, b)][max(a, b)] * s)) for b in range(n)] for a in range(n)]
        for a in range(n):
            Gi[a][a] += -n if lower else n
        return Gi, float(s)

    def t2(self, x):
        E = self.embeddings_float()
        r1, _ = self.signature
        tot = 0.0
        for i, row in enumerate(E):
            s = sum(complex(float(c)) * e for c, e in zip(x, row))
            tot += abs(s) ** 2 * (1 if i < r1 else 2)
        return tot

    def conjugates(self, x, dps=30):
        E = self.embedding_matrix(dps)
        with mpmath.workdps(dps + 10):
            out = []
            for row in E:
                s = mpmath.mpc(0)
                for c, e in zip(x, row):
                    if c:
                        s += mpmath.mpf(Fraction(c).numerator) / Fraction(c).denominator * e
                out.append(s)
        return out

    def minkowski_bound(self):
        r1, r2 = self.signature
        n = self.n
        import math

        return (4 / math.pi) ** r2 * math.factorial(n) / n ** n * math.sqrt(abs(self.disc))


class FieldElement:
    """Element of a :class:`NumberField` in integral-basis coordinates."""

    __slots__ = ("field", "coords")

    def __init__(self, field, coords):
        if len(coords) != field.n:
            raise ValueError("coordinate vector has wrong length")
        c = []
        for x in coords:
            if isinstance(x, Fraction):
                c.append(int(x) if x.denominator == 1 else x)
            else:
                c.append(int(x))
        self.field = field
        self.coords = tuple(c)

    def _other(self, y):
        if isinstance(y, FieldElement):
            if y.field is not self.field and y.field != self.field:
                raise FieldMismatch("elements of different fields")
            return y
        return self.field(y)

    def __add__(self, y):
        y = self._other(y)
        return FieldElement(self.field, [a + b for a, b in zip(self.coords, y.coords)])

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, [-a for a in self.coords])

    def __sub__(self, y):
        return self + (-self._other(y))

    def __rsub__(self, y):
        return self._other(y) - self

    def __mul__(self, y):
        if isinstance(y, (int, Fraction)):
            return FieldElement(self.field, [a * y for a in self.coords])
        y = self._other(y)
        return FieldElement(self.field, _mul_coords(self.field.table, self.coords, y.coords))

    __rmul__ = __mul__

    def __truediv__(self, y):
        if isinstance(y, (int, Fraction)):
            return FieldElement(self.field, [Fraction(a) / y for a in self.coords])
        return self * self._other(y).inverse()

    def __rtruediv__(self, y):
        return self._other(y) * self.inverse()

    def __pow__(self, e):
        if e < 0:
            return self.inverse() ** (-e)
        out = self.field.one()
        b = self
        while e:
            if e & 1:
                out = out * b
            b = b * b
            e >>= 1
        return out

    def __eq__(self, y):
        if isinstance(y, (int, Fraction)):
            y = self.field(y)
        if not isinstance(y, FieldElement):
            return NotImplemented
        return self.coords == y.coords

    def __hash__(self):
        return hash(self.coords)

    def __repr__(self):
        return f"FieldElement({list(self.coords)})"

    def is_zero(self):
        return not any(self.coords)

    def is_integral(self):
        return all(not isinstance(c, Fraction) for c in self.coords)

    def denominator(self):
        return lcm(*[Fraction(c).denominator for c in self.coords])

    def matrix(self):
        return self.field.mulmat(self.coords)

    def norm(self):
        d = self.denominator()
        if d == 1:
            return Fraction(self.field.norm_int(list(self.coords)))
        num = [int(c * d) for c in self.coords]
        return Fraction(self.field.norm_int(num), d ** self.field.n)

    def trace(self):
        M = self.matrix()
        return sum(Fraction(M[i][i]) for i in range(self.field.n))

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        from ..kernel.modlin import solve_rational

        e1 = [1] + [0] * (self.field.n - 1)
        return FieldElement(self.field, solve_rational(self.matrix(), e1))

    def charpoly(self):
        """Characteristic polynomial (rational coefficients, high degree first).

        Faddeev-LeVerrier recursion on the multiplication matrix.
        """
        A = [[Fraction(x) for x in row] for row in self.matrix()]
        n = len(A)
        coeffs = [Fraction(1)]
        M = [[Fraction(0)] * n for _ in range(n)]
        for k in range(1, n + 1):
            # M_k = A M_{k-1} + c_{k-1} I
            AM = [[sum(A[i][l] * M[l][j] for l in range(n) if M[l][j]) for j in range(n)] for i in range(n)]
            c_prev = coeffs[-1]
            for i in range(n):
                AM[i][i] += c_prev
            M = AM
            tr = sum(sum(A[i][l] * M[l][i] for l in range(n)) for i in range(n))
            coeffs.append(-tr / k)
        return coeffs

    def power_basis(self):
        return self.field.to_power_basis(self.coords)

    def conjugates(self, dps=30):
        return self.field.conjugates(self.coords, dps)
