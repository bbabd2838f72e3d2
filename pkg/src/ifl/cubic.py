"""Cubic fields of negative discriminant from reduced binary cubic forms,
and layers of the cyclotomic Z_3-tower over them.

A real irreducible cubic form ``a x^3 + b x^2 y + c x y^2 + d y^3`` with
negative discriminant has one real root ``theta`` and a complex pair
``phi = u + iv``.  Moving ``phi`` into the fundamental domain of SL2(Z)
(|u| <= 1/2, |phi| >= 1) gives, from
``|D| = 4 a^4 v^2 ((theta-u)^2 + v^2)^2``, the bounds used below.
"""

from __future__ import annotations

import math
from fractions import Fraction
from dataclasses import dataclass, field as dc_field

from sympy import Poly, factorint, primerange, symbols

from .kernel.poly import IntPolynomial
from .nf.compositum import compositum_data
from .nf.field import NumberField
from .nf.primes import prime_decomposition

__all__ = [
    "BinaryCubicForm",
    "TowerLayer",
    "enumerate_cubic_forms",
    "enumerate_cubic_fields",
    "hasse_count_check",
    "layer_field",
    "is_fundamental",
    "normalize_discriminant",
    "cubic_fields_isomorphic",
    "CYCLOTOMIC_CUBIC",
]

# first layer of the cyclotomic Z_3-extension of Q
CYCLOTOMIC_CUBIC = IntPolynomial.from_high([1, 0, -3, 1])


def is_fundamental(D):
    if D in (0, 1):
        return False
    if D % 4 == 1:
        return _squarefree(D)
    if D % 4 == 0:
        m = D // 4
        return m % 4 in (2, 3) and _squarefree(m)
    return False


def _squarefree(m):
    return all(e == 1 for e in factorint(abs(m)).values())


def normalize_discriminant(D):
    """Map ``D`` to a fundamental discriminant.

    A fundamental discriminant is returned unchanged.  A squarefree
    integer that is not one (``D = 2, 3 mod 4``) is read as the radicand
    of Q(sqrt D) and replaced by ``4 D``.  Returns ``(disc, note)``.
    """
    D = int(D)
    if is_fundamental(D):
        return D, None
    if D not in (0, 1) and _squarefree(D) and D % 4 in (2, 3):
        return 4 * D, f"{D} is not a discriminant; using disc Q(sqrt({D})) = {4 * D}"
    raise ValueError(f"{D} is neither a fundamental discriminant nor a squarefree radicand")


@dataclass(frozen=True, order=True)
class BinaryCubicForm:
    a: int
    b: int
    c: int
    d: int

    @property
    def discriminant(self):
        a, b, c, d = self.a, self.b, self.c, self.d
        return 18 * a * b * c * d - 4 * b ** 3 * d + b * b * c * c - 4 * a * c ** 3 - 27 * a * a * d * d

    def polynomial(self):
        return IntPolynomial.from_high([self.a, self.b, self.c, self.d])

    def is_irreducible(self):
        return self.polynomial().is_irreducible()

    def monic(self):
        """Monic polynomial of ``a * theta``: x^3 + b x^2 + ac x + a^2 d."""
        return IntPolynomial.from_high([1, self.b, self.a * self.c, self.a * self.a * self.d])


def _isqrt_exact(n):
    if n < 0:
        return None
    r = math.isqrt(n)
    return r if r * r == n else None


def enumerate_cubic_forms(D):
    """Irreducible forms of discriminant ``D < 0`` covering every SL2(Z) class.

    The list may contain several forms of one class; callers deduplicate
    at the level of fields.
    """
    if D >= 0:
        raise ValueError("only negative discriminants are supported")
    A = abs(D)
    amax = int((16 * A / 27) ** 0.25) + 1
    out = []
    for a in range(1, amax + 1):
        V = (A / (4 * a ** 4)) ** (1 / 6)
        T = (math.sqrt(A) / (math.sqrt(3) * a * a)) ** 0.5
        bmax = int(a * (T + 1.5)) + 1
        cmax = int(a * (0.25 + V * V + T + 0.5)) + 1
        for b in range(-bmax, bmax + 1):
            for c in range(-cmax, cmax + 1):
                # -27 a^2 d^2 + (18abc - 4b^3) d + (b^2c^2 - 4ac^3 - D) = 0
                qa = -27 * a * a
                qb = 18 * a * b * c - 4 * b ** 3
                qc = b * b * c * c - 4 * a * c ** 3 - D
                disc = qb * qb - 4 * qa * qc
                s = _isqrt_exact(disc)
                if s is None:
                    continue
                for num in {-qb + s, -qb - s}:
                    if num % (2 * qa) == 0:
                        d = num // (2 * qa)
                        if d == 0:
                            continue
                        form = BinaryCubicForm(a, b, c, d)
                        if form.discriminant == D and form.is_irreducible():
                            out.append(form)
    return sorted(set(out))


def _fingerprint(K, nprimes=20):
    fp = []
    for p in primerange(2, 10 ** 6):
        if len(fp) >= nprimes:
            break
        fp.append(tuple(sorted((e, f) for _, e, f in prime_decomposition(K, int(p)))))
    return tuple(fp)


def root_in_field(K, g):
    """A root of ``g`` in ``K`` (FieldElement), or None.

    The candidate is read off numerically from the embeddings, rounded to
    rationals and then checked exactly, so a returned root is certain.
    """
    import mpmath

    n = K.n
    if g.degree != n:
        return None
    E = K.embedding_matrix(40)
    with mpmath.workdps(40):
        groots = mpmath.polyroots(g.high(), maxsteps=200, extraprec=200)
        r1, r2 = K.signature
        # one equation per embedding: real rows, then real and imaginary parts
        for target in _root_assignments(groots, r1, r2):
            rows, rhs = [], []
            for i, z in enumerate(target):
                if i < r1:
                    rows.append([mpmath.re(e) for e in E[i]])
                    rhs.append(mpmath.re(z))
                else:
                    rows.append([mpmath.re(e) for e in E[i]])
                    rhs.append(mpmath.re(z))
                    rows.append([mpmath.im(e) for e in E[i]])
                    rhs.append(mpmath.im(z))
            try:
                sol = mpmath.lu_solve(mpmath.matrix(rows), mpmath.matrix(rhs))
            except ZeroDivisionError:
                continue
            coords = [Fraction(round(float(sol[j]))) if abs(sol[j] - round(float(sol[j]))) < 1e-20 else None for j in range(n)]
            if any(c is None for c in coords):
                continue
            x = K(coords)
            val = K(0)
            for c in g.high():
                val = val * x + c
            if val.is_zero():
                return x
    return None


def _root_assignments(roots, r1, r2):
    import itertools
    import mpmath

    real = [z for z in roots if abs(mpmath.im(z)) < mpmath.mpf(10) ** -20]
    cplx = [z for z in roots if abs(mpmath.im(z)) >= mpmath.mpf(10) ** -20]
    if len(real) != r1:
        return
    for pr in itertools.permutations(real):
        for pc in itertools.permutations(cplx, r2):
            yield list(pr) + list(pc)


def cubic_fields_isomorphic(K1, K2):
    """Exact test: ``K2``'s polynomial has a root in ``K1``.

    A root found via the embeddings is verified exactly; failing that, the
    norm ``Res_y(f1(y), f2(x - t y))`` is factored (Trager), which decides
    the question either way.
    """
    if K1.n != K2.n or K1.disc != K2.disc:
        return False
    if root_in_field(K1, K2.poly) is not None:
        return True
    x, y = symbols("x y")
    f1 = Poly(K1.poly.high(), y)
    for t in range(0, 30):
        f2 = Poly(K2.poly.to_sympy().as_expr().subs(symbols("x"), x - t * y), y)
        R = Poly(f1.resultant(f2), x)
        if R.gcd(R.diff(x)).degree() == 0:
            _, facs = R.factor_list()
            return any(Poly(f, x).degree() == K1.n for f, _ in facs)
    raise ArithmeticError("no separating t found")


def _polred(K):
    """A small defining polynomial: best characteristic polynomial among
    short trace-reduced elements of the maximal order (deterministic)."""
    from .kernel.lattice import short_vectors

    n = K.n
    E = K.embeddings_float()
    r1, _ = K.signature
    tr = [sum((e[j] * (1 if i < r1 else 2)).real for i, e in enumerate(E)) for j in range(n)]
    # T2 of omega_j - tr_j/n, j >= 1 (projection orthogonal to Q)
    G = [[0.0] * (n - 1) for _ in range(n - 1)]
    for i, row in enumerate(E):
        m = 1 if i < r1 else 2
        v = [row[j] - tr[j] / n for j in range(1, n)]
        for a in range(n - 1):
            for b in range(n - 1):
                G[a][b] += m * (v[a] * v[b].conjugate()).real
    mx = max(G[a][a] for a in range(n - 1))
    Gi = [[int(round(G[a][b] * 2 ** 30 / mx)) for b in range(n - 1)] for a in range(n - 1)]
    for a in range(n - 1):
        Gi[a][a] += n
    vs, _ = short_vectors(Gi, 3 * max(Gi[a][a] for a in range(n - 1)), limit=60)
    best = K.poly
    for v in vs:
        cp = IntPolynomial.from_high([int(c) for c in K([0] + list(v)).charpoly()])
        cp = cp.shift(round(Fraction(-cp.coeffs[n - 1], n)))
        P = cp.to_sympy()
        if P.gcd(P.diff()).degree() != 0:
            continue
        for cand in (cp, IntPolynomial(tuple(c * (-1) ** (i + n) for i, c in enumerate(cp.coeffs)))):
            if _poly_key(cand) < _poly_key(best):
                best = cand
    return best


def _poly_key(f):
    return (sum(abs(c) for c in f.coeffs), tuple(abs(c) for c in reversed(f.coeffs)), tuple(reversed(f.coeffs)))


def enumerate_cubic_fields(D, reduce_poly=True):
    """One field per isomorphism class of cubic fields of discriminant ``D < 0``.

    ``D`` must be a fundamental discriminant.  Each field carries its
    originating form in ``field.name``.  Order: lexicographic by form.
    """
    if not is_fundamental(D):
        raise ValueError(f"{D} is not a fundamental discriminant")
    fields = []
    prints = []
    for form in enumerate_cubic_forms(D):
        K = NumberField(form.monic(), check_irreducible=False)
        if K.disc != D:
            continue
        fp = _fingerprint(K)
        dup = False
        for K2, fp2 in zip(fields, prints):
            if fp2 == fp and cubic_fields_isomorphic(K2, K):
                dup = True
                break
        if dup:
            continue
        K.name = str(form)
        fields.append(K)
        prints.append(fp)
    out = []
    for K in fields:
        if reduce_poly:
            g = _polred(K)
            if g != K.poly:
                K2 = NumberField(g, check_irreducible=False, name=K.name)
                assert K2.disc == K.disc
                K = K2
        out.append(K)
    return out


def hasse_count_check(D, fields, class_group):
    """``#fields == (3^r - 1)/2`` with r the 3-rank of the class group."""
    invs = class_group.invariants if hasattr(class_group, "invariants") else list(class_group)
    r3 = sum(1 for d in invs if d % 3 == 0)
    return len(fields) == (3 ** r3 - 1) // 2


@dataclass
class TowerLayer:
    base: NumberField
    level: int
    field: NumberField
    p: int
    primes: list = dc_field(default_factory=list)
    base_primes: list = dc_field(default_factory=list)
    embedding: object = None

    def as_dict(self):
        return {
            "level": self.level,
            "polynomial": str(self.field.poly),
            "degree": self.field.n,
            "disc": self.field.disc,
            "primes_above_p": [{"e": P.e, "f": P.f, "hnf": P.hnf} for P in self.primes],
        }


def layer_field(F, n, p=3):
    """The n-th layer ``F_n = F * B_n`` of the cyclotomic Z_p-tower (p = 3, n <= 1)."""
    if p != 3:
        raise ValueError("only p = 3 is supported")
    if n < 0 or n > 1:
        raise ValueError("tower depth is capped at n = 1 (degree 9)")
    base_primes = [P for P, _, _ in prime_decomposition(F, p)]
    if n == 0:
        return TowerLayer(F, 0, F, p, base_primes, base_primes)
    if F.disc % p == 0:
        raise ValueError("p divides disc F; the layer's integral basis would need saturation at p")
    data = compositum_data(F, NumberField(CYCLOTOMIC_CUBIC))
    Fn = data.field
    primes = [P for P, _, _ in prime_decomposition(Fn, p)]
    layer = TowerLayer(F, n, Fn, p, primes, base_primes, data)
    # total ramification: same number of primes, each with e = p^n over its ancestor
    assert len(primes) == len(base_primes)
    for P in primes:
        assert P.e % p ** n == 0
    return layer


def embed_base_element(layer, x):
    """Image in F_n of an element of F (given as FieldElement of F)."""
    if layer.level == 0:
        return x
    data = layer.embedding
    Fn = layer.field
    alpha = Fn.from_power_basis(data.alpha)
    pb = x.power_basis()
    out = Fn(0)
    pw = Fn(1)
    for c in pb:
        out = out + pw * c
        pw = pw * alpha
    return out
