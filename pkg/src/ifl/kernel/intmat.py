"""Exact integer matrix normal forms and lattice reduction.

Matrices are plain row-major lists of lists of Python ints.  Lattices
spanned by *columns* use the column-style Hermite normal form: upper
triangular, positive pivots, entries right of a pivot reduced into
``[0, pivot)``.  LLL works on *row* vectors, the usual convention for
bases.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

__all__ = [
    "identity",
    "transpose",
    "matmul",
    "hnf",
    "hnf_mod",
    "hnf_det",
    "smith_form",
    "snf_invariants",
    "det_bareiss",
    "lll_reduce",
    "NotPositiveDefinite",
]


class NotPositiveDefinite(ValueError):
    pass


def identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def transpose(M):
    return [list(r) for r in zip(*M)]


def matmul(A, B):
    Bt = list(zip(*B))
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def _xgcd(a, b):
    """Return (g, u, v) with u*a + v*b = g = gcd(a, b) >= 0."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


def _columns(M):
    if not M:
        return []
    return [list(c) for c in zip(*M)]


def _reduce_upper(cols, pivots):
    # pivots[i] is the column index holding pivot of row i, rows bottom-up
    # bottom-up, so that reducing row i never disturbs rows below it
    order = sorted(pivots)
    for i in reversed(order):
        ci = cols[pivots[i]]
        pv = ci[i]
        for j in order:
            if j <= i:
                continue
            cj = cols[pivots[j]]
            q = cj[i] // pv
            if q:
                for r in range(i + 1):
                    cj[r] -= q * ci[r]


def hnf(M):
    """Column-style Hermite normal form of the column span of ``M``.

    Returns a matrix with the same row count whose columns form the
    canonical basis of the lattice spanned by the columns of ``M``.
    Zero columns are dropped, so the result has ``rank(M)`` columns.

    >>> hnf([[2, 1], [0, 1]])
    [[2, 1], [0, 1]]
    """
    nrows = len(M)
    cols = [c for c in _columns(M) if any(c)]
    if nrows == 0:
        return []
    pivots = {}
    active = list(range(len(cols)))
    for i in range(nrows - 1, -1, -1):
        nz = [j for j in active if cols[j][i] != 0]
        if not nz:
            continue
        # smallest entry first keeps cofactors small
        nz.sort(key=lambda j: abs(cols[j][i]))
        p = nz[0]
        for j in nz[1:]:
            a, b = cols[p][i], cols[j][i]
            g, u, v = _xgcd(a, b)
            cp, cj = cols[p], cols[j]
            ag, bg = a // g, b // g
            cols[p] = [u * x + v * y for x, y in zip(cp, cj)]
            cols[j] = [bg * x - ag * y for x, y in zip(cp, cj)]
        if cols[p][i] < 0:
            cols[p] = [-x for x in cols[p]]
        pivots[i] = p
        active = [j for j in active if j != p and any(cols[j])]
    _reduce_upper(cols, pivots)
    keep = [pivots[i] for i in sorted(pivots)]
    return [[cols[j][r] for j in keep] for r in range(nrows)]


def hnf_mod(M, D):
    """HNF of a full-rank lattice known to contain ``D * Z^n``.

    All intermediate entries are kept reduced modulo ``D`` which keeps
    coefficient growth bounded.  ``M`` holds generators as columns.
    """
    n = len(M)
    D = abs(D)
    if D == 0:
        raise ValueError("modulus must be nonzero")
    cols = [[x % D for x in c] for c in _columns(M)]
    cols = [c for c in cols if any(c)]
    piv = {}
    for i in range(n - 1, -1, -1):
        nz = [c for c in cols if c[i] % D]
        rest = [c for c in cols if not c[i] % D]
        P = [0] * n
        P[i] = D
        pending = []
        for c in nz:
            a, b = P[i], c[i]
            g, u, v = _xgcd(a, b)
            ag, bg = a // g, b // g
            newP = [(u * x + v * y) for x, y in zip(P, c)]
            other = [(bg * x - ag * y) % D for x, y in zip(P, c)]
            P = newP
            P[i] = g
            P = [x % D if r != i else x for r, x in enumerate(P)]
            if any(other):
                pending.append(other)
        if P[i] == 0:
            P[i] = D
        # D * e_i combined with P; keep the complementary vector too
        g, u, v = _xgcd(P[i], D)
        if g != P[i]:
            comp = [(D // g) * x % D for x in P]
            comp[i] = 0
            P = [(u * x) % D for x in P]
            P[i] = g
            if any(comp):
                pending.append(comp)
        piv[i] = P
        cols = [c for c in rest + pending if any(c[:i])]
        for c in cols:
            c[i] = 0
    H = [piv[i] for i in range(n)]
    for j in range(n):
        for r in range(j + 1, n):
            H[j][r] = 0
    # final off-diagonal reduction, exact
    for j in range(n):
        cj = H[j]
        for i in range(j - 1, -1, -1):
            q = cj[i] // H[i][i]
            if q:
                ci = H[i]
                for r in range(i + 1):
                    cj[r] -= q * ci[r]
    return [[H[j][r] for j in range(n)] for r in range(n)]


def hnf_det(H):
    d = 1
    for i in range(min(len(H), len(H[0]) if H else 0)):
        d *= H[i][i]
    return d


def det_bareiss(M):
    """Exact determinant by fraction-free elimination."""
    n = len(M)
    if n == 0:
        return 1
    A = [list(r) for r in M]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for r in range(k + 1, n):
                if A[r][k] != 0:
                    A[k], A[r] = A[r], A[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = A[k][k]
        rowk = A[k]
        for i in range(k + 1, n):
            ai = A[i]
            aik = ai[k]
            for j in range(k + 1, n):
                ai[j] = (ai[j] * akk - aik * rowk[j]) // prev
        prev = akk
    return sign * A[n - 1][n - 1]


def smith_form(M):
    """Smith normal form with transforms.

    Returns ``(diag, U, V)`` with ``U * M * V`` diagonal, ``U`` and ``V``
    unimodular and ``diag`` the non-negative diagonal entries (length
    ``min(rows, cols)``) forming a divisor chain.
    """
    m = len(M)
    n = len(M[0]) if m else 0
    A = [list(r) for r in M]
    U = identity(m)
    V = identity(n)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for R in A:
            R[i], R[j] = R[j], R[i]
        for R in V:
            R[i], R[j] = R[j], R[i]

    t = 0
    while t < min(m, n):
        # pick the smallest nonzero entry in the trailing block
        best = None
        for i in range(t, m):
            Ai = A[i]
            for j in range(t, n):
                x = Ai[j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            done = True
            p = A[t][t]
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // p
                    Ai, At = A[i], A[t]
                    for k in range(t, n):
                        Ai[k] -= q * At[k]
                    Ui, Ut = U[i], U[t]
                    for k in range(m):
                        Ui[k] -= q * Ut[k]
                    if A[i][t]:
                        done = False
            for j in range(t + 1, n):
                if A[t][j]:
                    q = A[t][j] // p
                    for R in A:
                        R[j] -= q * R[t]
                    for R in V:
                        R[j] -= q * R[t]
                    if A[t][j]:
                        done = False
            if done:
                # enforce divisibility into the trailing block
                bad = None
                for i in range(t + 1, m):
                    for j in range(t + 1, n):
                        if A[i][j] % p:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                Ab, At = A[bad], A[t]
                for k in range(t, n):
                    At[k] += Ab[k]
                Ub, Ut = U[bad], U[t]
                for k in range(m):
                    Ut[k] += Ub[k]
                continue
            # move the smallest entry of row/column t to the pivot
            best = (abs(A[t][t]), t, t)
            for i in range(t + 1, m):
                if A[i][t] and abs(A[i][t]) < best[0]:
                    best = (abs(A[i][t]), i, t)
            for j in range(t + 1, n):
                if A[t][j] and abs(A[t][j]) < best[0]:
                    best = (abs(A[t][j]), t, j)
            _, i, j = best
            if i != t:
                swap_rows(t, i)
            if j != t:
                swap_cols(t, j)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    diag = [A[i][i] for i in range(min(m, n))]
    return diag, U, V


def snf_invariants(M):
    """Nonzero Smith invariants ``d_1 | d_2 | ...`` of an integer matrix.

    >>> snf_invariants([[2, 0], [0, 3]])
    [1, 6]
    """
    if not M or not M[0]:
        return []
    diag, _, _ = smith_form(M)
    return [d for d in diag if d]


def lll_reduce(basis, gram=None, delta=Fraction(99, 100), transform=False):
    """LLL-reduce the rows of ``basis`` with respect to ``gram``.

    ``gram`` is the symmetric matrix of the ambient quadratic form
    (integer or rational entries); the identity when omitted.  Exact
    rational arithmetic throughout.  With ``transform=True`` the
    unimodular matrix ``T`` with ``T * basis = reduced`` is returned too.
    """
    B = [list(r) for r in basis]
    k = len(B)
    if k == 0:
        return ([], []) if transform else []
    dim = len(B[0])
    if gram is None:
        G = [[sum(a * b for a, b in zip(B[i], B[j])) for j in range(k)] for i in range(k)]
    else:
        GB = [[sum(Fraction(gram[r][c]) * B[i][c] for c in range(dim)) for r in range(dim)] for i in range(k)]
        G = [[sum(GB[i][r] * B[j][r] for r in range(dim)) for j in range(k)] for i in range(k)]
    red, T = lll_gram(G, delta)
    out = [[sum(T[i][j] * B[j][c] for j in range(k)) for c in range(dim)] for i in range(k)]
    return (out, T) if transform else out


def lll_gram(G, delta=Fraction(99, 100)):
    """LLL on a Gram matrix; returns (reduced Gram, transform rows).

    Integer Gram matrices use the integral (fraction-free) variant;
    rational ones are scaled to integers first.
    """
    k = len(G)
    den = 1
    for row in G:
        for x in row:
            if isinstance(x, Fraction):
                den = den * x.denominator // gcd(den, x.denominator)
    Gi = [[int(Fraction(x) * den) for x in row] for row in G]
    T = identity(k)
    Gi, T = _lll_integral(Gi, T, Fraction(delta))
    return [[Fraction(x, den) for x in row] for row in Gi], T


def _lll_integral(G, H, delta):
    """Integral LLL on a Gram matrix (Cohen, Algorithm 2.6.7)."""
    n = len(G)
    G = [list(r) for r in G]
    d = [0] * (n + 1)
    lam = [[0] * n for _ in range(n)]
    d[0] = 1
    if G[0][0] <= 0:
        raise NotPositiveDefinite("Gram matrix is not positive definite")
    d[1] = G[0][0]
    kmax = 0
    k = 1
    dn, dd = delta.numerator, delta.denominator

    def swap_gram(i, j):
        G[i], G[j] = G[j], G[i]
        for r in G:
            r[i], r[j] = r[j], r[i]

    def _size_reduce(k, l):
        dl1 = d[l + 1]
        if 2 * abs(lam[k][l]) > dl1:
            q = (2 * lam[k][l] + dl1) // (2 * dl1)
            H[k] = [a - q * b for a, b in zip(H[k], H[l])]
            Gkl = G[k][l]
            Gll = G[l][l]
            Gkk = G[k][k]
            rowl = G[l]
            newrow = [G[k][i] - q * rowl[i] for i in range(n)]
            newkk = Gkk - 2 * q * Gkl + q * q * Gll
            newrow[k] = newkk
            G[k] = newrow
            for i in range(n):
                G[i][k] = newrow[i]
            lam[k][l] -= q * dl1
            for i in range(l):
                lam[k][i] -= q * lam[l][i]

    def swapk(k):
        H[k], H[k - 1] = H[k - 1], H[k]
        swap_gram(k, k - 1)
        for j in range(k - 1):
            lam[k][j], lam[k - 1][j] = lam[k - 1][j], lam[k][j]
        lmb = lam[k][k - 1]
        B = (d[k - 1] * d[k + 1] + lmb * lmb) // d[k]
        for i in range(k + 1, kmax + 1):
            t = lam[i][k]
            lam[i][k] = (d[k + 1] * lam[i][k - 1] - lmb * t) // d[k]
            lam[i][k - 1] = (B * t + lmb * lam[i][k]) // d[k + 1]
        d[k] = B

    while k < n:
        if k > kmax:
            kmax = k
            for j in range(k + 1):
                u = G[k][j]
                for i in range(j):
                    u = (d[i + 1] * u - lam[k][i] * lam[j][i]) // d[i]
                if j < k:
                    lam[k][j] = u
                else:
                    if u <= 0:
                        raise NotPositiveDefinite("Gram matrix is not positive definite")
                    d[k + 1] = u
        _size_reduce(k, k - 1)
        # Lovasz condition in integral form
        if dd * d[k + 1] * d[k - 1] < dn * d[k] * d[k] - dd * lam[k][k - 1] ** 2:
            swapk(k)
            k = max(1, k - 1)
        else:
            for l in range(k - 2, -1, -1):
                _size_reduce(k, l)
            k += 1
    return G, H
