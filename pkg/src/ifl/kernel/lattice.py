"""Short-vector enumeration (Fincke-Pohst) on integer Gram matrices."""

from __future__ import annotations

import math

from .intmat import NotPositiveDefinite, lll_gram

__all__ = ["short_vectors", "quad_form"]


def quad_form(G, x):
    n = len(G)
    return sum(G[i][j] * x[i] * x[j] for i in range(n) for j in range(n))


def _cholesky_q(G):
    """Quadratic-form decomposition q with Q(x) = sum_i q_ii (x_i + sum_{j>i} q_ij x_j)^2 (floats)."""
    n = len(G)
    q = [[float(G[i][j]) for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            q[j][i] = q[i][j]
            q[i][j] = q[i][j] / q[i][i]
        for k in range(i + 1, n):
            for l in range(k, n):
                q[k][l] -= q[k][i] * q[i][l]
        if q[i][i] <= 0:
            raise NotPositiveDefinite("Gram matrix is not positive definite")
    return q


def short_vectors(G, bound, limit=None, reduce=True):
    """All nonzero integer ``x`` (one of each ``+-x``) with ``x^T G x <= bound``.

    ``G`` is an integer positive definite Gram matrix.  The search runs in
    floating point with a safety margin; every returned vector is checked
    exactly, so the output is exact and complete as long as the float
    margin covers rounding (it does by a wide factor for the small
    dimensions used here).  ``limit`` truncates the search; the second
    return value tells whether it was exhaustive.
    """
    n = len(G)
    if reduce:
        Gr, T = lll_gram(G)
        Gr = [[int(x) for x in row] for row in Gr]
    else:
        Gr, T = G, [[int(i == j) for j in range(n)] for i in range(n)]
    q = _cholesky_q(Gr)
    slack = 1e-9 * abs(bound) + 1e-6
    out = []
    complete = True
    x = [0] * n
    U = [0.0] * n
    Tr = [0.0] * n
    Lb = [0] * n
    i = n - 1
    Tr[i] = float(bound) + slack
    U[i] = 0.0

    def bounds(i):
        z = math.sqrt(max(Tr[i], 0.0) / q[i][i])
        lo = math.ceil(-z - U[i] - 1e-9)
        hi = math.floor(z - U[i] + 1e-9)
        return lo, hi

    lo, Lb[i] = bounds(i)
    x[i] = lo - 1
    while True:
        x[i] += 1
        if x[i] > Lb[i]:
            i += 1
            if i >= n:
                break
            continue
        if i > 0:
            t = x[i] + U[i]
            Tr[i - 1] = Tr[i] - q[i][i] * t * t
            i -= 1
            U[i] = sum(q[i][j] * x[j] for j in range(i + 1, n))
            lo, Lb[i] = bounds(i)
            x[i] = lo - 1
            continue
        if not any(x):
            # x = 0 reached: everything beyond is the negative of what we have seen
            break
        v = quad_form(Gr, x)
        if v <= bound:
            y = [sum(x[k] * T[k][c] for k in range(n)) for c in range(n)]
            out.append((v, y))
            if limit is not None and len(out) >= limit:
                complete = False
                break
    out.sort(key=lambda t: (t[0], [abs(c) for c in t[1]]))
    return [y for _, y in out], complete
