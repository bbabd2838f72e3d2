"""Linear algebra over F_p and small exact rational helpers."""

from __future__ import annotations

from fractions import Fraction


def kernel_mod_p(M, p):
    """Basis of the right kernel of ``M`` over F_p (list of vectors)."""
    m = len(M)
    n = len(M[0]) if m else 0
    A = [[x % p for x in row] for row in M]
    pivcols = []
    r = 0
    for c in range(n):
        piv = None
        for i in range(r, m):
            if A[i][c]:
                piv = i
                break
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = pow(A[r][c], -1, p)
        A[r] = [x * inv % p for x in A[r]]
        for i in range(m):
            if i != r and A[i][c]:
                f = A[i][c]
                Ai, Ar = A[i], A[r]
                A[i] = [(a - f * b) % p for a, b in zip(Ai, Ar)]
        pivcols.append(c)
        r += 1
        if r == m:
            break
    free = [c for c in range(n) if c not in pivcols]
    basis = []
    for fc in free:
        v = [0] * n
        v[fc] = 1
        for i, pc in enumerate(pivcols):
            v[pc] = (-A[i][fc]) % p
        basis.append(v)
    return basis


def rank_mod_p(M, p):
    if not M:
        return 0
    n = len(M[0])
    return n - len(kernel_mod_p(M, p))


def solve_upper(H, den_rhs, rhs):
    """Solve ``H x = rhs / den_rhs`` for upper-triangular integer ``H``; exact."""
    n = len(H)
    x = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        s = Fraction(rhs[i], den_rhs)
        Hi = H[i]
        for j in range(i + 1, n):
            if Hi[j]:
                s -= Hi[j] * x[j]
        x[i] = s / Hi[i]
    return x


def solve_rational(A, b):
    """Solve a square nonsingular rational system exactly (Gauss-Jordan)."""
    n = len(A)
    M = [[Fraction(x) for x in row] + [Fraction(bi)] for row, bi in zip(A, b)]
    for c in range(n):
        piv = next(i for i in range(c, n) if M[i][c] != 0)
        M[c], M[piv] = M[piv], M[c]
        pv = M[c][c]
        M[c] = [x / pv for x in M[c]]
        for i in range(n):
            if i != c and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[c])]
    return [M[i][n] for i in range(n)]
