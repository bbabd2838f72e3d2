"""Class groups of imaginary quadratic fields via reduced binary quadratic forms."""

from __future__ import annotations

from math import gcd, isqrt

from .abelian import group_from_relations

__all__ = ["reduce_form", "compose", "reduced_forms", "quad_class_group", "form_power", "prime_form"]


def reduce_form(f):
    """Reduced representative of a positive definite form (a, b, c)."""
    a, b, c = f
    while True:
        if b > a or b <= -a:
            # normalise b into (-a, a]
            k = (a - b) // (2 * a)
            c = c + k * (b + k * a)
            b = b + 2 * k * a
        if a > c:
            a, b, c = c, -b, a
            continue
        if a == c and b < 0:
            b = -b
        return (a, b, c)


def _xgcd(a, b):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def compose(f1, f2):
    """Gauss composition of primitive positive definite forms (Cohen, Alg. 5.4.7), reduced."""
    a1, b1, c1 = f1
    a2, b2, c2 = f2
    if a1 > a2:
        a1, b1, c1, a2, b2, c2 = a2, b2, c2, a1, b1, c1
    s = (b1 + b2) // 2
    n = b2 - s
    if a1 % a2 == 0:
        y1, d = 0, a2
    else:
        d, u, _ = _xgcd(a2, a1)
        y1 = u
    if s % d == 0:
        y2, x2, d1 = -1, 0, d
    else:
        d1, x2, y2 = _xgcd(s, d)
        y2 = -y2
    v1 = a1 // d1
    v2 = a2 // d1
    r = (y1 * y2 * n - x2 * c2) % v1
    b3 = b2 + 2 * v2 * r
    a3 = v1 * v2
    c3 = (c2 * d1 + r * (b2 + v2 * r)) // v1
    return reduce_form((a3, b3, c3))


def form_power(f, e):
    D = f[1] ** 2 - 4 * f[0] * f[2]
    out = identity_form(D)
    b = f
    while e:
        if e & 1:
            out = compose(out, b)
        b = compose(b, b)
        e >>= 1
    return out


def identity_form(D):
    return (1, D % 2, (D % 2 - D) // 4)


def inverse_form(f):
    return reduce_form((f[0], -f[1], f[2]))


def reduced_forms(D):
    """All primitive reduced forms of discriminant ``D < 0``."""
    out = []
    a = 1
    while 3 * a * a <= -D:
        for b in range(-a + 1, a + 1):
            if (b * b - D) % (4 * a):
                continue
            c = (b * b - D) // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            if gcd(gcd(a, abs(b)), c) != 1:
                continue
            out.append((a, b, c))
        a += 1
    return sorted(out)


def prime_form(D, p):
    """Reduced form of norm ``p`` (the class of a prime above a split or ramified ``p``), or None."""
    p = int(p)
    for b in range(-p, p + 1):
        if (b * b - D) % (4 * p) == 0:
            return reduce_form((p, b, (b * b - D) // (4 * p)))
    return None


def quad_class_group(D):
    """Exact class group of the imaginary quadratic field of discriminant ``D``.

    Structure by successive subgroup extension over all reduced forms,
    then Smith normal form.  Witnesses are reduced forms; discrete logs of
    forms are supported.
    """
    from ..cubic import is_fundamental

    if D >= 0:
        raise ValueError("imaginary quadratic discriminants only")
    if not is_fundamental(D):
        raise ValueError(f"{D} is not a fundamental discriminant")
    forms = reduced_forms(D)
    e = identity_form(D)
    table = {e: []}
    gens = []
    rels = []
    for f in forms:
        if f in table:
            continue
        # smallest k with f^k in the current subgroup
        k = 1
        g = f
        while g not in table:
            g = compose(g, f)
            k += 1
        vec = table[g]
        j = len(gens)
        gens.append(f)
        rel = [-x for x in vec] + [0] * (j - len(vec)) + [k]
        rels.append(rel)
        new = {}
        for h, v in table.items():
            cur = h
            for i in range(k):
                new[cur] = list(v) + [0] * (j - len(v)) + [i]
                cur = compose(cur, f)
        table = new
    ng = len(gens)
    rows = [r + [0] * (ng - len(r)) for r in rels]
    G = group_from_relations(rows, ng, labels=gens)
    assert G.order == len(forms)
    G.witnesses = [_combine_forms(gens, w, D) for w in G.witnesses]
    G.certification = "exact (reduced forms)"

    def to_coords(f, _t=table, _n=ng):
        v = _t.get(reduce_form(f))
        return None if v is None else list(v) + [0] * (_n - len(v))

    G.to_coords = to_coords
    G.data["class_number"] = len(forms)
    return G


def _combine_forms(gens, w, D):
    out = identity_form(D)
    for g, e in zip(gens, w):
        if e < 0:
            g = inverse_form(g)
            e = -e
        out = compose(out, form_power(g, e))
    return out
