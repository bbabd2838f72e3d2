"""S-ramified abelian p-extensions of real quadratic fields at finite level.

With p not dividing the class number, class field theory gives the exact
sequence

    E(k') (x) Z_p  ->  sum_{q in S} R(q)  ->  X_S(k')  ->  0,

R(q) the Sylow p-subgroup of (O/q)^*.  Everything is computed by brute
force in the residue fields, which are tiny here.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .classgroup.abelian import AbelianGroupSNF, group_from_relations
from .nf.primes import prime_decomposition
from .units import _pow_mod, fundamental_unit

__all__ = ["RayData", "ray_data", "xs_finite_level", "x_q_trivial", "check_thm16", "Thm16Report"]


def _ppart(m, p):
    q = 1
    while m % p == 0:
        m //= p
        q *= p
    return q


def _class_number(K):
    cache = K.__dict__.setdefault("_h_cache", {})
    if "h" not in cache:
        from .classgroup.general import general_class_group

        cache["h"] = general_class_group(K).order
    return cache["h"]


def _require_p_prime_to_h(K, p):
    h = _class_number(K)
    if h % p == 0:
        raise ValueError(f"p = {p} divides the class number {h}; the unit sequence does not compute X_S")


class _Residue:
    """Sylow-p part of (O/P)^* with a brute-force discrete logarithm."""

    def __init__(self, K, P, p):
        self.K, self.P, self.p = K, P, p
        q = P.p
        self.size = q ** P.f
        self.order = _ppart(self.size - 1, p)
        self.cof = (self.size - 1) // self.order
        self.gen = None
        if self.order > 1:
            self.gen = self._find_generator()
            self.table = {}
            x = [1] + [0] * (K.n - 1)
            for i in range(self.order):
                self.table[self._key(x)] = i
                x = [c % q for c in _mulq(K, x, self.gen, q)]

    def _key(self, x):
        # canonical representative mod P via the HNF (upper triangular columns)
        H = self.P.hnf
        w = list(x)
        for i in range(len(w) - 1, -1, -1):
            h = H[i][i]
            qt = w[i] // h
            if qt:
                for r in range(i + 1):
                    w[r] -= qt * H[r][i]
        return tuple(w)

    def _is_one(self, y):
        return self._key([y[0] - 1] + list(y[1:])) == tuple([0] * len(y))

    def _find_generator(self):
        K, q, p = self.K, self.P.p, self.p
        n = K.n
        for coords in itertools.product(range(q), repeat=n):
            if not any(coords) or self.P.contains(list(coords)):
                continue
            h = _pow_mod(K.table, list(coords), self.cof, q)
            if not self._is_one(_pow_mod(K.table, h, self.order // p, q)):
                return h
        raise ArithmeticError("no generator of the p-part found")

    def dlog(self, u):
        if self.order == 1:
            return 0
        y = _pow_mod(self.K.table, [int(c) % self.P.p for c in u], self.cof, self.P.p)
        return self.table[self._key(y)]


def _mulq(K, x, y, q):
    from .nf.field import _mul_coords

    return _mul_coords(K.table, x, y)


@dataclass
class RayData:
    field: object
    S: list
    p: int
    residues: list  # [(q, _Residue)] one entry per prime above each q
    unit_images: list  # exponent vectors of -1 and eps

    @property
    def invariants(self):
        return [r.order for _, r in self.residues]


def ray_data(K, S, p=3):
    if K.n != 2 or K.signature != (2, 0):
        raise ValueError("a real quadratic field is required")
    residues = []
    for q in S:
        dec = prime_decomposition(K, int(q))
        if any(e > 1 for _, e, _ in dec):
            raise ValueError(f"{q} ramifies in the field")
        for P, _, _ in dec:
            residues.append((int(q), _Residue(K, P, p)))
    eps = fundamental_unit(K).element
    units = [[-1, 0], [int(c) for c in eps.coords]]
    images = [[r.dlog(u) for _, r in residues] for u in units]
    return RayData(K, [int(q) for q in S], p, residues, images)


def xs_finite_level(K, S, p=3):
    """p-part of the S-ramified abelian Galois group of k' (SNF)."""
    _require_p_prime_to_h(K, p)
    rd = ray_data(K, S, p)
    inv = rd.invariants
    m = len(inv)
    if m == 0:
        return AbelianGroupSNF([], certification="exact")
    rows = [[d * int(i == j) for j in range(m)] for i, d in enumerate(inv)] + rd.unit_images
    G = group_from_relations(rows, m, labels=[q for q, _ in rd.residues])
    G.certification = "exact"
    G.data["ray"] = rd
    return G


def x_q_trivial(K, q, p=3):
    """True iff the unit map onto R(q) is surjective for an inert prime q."""
    _require_p_prime_to_h(K, p)
    dec = prime_decomposition(K, int(q))
    if len(dec) != 1 or dec[0][1] != 1:
        raise ValueError(f"{q} is not inert")
    rd = ray_data(K, [q], p)
    res = rd.residues[0][1]
    if res.order == 1:
        raise ValueError(f"R({q}) is trivial: |residue field| - 1 is prime to {p}")
    return xs_finite_level(K, [q], p).order == 1


@dataclass
class Thm16Report:
    field: str
    S: list
    p: int
    flags: dict = field(default_factory=dict)  # q -> {inert, minus_one_mod_p, square_not_one_mod_p2}
    x_trivial: dict = field(default_factory=dict)  # q -> bool or None
    global_flags: dict = field(default_factory=dict)
    pair: tuple | None = None
    failing: list = field(default_factory=list)
    xs_invariants: list | None = None
    verdict: str = "does-not-fire"
    conclusion: str = ""

    @property
    def fires(self):
        return self.verdict == "fires"

    def as_dict(self):
        return {
            "field": self.field,
            "S": self.S,
            "p": self.p,
            "flags": {str(q): v for q, v in self.flags.items()},
            "x_trivial": {str(q): v for q, v in self.x_trivial.items()},
            "global_flags": self.global_flags,
            "pair": list(self.pair) if self.pair else None,
            "failing": self.failing,
            "xs_invariants": self.xs_invariants,
            "verdict": self.verdict,
            "conclusion": self.conclusion,
            "ordering_note": "S is treated as unordered; the first pair (in the given order) with trivial X_q serves as q1, q2",
        }

    def table(self):
        lines = [f"field {self.field}, p = {self.p}, S = {self.S}"]
        lines.append(f"{'q':>6} {'inert':>6} {'q=-1(p)':>8} {'q^2!=1(p^2)':>12} {'X_q=1':>6}")
        for q in self.S:
            f = self.flags[q]
            lines.append(
                f"{q:>6} {str(f['inert']):>6} {str(f['minus_one_mod_p']):>8} "
                f"{str(f['square_not_one_mod_p2']):>12} {str(self.x_trivial.get(q)):>6}"
            )
        lines.append(f"pair: {self.pair}; verdict: {self.verdict}")
        if self.failing:
            lines.append("failing: " + "; ".join(self.failing))
        if self.conclusion:
            lines.append(self.conclusion)
        return "\n".join(lines)


def check_thm16(K, S, p=3):
    S = [int(q) for q in S]
    if len(S) < 3:
        raise ValueError("r >= 3 primes are required")
    if p % 2 == 0:
        raise ValueError("p must be odd")
    rep = Thm16Report(str(K.poly), S, p)
    dec_p = prime_decomposition(K, p)
    p_inert = len(dec_p) == 1 and dec_p[0][1] == 1
    h = _class_number(K)
    rep.global_flags = {"p_inert": p_inert, "p_prime_to_h": h % p != 0, "class_number": h}
    if not p_inert:
        rep.failing.append(f"{p} is not inert")
    if h % p == 0:
        rep.failing.append(f"{p} divides the class number {h}")
        rep.verdict = "inapplicable"
        return rep
    for q in S:
        dec = prime_decomposition(K, q)
        inert = len(dec) == 1 and dec[0][1] == 1
        fl = {
            "inert": inert,
            "minus_one_mod_p": q % p == p - 1,
            "square_not_one_mod_p2": (q * q) % (p * p) != 1,
        }
        rep.flags[q] = fl
        for name, ok in fl.items():
            if not ok:
                rep.failing.append(f"{q}: {name} fails")
        if inert and _ppart(q * q - 1, p) > 1:
            rep.x_trivial[q] = x_q_trivial(K, q, p)
        else:
            rep.x_trivial[q] = None
    for q1, q2 in itertools.combinations(S, 2):
        if rep.x_trivial.get(q1) and rep.x_trivial.get(q2):
            rep.pair = (q1, q2)
            break
    if rep.pair is None:
        rep.failing.append("no two primes with trivial X_q")
    if not rep.failing:
        rep.xs_invariants = xs_finite_level(K, S, p).invariants
        rep.verdict = "fires"
        rep.conclusion = (
            "X_S of the cyclotomic Z_p-extension is not a free pro-p group "
            f"(finite level X_S = (Z/{p})^{len(S) - 1}, via the rank bound for the limit)"
        )
    return rep
