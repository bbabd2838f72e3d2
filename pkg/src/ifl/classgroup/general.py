"""Class groups of general number fields (degree <= 9) by the relation method.

Relations come from short elements of LLL-reduced ideal lattices under
randomly weighted Minkowski forms; an element whose norm factors over the
small factor base gives one relation.  Primes between the small bound and
the full bound are each tied to smaller primes by one relation of their
own, so the small primes generate the group whenever the full bound does.

Two certification levels are recorded:

* ``minkowski-complete``: the factor base reaches the Minkowski bound and
  every nontrivial element of prime order in the computed group is shown
  non-principal by a complete enumeration (unit rank <= 1 only), so the
  computed group *is* the class group.
* ``heuristic(B)``: bound ``B = 12 log^2 |d|`` and the relation lattice is
  accepted once ``stable`` consecutive relations leave it unchanged.
"""

from __future__ import annotations

import logging
import math
import random
import time

from sympy import primerange

from ..kernel.intmat import det_bareiss, hnf_mod, hnf_det, lll_gram
from ..kernel.modlin import rank_mod_p
from ..nf.ideal import Ideal
from ..nf.primes import prime_decomposition
from ..nf.principal import NOT_PRINCIPAL, PRINCIPAL, is_principal
from .abelian import AbelianGroupSNF, group_from_relations

__all__ = ["general_class_group", "ClassGroupInconclusive", "FactorBase", "ideal_class_order", "d_subgroup_order"]

_BIGP = (1 << 61) - 1
log = logging.getLogger(__name__)


class ClassGroupInconclusive(ArithmeticError):
    def __init__(self, msg, partial=None):
        super().__init__(msg)
        self.partial = partial or {}


class FactorBase:
    """Prime ideals of norm <= bound; the first ``nsmall`` form the small base."""

    def __init__(self, K, bound, small_bound):
        self.field = K
        self.bound = bound
        self.small_bound = small_bound
        primes = []
        for p in primerange(2, int(bound) + 1):
            for P, e, f in prime_decomposition(K, int(p)):
                if p ** f <= bound:
                    primes.append(P)
        primes.sort(key=lambda P: (P.norm, P.p, P.hnf))
        self.primes = primes
        self.index = {id(P): i for i, P in enumerate(primes)}
        self.nsmall = sum(1 for P in primes if P.norm <= small_bound)
        self.rational = sorted({P.p for P in primes})
        self.above = {}
        for i, P in enumerate(primes):
            self.above.setdefault(P.p, []).append(i)

    def __len__(self):
        return len(self.primes)

    def factor(self, coords, limit=None):
        """Exponent vector (dict index -> valuation) of the principal ideal, or
        None when it is not smooth over primes of index < limit."""
        K = self.field
        limit = len(self.primes) if limit is None else limit
        N = abs(K.norm_int(coords))
        if N == 0:
            return None
        out = {}
        for p in self.rational:
            if N == 1:
                break
            if N % p:
                continue
            k = 0
            while N % p == 0:
                N //= p
                k += 1
            acc = 0
            for i in self.above[p]:
                if i >= limit:
                    continue
                P = self.primes[i]
                v = P._val_int(coords)
                if v:
                    out[i] = v
                    acc += v * P.f
            if acc != k:
                return None
        if N != 1:
            return None
        return out


def _t2_lll(I, K, weights):
    G = K.t2_gram(weights, scale_bits=40)
    B = I.basis()
    n = K.n
    GB = [[sum(G[r][c] * B[j][c] for c in range(n)) for r in range(n)] for j in range(n)]
    GI = [[sum(GB[j][r] * B[i][r] for r in range(n)) for j in range(n)] for i in range(n)]
    _, T = lll_gram(GI)
    return [[sum(T[i][k] * B[k][c] for k in range(n)) for c in range(n)] for i in range(n)]


def _candidates(red, rng, extra=6):
    out = list(red)
    n = len(red)
    for _ in range(extra):
        i, j = rng.randrange(n), rng.randrange(n)
        if i != j:
            s = rng.choice((1, -1))
            out.append([a + s * b for a, b in zip(red[i], red[j])])
    return out


class _Lattice:
    """Incremental relation lattice in Z^m (modular HNF once full rank)."""

    def __init__(self, m):
        self.m = m
        self.rows = []
        self.count = 0
        self.H = None
        self.det = None
        self._echelon = {}  # pivot -> row mod _BIGP

    def _independent(self, v):
        w = [x % _BIGP for x in v]
        for piv in sorted(self._echelon):
            if w[piv]:
                r = self._echelon[piv]
                f = w[piv]
                w = [(a - f * b) % _BIGP for a, b in zip(w, r)]
        for i, x in enumerate(w):
            if x:
                inv = pow(x, -1, _BIGP)
                self._echelon[i] = [a * inv % _BIGP for a in w]
                # keep echelon reduced at the new pivot
                for piv, r in list(self._echelon.items()):
                    if piv != i and r[i]:
                        f = r[i]
                        self._echelon[piv] = [(a - f * b) % _BIGP for a, b in zip(r, self._echelon[i])]
                return True
        return False

    @property
    def rank(self):
        return len(self._echelon)

    def contains(self, v):
        H = self.H
        m = self.m
        w = list(v)
        for i in range(m - 1, -1, -1):
            h = H[i][i]
            if w[i] % h:
                return False
            q = w[i] // h
            if q:
                for r in range(i + 1):
                    w[r] -= q * H[r][i]
        return True

    def add(self, v):
        """Add a relation; returns True when the lattice changed."""
        self.count += 1
        if self.H is None:
            self.rows.append(list(v))
            if self._independent(v) and self.rank == self.m:
                self._build()
                return True
            return self.rank < self.m
        if self.contains(v):
            return False
        cols = [[self.H[r][j] for r in range(self.m)] for j in range(self.m)] + [list(v)]
        self.H = hnf_mod([[c[r] for c in cols] for r in range(self.m)], self.det)
        self.det = hnf_det(self.H)
        return True

    def _build(self):
        m = self.m
        # determinant of an independent subset bounds the lattice index
        sel = []
        ech = {}
        for row in self.rows:
            trial = _Lattice(m)
            trial._echelon = dict(ech)
            if trial._independent(row):
                ech = trial._echelon
                sel.append(row)
            if len(sel) == m:
                break
        D = abs(det_bareiss(sel))
        M = [[row[r] for row in self.rows] for r in range(m)]
        self.H = hnf_mod(M, D)
        self.det = hnf_det(self.H)


def _minkowski_ok(K):
    return K.n <= 3


def general_class_group(K, policy="auto", seed=0, budget=10 ** 6, bound=None, small_bound=None, stable=None, unit=None, time_limit=None):
    """Class group of ``K`` with discrete-log support; see module docstring."""
    t0 = time.time()
    n = K.n
    d = abs(K.disc)
    if policy == "auto":
        policy = "minkowski" if _minkowski_ok(K) else "heuristic"
    if policy == "minkowski":
        B = int(math.floor(K.minkowski_bound()))
    elif policy == "heuristic":
        B = int(12 * math.log(d) ** 2) if d > 1 else 1
    else:
        raise ValueError(f"unknown policy {policy!r}")
    if bound is not None:
        B = int(bound)
    if small_bound is None:
        small_bound = B if n <= 4 else min(B, max(60, int(40 * n * math.log(max(d, 3)) ** 0.5)))
    stable = stable if stable is not None else (10 if n <= 3 else 30)
    FB = FactorBase(K, max(B, 1), small_bound)
    m = FB.nsmall
    rng = random.Random(seed)
    info = {
        "policy": policy,
        "bound": B,
        "small_bound": small_bound,
        "factor_base": len(FB),
        "small_base": m,
        "seed": seed,
    }
    if m == 0:
        G = AbelianGroupSNF([], [], [], [], True, _cert_label(policy, B, True))
        G.to_coords = lambda x: []
        G.data.update(info)
        G.data["factor_base_obj"] = FB
        return G

    log.info("factor base: %d primes (B=%d), small base %d (B0=%d)", len(FB), B, m, small_bound)
    lat = _Lattice(m)
    trials = 0

    def vec(fac):
        v = [0] * m
        for i, e in fac.items():
            v[i] = e
        return v

    # relations from rational primes whose primes all lie in the small base
    for p in FB.rational:
        idx = [i for i in FB.above[p] if i < m]
        dec = prime_decomposition(K, p)
        if len(idx) == len(dec):
            fac = FB.factor([p] + [0] * (n - 1), limit=m)
            if fac is not None:
                lat.add(vec(fac))
    quiet = 0
    lattices = 0
    r1, r2 = K.signature
    while True:
        if lat.H is not None and quiet >= stable:
            break
        if trials >= budget or (time_limit and time.time() - t0 > time_limit):
            raise ClassGroupInconclusive("relation search stalled", dict(info, relations=lat.count, rank=lat.rank))
        k = rng.randint(1, min(3, m))
        # the first factor cycles through the base so every prime gets relations
        picks = [lattices % m] + [rng.randrange(m) for _ in range(k - 1)]
        lattices += 1
        I = Ideal.unit(K)
        for i in picks:
            I = I * FB.primes[i]
        w = None if trials % 4 == 0 else [math.exp(rng.uniform(-1.5, 1.5)) for _ in range(r1 + r2)]
        try:
            red = _t2_lll(I, K, w)
        except Exception:
            trials += 1
            continue
        for y in _candidates(red, rng):
            trials += 1
            if not any(y):
                continue
            fac = FB.factor(y, limit=m)
            if fac is None:
                continue
            v = vec(fac)
            if not any(v):
                continue
            changed = lat.add(v)
            if changed and lat.H is not None:
                log.debug("relations %d, det %s", lat.count, lat.det)
            elif changed and lat.count % 20 == 0:
                log.debug("relations %d, rank %d/%d", lat.count, lat.rank, m)
            if lat.H is not None:
                quiet = 0 if changed else quiet + 1
    log.info("relation lattice stable: det %s after %d relations, %d trials", lat.det, lat.count, trials)
    info["relations"] = lat.count
    info["trials"] = trials

    # tie every larger prime to smaller ones
    expr = {}
    for qi in range(m, len(FB)):
        expr[qi] = _express_large(K, FB, qi, expr, m, rng, budget)
        if expr[qi] is None:
            raise ClassGroupInconclusive(f"no relation for prime of norm {FB.primes[qi].norm}", info)

    H = lat.H
    rows = [[H[r][j] for r in range(m)] for j in range(m)]
    certified = False
    unit_elt = unit
    while True:
        G = group_from_relations(rows, m, labels=list(range(m)))
        G.to_coords = _make_to_coords(K, FB, expr, m, rng)
        if policy != "minkowski":
            break
        extra = _certify(K, FB, G, m, unit_elt)
        if extra is None:
            certified = True
            break
        if extra == "uncertifiable":
            break
        rows.append(extra)
    G.certified = certified or policy == "minkowski" and G.order == 1 and _minkowski_ok(K)
    G.certification = _cert_label(policy, B, G.certified)
    G.witnesses = [_witness_ideal(K, FB, w, G) for w in G.witnesses]
    G.data.update(info)
    G.data["factor_base_obj"] = FB
    G.data["expr"] = expr
    G.data["seconds"] = time.time() - t0
    return G


def _cert_label(policy, B, certified):
    if policy == "minkowski":
        return "minkowski-complete" if certified else f"minkowski-uncertified(B={B})"
    return f"heuristic(B={B})"


def _express_large(K, FB, qi, expr, m, rng, budget):
    """Vector over the small base equivalent to the class of prime ``qi``."""
    Q = FB.primes[qi]
    n = K.n
    r1, r2 = K.signature
    for attempt in range(400):
        I = Q
        for _ in range(rng.randint(0, 2) if attempt else 0):
            I = I * FB.primes[rng.randrange(m)]
        w = None if attempt == 0 else [math.exp(rng.uniform(-1.5, 1.5)) for _ in range(r1 + r2)]
        red = _t2_lll(I, K, w)
        for y in _candidates(red, rng):
            fac = FB.factor(y, limit=qi + 1)
            if fac is None or fac.get(qi) != 1:
                continue
            v = [0] * m
            for i, e in fac.items():
                if i == qi:
                    continue
                if i < m:
                    v[i] -= e
                else:
                    v = [a - e * b for a, b in zip(v, expr[i])]
            return v
    return None


def _ideal_factor(K, FB, I, expr, m):
    """Vector over the small base for an ideal all of whose primes lie in FB."""
    N = I.norm
    v = [0] * m
    for p in FB.rational:
        if N == 1:
            break
        if N % p:
            continue
        while N % p == 0:
            N //= p
        for i in FB.above[p]:
            P = FB.primes[i]
            e = P.ideal_valuation(I)
            if e:
                if i < m:
                    v[i] += e
                else:
                    v = [a + e * b for a, b in zip(v, expr[i])]
    if N != 1:
        return None
    # every prime factor must have been seen: compare norms
    return v


def _make_to_coords(K, FB, expr, m, rng):
    def to_coords(I):
        if getattr(I, "field", None) is not K and I.field != K:
            raise ValueError("ideal of another field")
        tot = 1
        v = _ideal_factor(K, FB, I, expr, m)
        if v is not None and _norm_check(FB, I, m, expr):
            return v
        # smoothing: alpha in I with (alpha) I^{-1} smooth
        r1, r2 = K.signature
        for attempt in range(200):
            w = None if attempt == 0 else [math.exp(rng.uniform(-1.5, 1.5)) for _ in range(r1 + r2)]
            red = _t2_lll(I, K, w)
            for y in _candidates(red, rng):
                c = _smooth_quotient(K, FB, I, y, expr, m)
                if c is not None:
                    return c
        return None

    return to_coords


def _norm_check(FB, I, m, expr):
    # the ideal's norm must be fully explained by FB primes
    N = I.norm
    acc = 1
    for p in FB.rational:
        if N % p:
            continue
        for i in FB.above[p]:
            P = FB.primes[i]
            e = P.ideal_valuation(I)
            acc *= P.norm ** e
    return acc == N


def _smooth_quotient(K, FB, I, y, expr, m):
    """Coordinates of [I] from y in I with (y) = I*C and C smooth over FB:
    [I] = -[C] = -sum_P (v_P(y) - v_P(I)) [P]."""
    N = abs(K.norm_int(y))
    if N == 0 or N % I.norm:
        return None
    q = N // I.norm
    v = [0] * m
    for p in FB.rational:
        if q == 1:
            break
        if q % p:
            continue
        k = 0
        while q % p == 0:
            q //= p
            k += 1
        acc = 0
        for i in FB.above[p]:
            P = FB.primes[i]
            e = P._val_int(y) - P.ideal_valuation(I)
            if e:
                acc += e * P.f
                if i < m:
                    v[i] -= e
                else:
                    v = [a - e * b for a, b in zip(v, expr[i])]
        if acc != k:
            return None
    if q != 1:
        return None
    return v


def _ideal_from_vector(K, FB, vec, exponent):
    I = Ideal.unit(K)
    for i, e in enumerate(vec):
        e %= exponent
        if e:
            I = I * FB.primes[i] ** e
    return I


def _witness_ideal(K, FB, w, G):
    exponent = G.invariants[-1] if G.invariants else 1
    # prefer a single prime whose class is exactly this generator
    return _ideal_from_vector(K, FB, w, exponent)


def _certify(K, FB, G, m, unit):
    """None when every prime-order element of G is non-principal; a new
    relation row when one is principal; 'uncertifiable' otherwise."""
    if G.order == 1:
        return None
    if K.unit_rank > 1:
        return "uncertifiable"
    if K.unit_rank == 1 and unit is None:
        from ..units import fundamental_unit

        unit = fundamental_unit(K).element
    exponent = G.invariants[-1]
    from sympy import factorint

    for ell in sorted(factorint(G.order)):
        # generators of the ell-torsion: (d_i / ell) * e_i
        tors = [(i, G.invariants[i] // ell) for i, d in enumerate(G.invariants) if d % ell == 0]
        r = len(tors)
        # one representative per line of (Z/ell)^r
        import itertools

        for coeffs in itertools.product(range(ell), repeat=r):
            nz = [c for c in coeffs if c]
            if not nz or nz[0] != 1:
                continue
            snf = [0] * len(G.invariants)
            for (i, s), c in zip(tors, coeffs):
                snf[i] = s * c
            # back to coordinates over the small base
            vec = [sum(G.witnesses[i][j] * snf[i] for i in range(len(snf))) for j in range(m)]
            J = _ideal_from_vector(K, FB, vec, exponent)
            res = is_principal(J, unit=unit)
            if res.status == PRINCIPAL:
                v = [x % exponent for x in vec]
                fac = FB.factor([int(c) for c in res.generator.coords])
                if fac is None:
                    return "uncertifiable"
                rel = [0] * m
                for i2, e in fac.items():
                    if i2 >= m:
                        return "uncertifiable"
                    rel[i2] += e
                return rel
            if res.status != NOT_PRINCIPAL:
                return "uncertifiable"
    return None


def ideal_class_order(I, G):
    """Order of the class of ``I`` in ``G`` (discrete log)."""
    v = G.dlog(I)
    if v is None:
        raise ArithmeticError("discrete logarithm failed; enlarge the factor base")
    return G.element_order(v)


def d_subgroup_order(layer, G, p=3):
    """p-part of the order of the subgroup generated by the classes of the
    primes of the layer field above p."""
    from .abelian import subgroup_order

    vecs = []
    for P in layer.primes:
        v = G.dlog(P)
        if v is None:
            raise ArithmeticError("discrete logarithm failed for a prime above p")
        vecs.append(v)
    h = subgroup_order(G, vecs)
    q = 1
    while h % p == 0:
        h //= p
        q *= p
    return q


def d_order_by_principality(layer, p=3, sweeps=8):
    """|D(F_n)| from generator searches alone, without a class group.

    Every product prod P_i^{a_i} (0 <= a_i < p) of the primes above p is
    tested; products for which a generator is found give relations, and
    ``P_i^p`` must all be principal (checked the same way).  The answer
    treats "no generator found" as non-principal, so it is heuristic in
    that direction; found generators are exact.
    """
    import itertools

    from .abelian import AbelianGroupSNF, subgroup_order
    from ..nf.principal import search_generator

    primes = list(layer.primes)
    r = len(primes)
    out = {"primes": [P.norm for P in primes], "relations": [], "p_power_generators": []}
    for P in primes:
        g = search_generator(P ** p, sweeps=sweeps)
        out["p_power_generators"].append([int(c) for c in g] if g is not None else None)
    if any(g is None for g in out["p_power_generators"]):
        out["order"] = None
        out["status"] = "inconclusive: no generator for some P^p"
        return out
    rels = []
    K = layer.field
    for exps in itertools.product(range(p), repeat=r):
        if not any(exps):
            continue
        I = Ideal.unit(K)
        for P, a in zip(primes, exps):
            if a:
                I = I * P ** a
        g = search_generator(I, sweeps=sweeps)
        if g is not None:
            rels.append(list(exps))
            out["relations"].append({"exponents": list(exps), "generator": [int(c) for c in g]})
    G = AbelianGroupSNF([p] * r)
    out["order"] = G.order // subgroup_order(G, rels)
    out["status"] = "generators exact; non-principality of the remaining classes by failed search"
    return out
