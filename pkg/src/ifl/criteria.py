"""Non-freeness criteria for X(k_inf) and the end-to-end analysis pipeline.

Verdicts are three-valued.  "does-not-fire" never claims freeness: the
criteria only ever prove that a group is *not* free (or not Demuskin).
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
import time
from dataclasses import dataclass, field

FIRES = "fires"
INAPPLICABLE = "inapplicable"
DOES_NOT_FIRE = "does-not-fire"
CONSISTENT = "consistent"

__all__ = [
    "Verdict",
    "thm11_check",
    "thm12_check",
    "thm26_check",
    "prop31_check",
    "cor14_check",
    "lemma19_rank",
    "hypothetical_lambda_K",
    "analyze",
    "CriterionReport",
    "ResultCache",
    "DataIntegrityError",
    "InconsistencyError",
    "FIRES",
    "INAPPLICABLE",
    "DOES_NOT_FIRE",
    "CONSISTENT",
]


class DataIntegrityError(ArithmeticError):
    """An upstream computation contradicts a proved inequality."""


class InconsistencyError(ArithmeticError):
    """Two engine outputs contradict a proved equivalence."""


@dataclass
class Verdict:
    name: str
    status: str
    instance: str = ""
    note: str = ""
    inputs: dict = field(default_factory=dict)

    @property
    def fires(self):
        return self.status == FIRES

    def as_dict(self):
        return {"name": self.name, "status": self.status, "instance": self.instance, "note": self.note, "inputs": self.inputs}


def thm11_check(lk, lF, p=3):
    """lambda(F) <= ((p-1) lambda(k) - p)/2 with lambda(k) >= 2 gives non-freeness."""
    inputs = {"lambda_k": lk, "lambda_F": lF, "p": p}
    if lk < 2:
        return Verdict("thm11", INAPPLICABLE, note="requires lambda(k) >= 2", inputs=inputs)
    if lF is None:
        return Verdict("thm11", DOES_NOT_FIRE, note="lambda(F) not determined", inputs=inputs)
    rhs = (p - 1) * lk - p
    if 2 * lF <= rhs:
        return Verdict("thm11", FIRES, f"2*{lF} <= ({p}-1)*{lk} - {p} = {rhs}", inputs=inputs)
    return Verdict("thm11", DOES_NOT_FIRE, f"2*{lF} > ({p}-1)*{lk} - {p} = {rhs}", inputs=inputs)


def thm12_check(d_orders):
    """Non-freeness (p = 3) as soon as some D(F_n) is nontrivial."""
    d_orders = list(d_orders)
    inputs = {"d_orders": d_orders}
    for n, d in enumerate(d_orders):
        if d is not None and d > 1:
            return Verdict("thm12", FIRES, f"|D(F_{n})| = {d} > 1", inputs=inputs)
    return Verdict("thm12", DOES_NOT_FIRE, "all computed |D(F_n)| = 1", note="inconclusive, not a freeness claim", inputs=inputs)


def thm26_check(lk, lF, p=3):
    """Not Demuskin: by parity when lambda(k) is odd, else by the lambda(F) bound."""
    inputs = {"lambda_k": lk, "lambda_F": lF, "p": p}
    if lk % 2 == 1:
        return Verdict("thm26", FIRES, f"lambda(k) = {lk} is odd; a Demuskin group has even generator rank", inputs=inputs)
    if lk < 4:
        note = "lambda(k) = 2 is covered by Okano's criterion (cited, not recomputed)" if lk == 2 else "requires lambda(k) >= 4"
        return Verdict("thm26", INAPPLICABLE, note=note, inputs=inputs)
    if lF is None:
        return Verdict("thm26", DOES_NOT_FIRE, note="lambda(F) not determined", inputs=inputs)
    rhs = (p - 1) * lk - 2 * p
    if 2 * lF <= rhs:
        return Verdict("thm26", FIRES, f"2*{lF} <= ({p}-1)*{lk} - 2*{p} = {rhs}", inputs=inputs)
    return Verdict("thm26", DOES_NOT_FIRE, f"2*{lF} > ({p}-1)*{lk} - 2*{p} = {rhs}", inputs=inputs)


def prop31_check(a_order, eF, d_orders, p=3):
    """lambda(F) = 0 when |D(F_n)| = |A(F)| p^(e(F)-1) at some level."""
    bound = a_order * p ** (eF - 1)
    d_orders = list(d_orders)
    inputs = {"A_F_order": a_order, "e_F": eF, "d_orders": d_orders}
    for n, d in enumerate(d_orders):
        if d is not None and d > bound:
            raise DataIntegrityError(f"|D(F_{n})| = {d} exceeds |A(F)| * {p}^(e(F)-1) = {bound}")
    for n, d in enumerate(d_orders):
        if d == bound:
            return Verdict("prop31", FIRES, f"|D(F_{n})| = {d} = {a_order}*{p}^({eF}-1)", note="lambda(F) = 0", inputs=inputs)
    return Verdict("prop31", DOES_NOT_FIRE, f"max |D(F_n)| = {max([d for d in d_orders if d] or [1])} < {bound}", inputs=inputs)


def cor14_check(eF, lk, c3_holds):
    """(lambda(k) = 1) <=> (e(F) = 1) under (C1)-(C3)."""
    inputs = {"e_F": eF, "lambda_k": lk, "c3": c3_holds}
    if not c3_holds:
        return Verdict("cor14", INAPPLICABLE, note="A(k) is not cyclic", inputs=inputs)
    if (lk == 1) != (eF == 1):
        raise InconsistencyError(f"lambda(k) = {lk} but e(F) = {eF}")
    return Verdict("cor14", CONSISTENT, f"lambda(k) = {lk}, e(F) = {eF}", inputs=inputs)


def lemma19_rank(dG, index, kind="free", p=None):
    """Generator rank of an open subgroup of index ``index`` (a prime power).

    >>> lemma19_rank(2, 3, "free"), lemma19_rank(4, 3, "demuskin")
    (4, 8)
    """
    if index < 1 or _prime_power_base(index) is None:
        raise ValueError("index must be a prime power")
    if kind == "free":
        if dG < 1:
            raise ValueError("d(G) >= 1 required")
        return index * (dG - 1) + 1
    if kind == "demuskin":
        if dG < 2:
            raise ValueError("d(G) >= 2 required")
        return index * (dG - 2) + 2
    raise ValueError(f"unknown kind {kind!r}")


def _prime_power_base(q):
    if q == 1:
        return 1
    for b in range(2, q + 1):
        if q % b == 0:
            while q % b == 0:
                q //= b
            return b if q == 1 else None
    return None


def hypothetical_lambda_K(lk, p=3):
    """lambda(K) forced by freeness of X(k_inf): p lambda(k) - p + 1."""
    return lemma19_rank(lk, p, "free")


# ---------------------------------------------------------------------------
def _version():
    from . import __version__

    return __version__


@dataclass
class CriterionReport:
    request: dict
    invariants: dict
    verdicts: dict
    certification: dict
    timings: dict
    version: str

    def as_dict(self):
        return {
            "request": self.request,
            "invariants": self.invariants,
            "verdicts": self.verdicts,
            "certification": self.certification,
            "timings": self.timings,
            "version": self.version,
        }

    def to_json(self, indent=2):
        return json.dumps(self.as_dict(), sort_keys=True, indent=indent)

    @classmethod
    def from_json(cls, text):
        d = json.loads(text)
        return cls(**{k: d[k] for k in ("request", "invariants", "verdicts", "certification", "timings", "version")})

    def csv_rows(self):
        inv = self.invariants
        rows = []
        for f in inv.get("fields", []):
            v = self.verdicts["per_field"].get(f["poly"], {})
            rows.append(
                {
                    "D": inv["disc"],
                    "F": f["poly"],
                    "A(k)": "x".join(map(str, inv.get("A_k", []))) or "1",
                    "lambda(k)": inv.get("lambda_k"),
                    "|A(F)|": f.get("A_F_order"),
                    "e(F)": f.get("e_F"),
                    "|D(F_n)|": "/".join(str(d) for d in f.get("d_orders", [])),
                    "lambda(F)": f.get("lambda_F_status"),
                    **{name: v.get(name, {}).get("status", "") for name in ("thm11", "thm12", "thm26", "prop31")},
                }
            )
        return rows

    def to_csv(self):
        import csv
        import io

        rows = self.csv_rows()
        buf = io.StringIO()
        cols = ["D", "F", "A(k)", "lambda(k)", "|A(F)|", "e(F)", "|D(F_n)|", "lambda(F)", "thm11", "thm12", "thm26", "prop31"]
        w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow(r)
        return buf.getvalue()


class ResultCache:
    """Content-addressed JSON files; writes go through a temp file and a rename."""

    def __init__(self, root=None):
        self.root = root or os.environ.get("IFL_CACHE_DIR", ".ifl-cache")

    @staticmethod
    def key(request, version):
        blob = json.dumps({"request": request, "version": version}, sort_keys=True)
        return hashlib.sha256(blob.encode()).hexdigest()

    def _path(self, key):
        return os.path.join(self.root, key + ".json")

    def get(self, request, version):
        path = self._path(self.key(request, version))
        try:
            with open(path) as fh:
                entry = json.load(fh)
        except (OSError, ValueError):
            return None
        if entry.get("version") != version or entry.get("request") != request:
            return None
        return CriterionReport(**{k: entry["report"][k] for k in ("request", "invariants", "verdicts", "certification", "timings", "version")})

    def put(self, report):
        os.makedirs(self.root, exist_ok=True)
        key = self.key(report.request, report.version)
        entry = {"key": key, "request": report.request, "version": report.version, "created": time.time(), "report": report.as_dict()}
        fd, tmp = tempfile.mkstemp(dir=self.root, suffix=".tmp")
        with os.fdopen(fd, "w") as fh:
            json.dump(entry, fh, sort_keys=True)
        os.replace(tmp, self._path(key))
        return key


def _ppart_invariants(invs, p):
    out = []
    for d in invs:
        q = 1
        while d % p == 0:
            d //= p
            q *= p
        if q > 1:
            out.append(q)
    return out


def _prod(xs):
    o = 1
    for x in xs:
        o *= x
    return o


def analyze(D, p=3, depth=1, policy="auto", seed=0, cache=None, only_poly=None):
    """Full pipeline for Q(sqrt D); see :class:`CriterionReport` for the layout.

    ``cache`` is a :class:`ResultCache` (or None to disable caching).
    ``only_poly`` restricts the per-field work to a single cubic polynomial.
    """
    from .classgroup.abelian import sylow_p
    from .classgroup.general import ClassGroupInconclusive, d_order_by_principality, d_subgroup_order, general_class_group
    from .classgroup.quadratic import quad_class_group
    from .cubic import TowerLayer, enumerate_cubic_fields, layer_field, normalize_discriminant
    from .iwasawa import kronecker, lambda_invariant
    from .units import e_of_F

    if p != 3:
        raise ValueError("the criteria are implemented for p = 3")
    request = {"disc": int(D), "p": p, "depth": int(depth), "policy": policy, "seed": int(seed), "only_poly": only_poly}
    version = _version()
    if cache is not None:
        hit = cache.get(request, version)
        if hit is not None:
            return hit
    t_all = time.time()
    timings = {}
    cert = {}
    disc, note = normalize_discriminant(int(D))
    inv = {"disc": disc, "input": int(D), "normalization": note}

    t = time.time()
    Ck = quad_class_group(disc)
    timings["class_group_k"] = time.time() - t
    Ak = _ppart_invariants(Ck.invariants, p)
    inv["class_group_k"] = list(Ck.invariants)
    inv["A_k"] = Ak
    c1 = kronecker(disc, p) != 1
    c2 = bool(Ak)
    c3 = len(Ak) == 1
    inv["conditions"] = {"C1": c1, "C2": c2, "C3": c3}
    verdicts = {"per_field": {}, "any_field": {}}
    if not (c1 and c2):
        verdicts["scope"] = "out of scope of the criteria: " + ("p splits in k" if not c1 else "p does not divide h(k)")
        timings["total"] = time.time() - t_all
        rep = CriterionReport(request, inv, verdicts, cert, timings, version)
        if cache is not None:
            cache.put(rep)
        return rep

    t = time.time()
    lam = lambda_invariant(disc, p, detail=True)
    timings["lambda_k"] = time.time() - t
    lk = lam.lam
    inv["lambda_k"] = lk
    inv["lambda_k_detail"] = {"steps": [list(s) for s in lam.steps], "twist": lam.twist}
    inv["hypothetical_lambda_K"] = hypothetical_lambda_K(lk, p)

    t = time.time()
    fields = enumerate_cubic_fields(disc)
    timings["cubic_fields"] = time.time() - t
    if only_poly is not None:
        from .cubic import cubic_fields_isomorphic
        from .kernel.poly import parse_polynomial
        from .nf.field import NumberField

        target = NumberField(parse_polynomial(only_poly))
        fields = [F for F in fields if cubic_fields_isomorphic(F, target)]
    fields.sort(key=lambda F: str(F.poly))
    inv["fields"] = []
    for F in fields:
        key = str(F.poly)
        fd = {"poly": key, "disc": F.disc, "disc_ok": F.disc == disc}
        fc = {}
        ft = {}
        t = time.time()
        G = general_class_group(F, policy="minkowski" if policy == "auto" else policy, seed=seed)
        ft["class_group"] = time.time() - t
        S3 = sylow_p(G, p)
        fd["class_group"] = list(G.invariants)
        fd["A_F"] = list(S3.invariants)
        fd["A_F_order"] = S3.order if S3.invariants else 1
        fc["class_group_F"] = G.certification
        t = time.time()
        eF = e_of_F(F)
        ft["e_F"] = time.time() - t
        fd["e_F"] = eF
        layer0 = TowerLayer(F, 0, F, p, [P for P, _, _ in _decomp(F, p)], [P for P, _, _ in _decomp(F, p)], None)
        d_orders = [d_subgroup_order(layer0, G, p)]
        a_n = [fd["A_F"]]
        fd["level_data"] = [{"n": 0, "A": fd["A_F"], "D_order": d_orders[0], "certification": G.certification}]
        for n in range(1, depth + 1):
            t = time.time()
            L = layer_field(F, n, p)
            try:
                Gn = general_class_group(L.field, policy="heuristic", seed=seed)
            except ClassGroupInconclusive as exc:
                fd["level_data"].append({"n": n, "inconclusive": str(exc)})
                d_orders.append(None)
                ft[f"level_{n}"] = time.time() - t
                continue
            dn = d_subgroup_order(L, Gn, p)
            An = _ppart_invariants(Gn.invariants, p)
            conf = _confirm_primes(L, Gn, p)
            direct = d_order_by_principality(L, p)
            fd["level_data"].append(
                {
                    "n": n,
                    "A": An,
                    "D_order": dn,
                    "D_order_direct": direct["order"],
                    "direct_check": direct,
                    "certification": Gn.certification,
                    "prime_checks": conf,
                    "field_disc": L.field.disc,
                }
            )
            if direct["order"] is not None and direct["order"] != dn:
                raise DataIntegrityError(f"|D(F_{n})| = {dn} from the class group but {direct['order']} from generator search")
            d_orders.append(dn)
            a_n.append(An)
            ft[f"level_{n}"] = time.time() - t
        fd["d_orders"] = d_orders
        pv = prop31_check(fd["A_F_order"], eF, d_orders, p)
        if pv.fires:
            lF = 0
            fd["lambda_F_status"] = "proven 0 (prop31)"
        else:
            lF = None
            fd["lambda_F_status"] = "unknown"
            for n in range(len(a_n) - 1):
                if len(a_n[n]) == len(a_n[n + 1]) and d_orders[n + 1] is not None:
                    lF_bound = len(a_n[n])
                    fd["lambda_F_status"] = f"bounded: lambda(F) <= {lF_bound} (Fukuda stabilisation of 3-ranks at n = {n})"
                    break
        fd["lambda_F"] = lF
        vd = {
            "thm11": thm11_check(lk, lF, p).as_dict(),
            "thm12": thm12_check(d_orders).as_dict(),
            "thm26": thm26_check(lk, lF, p).as_dict(),
            "prop31": pv.as_dict(),
            "cor14": cor14_check(eF, lk, c3).as_dict(),
        }
        verdicts["per_field"][key] = vd
        inv["fields"].append(fd)
        cert[key] = fc
        timings[key] = ft
    for name in ("thm11", "thm12", "thm26", "prop31"):
        sts = [verdicts["per_field"][k][name]["status"] for k in verdicts["per_field"]]
        if FIRES in sts:
            agg = FIRES
        elif sts and all(s == INAPPLICABLE for s in sts):
            agg = INAPPLICABLE
        else:
            agg = DOES_NOT_FIRE
        verdicts["any_field"][name] = agg
    cert["lambda_k"] = f"stable at two escalation steps {lam.steps[-2][:2]} -> {lam.steps[-1][:2]}"
    cert["class_group_k"] = "exact (binary quadratic forms)"
    timings["total"] = time.time() - t_all
    rep = CriterionReport(request, inv, verdicts, cert, timings, version)
    if cache is not None:
        cache.put(rep)
    return rep


def _decomp(F, p):
    from .nf.primes import prime_decomposition

    return prime_decomposition(F, p)


def _confirm_primes(L, G, p):
    """Class orders of the primes above p, with the p-th power principality
    confirmed by an explicit generator when one is found."""
    from .classgroup.general import ideal_class_order
    from .nf.principal import search_generator

    out = []
    for P in L.primes:
        o = ideal_class_order(P, G)
        gen = search_generator(P ** o) if o > 1 else None
        out.append(
            {
                "norm": P.norm,
                "class_order": o,
                "power_principal": o == 1 or gen is not None,
                "generator": [int(c) for c in gen] if gen is not None else None,
            }
        )
    return out

