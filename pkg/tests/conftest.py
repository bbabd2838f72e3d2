import functools
import time

import pytest

from ifl.kernel.poly import IntPolynomial
from ifl.nf.field import NumberField

ACCEPTANCE = {}
SECONDS = {}  # first-computation wall time of the cached helpers below


def record(n, ok, detail=""):
    """Store the outcome of acceptance criterion ``n`` for the summary."""
    ACCEPTANCE[n] = (ok, detail)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"CRITERION {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}")


def quadratic_field(D):
    """Q(sqrt D) from a fundamental discriminant."""
    if D % 4 == 0:
        f = IntPolynomial.from_high([1, 0, -D // 4])
    else:
        f = IntPolynomial.from_high([1, -1, (1 - D) // 4])
    return NumberField(f)


def field_of(*high):
    return NumberField(IntPolynomial.from_high(list(high)))


@functools.lru_cache(maxsize=None)
def cubic_fields(D):
    from ifl.cubic import enumerate_cubic_fields

    return tuple(enumerate_cubic_fields(D))


@functools.lru_cache(maxsize=None)
def tower_layer(D):
    from ifl.cubic import layer_field

    t = time.time()
    L = layer_field(cubic_fields(D)[0], 1)
    SECONDS[("tower_layer", D)] = time.time() - t
    return L


@functools.lru_cache(maxsize=None)
def layer_class_group(D, seed=0):
    from ifl.classgroup import general_class_group

    L = tower_layer(D)
    t = time.time()
    G = general_class_group(L.field, policy="heuristic", seed=seed)
    SECONDS[("layer_class_group", D, seed)] = time.time() - t
    return G


def c123_discriminants(lo=-3000, hi=-3):
    """Fundamental D in [lo, hi] with 3 non-split, 3 | h and cyclic Sylow-3."""
    from ifl.classgroup import quad_class_group, sylow_p
    from ifl.cubic import is_fundamental
    from ifl.iwasawa import kronecker

    out = []
    for D in range(hi, lo - 1, -1):
        if not is_fundamental(D) or kronecker(D, 3) == 1:
            continue
        if sylow_p(quad_class_group(D), 3).rank == 1:
            out.append(D)
    return out


@functools.lru_cache(maxsize=None)
def sweep_reports(lo=-3000):
    """Level-0 reports for every discriminant of :func:`c123_discriminants`."""
    t = time.time()
    reps = [analyzed(D) for D in c123_discriminants(lo)]
    SECONDS[("sweep", lo)] = time.time() - t
    return reps


@functools.lru_cache(maxsize=None)
def analyzed(D, depth=0, seed=0, only_poly=None):
    from ifl.criteria import analyze

    return analyze(D, 3, depth, "auto", seed, cache=None, only_poly=only_poly)


@pytest.fixture(scope="session")
def report_cache(tmp_path_factory):
    from ifl.criteria import ResultCache

    return ResultCache(str(tmp_path_factory.mktemp("ifl-cache")))
