"""The acceptance matrix: nine checks over the built-in catalog.

Each ``criterion_*`` function returns a :class:`CriterionResult`; nothing
here asserts, so the CLI can report and the test-suite can decide.
"""

from __future__ import annotations

import functools
import itertools
import random
import time
from dataclasses import dataclass, field

import numpy as np

from .abgrp import AbHom, FiniteAbelianGroup, map_kernel, subquotient
from .assoc_group import abelianization, associated_group, tietze_reduce, verify_iso
from .catalog import default_catalog, rack_by_name, small_modules
from .cohomology import Complex, augmentation_check, coeff_action, two_cocycle_check
from .ext import _z2_b2, extract_module, h2_ext, semidirect
from .modules import XMap, orbit_module, trivial_module, validate_xmap
from .oracles import _candidates, brute_force_h2, candidate_count, extension_mask, factor_set_mask


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    seconds: float = 0.0
    limit: float | None = None
    checked: int = 0
    findings: list = field(default_factory=list)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        budget = f" (limit {self.limit:.0f} s)" if self.limit else ""
        extra = f"; {len(self.findings)} finding(s)" if self.findings else ""
        return (f"criterion {self.number}: {status} - {self.title}: {self.checked} checks "
                f"in {self.seconds:.1f} s{budget}{extra}")

    def to_json(self):
        return {"criterion": self.number, "title": self.title, "passed": self.passed,
                "seconds": round(self.seconds, 3), "limit": self.limit, "checked": self.checked,
                "findings": self.findings[:50]}


def _timed(number, title, limit=None):
    def deco(fn):
        @functools.wraps(fn)
        def run(*args, **kwargs):
            t0 = time.perf_counter()
            checked, findings = fn(*args, **kwargs)
            dt = time.perf_counter() - t0
            passed = not findings and (limit is None or dt < limit)
            if limit is not None and dt >= limit:
                findings = findings + [f"took {dt:.1f} s, over the {limit} s limit"]
            return CriterionResult(number, title, passed, dt, limit, checked, findings)
        return run
    return deco


# ---------------------------------------------------------------------------
# the instance matrix
# ---------------------------------------------------------------------------

@functools.lru_cache(maxsize=None)
def instance_matrix(max_n=4, max_order=9):
    """``(rack, module, action)`` for every catalog quandle and library module."""
    out = []
    for X in default_catalog(max_n):
        for M in small_modules(X, max_order):
            out.append((X, M, coeff_action(M)))
    return tuple(out)


def _label(X, M):
    return f"{X.name}/{getattr(M, 'name', '?')}"


# ---------------------------------------------------------------------------
# criteria
# ---------------------------------------------------------------------------

@_timed(1, "boundary squares to zero, degrees 2..4", limit=60)
def criterion_1(matrix=None, fault=None):
    """``fault="sign"`` flips the sign of one boundary block to show the check bites."""
    matrix = instance_matrix() if matrix is None else matrix
    checked, findings = 0, []
    for X, M, C in matrix:
        Cx = Complex(C)
        for n in (2, 3, 4):
            if fault == "sign" and n == 3 and C.k:
                B3 = _faulty_boundary(Cx, 3)
                B2 = Cx.boundary(2)
                ok = _product_vanishes(Cx, B3, B2, 2)
            else:
                ok = Cx.dd_zero(n)
            checked += 1
            if not ok:
                findings.append(f"{_label(X, M)}: d_{n - 1} d_{n} != 0")
    return checked, findings


def _faulty_boundary(Cx, n):
    """``d_n`` with the sign of its first face term negated for every word."""
    from .cohomology import _compile, boundary_terms

    X = Cx.X
    rows = []
    for w in itertools.product(range(X.n), repeat=n):
        terms = boundary_terms(X, w, Cx.p)
        kind, a, b, sign, rest = terms[0]
        terms[0] = (kind, a, b, -sign, rest)
        rows.append(terms)
    return Cx._assemble(_compile(rows, X.n), Cx.nwords(n), Cx.nwords(n - 1))


def _product_vanishes(Cx, Bn, Bm, m):
    from .cohomology import _dot, _nonzero_rows

    P = _dot(Bn, Bm)
    return not _nonzero_rows(P, list(Cx.C.A.factors) * Cx.nwords(m + 1)).any()


@_timed(2, "degeneracy generators have boundaries inside D_{n-1}, n <= 4", limit=60)
def criterion_2(matrix=None):
    matrix = instance_matrix() if matrix is None else matrix
    checked, findings = 0, []
    for X, M, C in matrix:
        Cx = Complex(C)
        for n in (1, 2, 3, 4):
            bad = Cx.closure_failures_homology(n)
            checked += 1
            if bad:
                findings.append(f"{_label(X, M)} [{Cx.variant}] degree {n}: {bad[:3]}")
    return checked, findings


def _factor_set_modules(X, max_order=4):
    mods = list(small_modules(X, max_order))
    orbits = X.orbits()
    if len(orbits) > 1:
        # non-homogeneous: alternate Z/2 and Z/3 over the orbits
        groups = [FiniteAbelianGroup([2 if i % 2 == 0 else 3]) for i in range(len(orbits))]
        f = [AbHom.identity(G) for G in groups]
        g = [AbHom.scalar(G, -1) for G in groups]
        M = orbit_module(X, groups, f, g)
        M.name = "orbit-Z/2,Z/3"
        mods.append(M)
    return mods


@_timed(3, "factor-set conditions characterise extension racks, |X| <= 3, |A| <= 4")
def criterion_3(max_n=3, max_order=4, limit=10 ** 6):
    checked, findings = 0, []
    for X in default_catalog(max_n):
        for M in _factor_set_modules(X, max_order):
            if candidate_count(M) > limit:
                continue
            bad = {}
            for S in _candidates(M, 1 << 12, limit):
                masks = dict(zip(("sr", "sq"), extension_mask(M, S, None)))
                for variant in ("sq", "sr"):
                    a = factor_set_mask(M, S, variant)
                    b = masks[variant]
                    if variant not in bad and not np.array_equal(a, b):
                        i = int(np.flatnonzero(a != b)[0])
                        bad[variant] = (f"{_label(X, M)} [{variant}]: candidate {S[i].tolist()} "
                                        f"conditions={bool(a[i])} extension={bool(b[i])}")
            findings.extend(bad.values())
            checked += 2
    return checked, findings


def _h2_orders(M, variant):
    L, Z, B = _z2_b2(M, variant)
    zo = subquotient(Z, [], L.m2).order if Z else 1
    bo = subquotient(B, [], L.m2).order if B else 1
    return zo, bo


def _c4_instances(max_n):
    out = []
    for X, M, C in instance_matrix(max_n):
        out.append((X, M, C))
    Zg = FiniteAbelianGroup([0])
    racks = list(default_catalog(max_n)) + [rack_by_name(r) for r in
                                            ("permrack-2-swap", "permrack-3-p102", "permrack-4-swap")]
    for X in racks:
        M = trivial_module(X, Zg)
        M.name = "trivial-Z"
        out.append((X, M, coeff_action(M)))
        if not X.quandle:
            for A in ([2], [3], [4], [2, 2]):
                M = trivial_module(X, FiniteAbelianGroup(A))
                M.name = f"trivial-{M.groups[0].name().replace(' ', '')}"
                out.append((X, M, coeff_action(M)))
    return out


@_timed(4, "extension H^2 equals cochain H^2; orders match brute force")
def criterion_4(max_n=4, oracle_limit=10 ** 6, oracle_max_n=3):
    checked, findings = 0, []
    for X, M, C in _c4_instances(max_n):
        for variant in (("sq", "sr") if X.quandle else ("sr",)):
            a = h2_ext(M, variant).group
            b = Complex(C, variant).cohomology(2)
            checked += 1
            if a != b:
                findings.append(f"{_label(X, M)} [{variant}]: ext {a} vs cochain {b}")
                continue
            if (X.n <= oracle_max_n and all(G.is_finite for G in M.groups)
                    and candidate_count(M) <= oracle_limit):
                zo, bo = _h2_orders(M, variant)
                bz, bb, bg = brute_force_h2(M, variant, oracle_limit)
                checked += 1
                if (zo, bo) != (bz, bb) or bg != a:
                    findings.append(f"{_label(X, M)} [{variant}]: |Z|,|B| = {zo},{bo} "
                                    f"vs brute force {bz},{bb}; groups {a} vs {bg}")
    return checked, findings


ISO_CASES = (
    [("unknot-sq", A) for A in ("Z/2", "Z/3", "Z/4")]
    + [(f"trivial-{n}", A) for n in (1, 2, 3) for A in ("Z/2", "Z/4")]
    + [("dihedral-3", "Z/3"), ("conj-S3", "Z/2")]
)


@_timed(5, "H^2_SR(X; A) and H^1(G_X; Hom(X, A)) with explicit round trips", limit=120)
def criterion_5(cases=ISO_CASES, coefficients="hom"):
    checked, findings = 0, []
    for name, A in cases:
        rep = verify_iso(rack_by_name(name), FiniteAbelianGroup.parse(A), coefficients)
        checked += 1
        if not rep.equal:
            findings.append(f"{name}/{A}: {rep.findings}")
    return checked, findings


@_timed(6, "unknot: abelianised associated group is Z, Tietze reaches <e | >")
def criterion_6():
    X = rack_by_name("unknot-sq")
    P = associated_group(X)
    findings = []
    ab = abelianization(P)
    if list(ab.factors) != [0]:
        findings.append(f"abelianization {list(ab.factors)}")
    T = tietze_reduce(P)
    if len(T.generators) != 1 or T.relators:
        findings.append(f"Tietze result has {len(T.generators)} generators, {len(T.relators)} relators")
    if list(abelianization(T).factors) != [0]:
        findings.append("Tietze changed the abelianization")
    return 3, findings


def _ko_cocycles(X, A, quandle):
    """Generators of the 2-cocycles of the classical trivial-coefficient conditions, built directly."""
    n, k = X.n, A.rank
    op, rho = X.op, X.rho

    rows = []
    for x1, x2, x3 in itertools.product(range(n), repeat=3):
        r = np.zeros(n * n, dtype=np.int64)
        r[x1 * n + x3] -= 1
        r[x1 * n + x2] += 1
        r[op[x1, x2] * n + x3] += 1
        r[op[x1, x3] * n + op[x2, x3]] -= 1
        rows.append(r)
    for x1, x2 in itertools.product(range(n), repeat=2):
        r = np.zeros(n * n, dtype=np.int64)
        r[x1 * n + x2] -= 1          # H = -id
        r[rho[x1] * n + x2] -= 1
        rows.append(r)
        r = np.zeros(n * n, dtype=np.int64)
        r[op[x1, x2] * n + rho[x2]] += 1
        r[x1 * n + x2] += 1
        rows.append(r)
    if quandle:
        for x in range(n):
            r = np.zeros(n * n, dtype=np.int64)
            r[x * n + x] = 1
            rows.append(r)
    S = np.array(rows)
    F = np.kron(S, np.eye(k, dtype=np.int64))
    moduli = list(A.factors) * (n * n)
    rmod = list(A.factors) * len(rows)
    return map_kernel(F, moduli, rmod), moduli


@_timed(7, "trivial coefficients: degree-2 cocycles are the classical three conditions")
def criterion_7(matrix=None):
    from .abgrp import contains

    matrix = instance_matrix() if matrix is None else matrix
    checked, findings = 0, []
    for X, M, C in matrix:
        if not augmentation_check(C):
            continue
        A = C.A
        variant = "sq" if X.quandle else "sr"
        Cx = Complex(C, variant)
        G, _ = Cx.degeneracy(2)
        B3 = Cx.boundary(3)
        rmod = list(A.factors) * (len(G) // C.k) + Cx.moduli(3) if C.k else []
        Zc = map_kernel(np.vstack([G, B3]), Cx.moduli(2), rmod) if C.k else []
        Zk, moduli = _ko_cocycles(X, A, variant == "sq")
        checked += 1
        if Zc and not all(contains(Zk, moduli, Zc)):
            findings.append(f"{_label(X, M)}: a cochain cocycle fails the classical conditions")
        if Zk and not all(contains(Zc, moduli, Zk)):
            findings.append(f"{_label(X, M)}: a classical cocycle is not a cochain cocycle")
        for z in Zc[:5]:
            kappa = [[z[(x * X.n + y) * C.k:(x * X.n + y + 1) * C.k] for y in range(X.n)]
                     for x in range(X.n)]
            if not two_cocycle_check(kappa, C, variant == "sq"):
                findings.append(f"{_label(X, M)}: two_cocycle_check rejects a cochain cocycle")
                break
    return checked, findings


def _identity_xmap(M, N):
    return XMap(M, N, tuple(AbHom.identity(G) for G in M.groups))


@_timed(8, "semidirect product is a symmetric rack (quandle iff base is); module round trip")
def criterion_8(matrix=None):
    matrix = instance_matrix() if matrix is None else matrix
    checked, findings = 0, []
    extra = []
    for name in ("permrack-2-swap", "permrack-3-p102"):
        X = rack_by_name(name)
        for A in ("Z/2", "Z/3", "Z/4"):
            M = trivial_module(X, FiniteAbelianGroup.parse(A))
            M.name = f"trivial-{A}"
            extra.append((X, M, None))
    for X, M, _ in list(matrix) + extra:
        E = semidirect(M)
        checked += 1
        rep = E.validate(quandle=False)
        if not rep.ok:
            findings.append(f"{_label(X, M)}: semidirect product fails {sorted(rep.axioms())}")
            continue
        op, _ = E.tables()
        idem = bool(np.all(op[np.arange(E.size), np.arange(E.size)] == np.arange(E.size)))
        if idem != X.quandle:
            findings.append(f"{_label(X, M)}: idempotent={idem} but base quandle={X.quandle}")
        zero = [E.index(M.groups[x].zero(), x) for x in range(X.n)]
        N, sigma = extract_module(E, zero)
        F = _identity_xmap(N, M)
        if not (validate_xmap(F).ok and F.is_iso()):
            findings.append(f"{_label(X, M)}: recovered module is not isomorphic to the input")
        if any(any(v) for row in sigma for v in row):
            findings.append(f"{_label(X, M)}: recovered factor set is not zero")
    return checked, findings


@_timed(9, "(co)homology in degrees 0..2 does not depend on the basepoint")
def criterion_9(matrix=None):
    matrix = instance_matrix() if matrix is None else matrix
    checked, findings = 0, []
    for X, M, C in matrix:
        if X.n == 1:
            continue
        ref = None
        for p in range(X.n):
            Cx = Complex(C, basepoint=p)
            vals = ([Cx.homology(n) for n in (0, 1, 2)], [Cx.cohomology(n) for n in (0, 1, 2)])
            checked += 1
            if ref is None:
                ref = vals
            elif vals != ref:
                findings.append(f"{_label(X, M)}: basepoint {p} gives "
                                f"{[str(g) for g in vals[0] + vals[1]]} vs "
                                f"{[str(g) for g in ref[0] + ref[1]]}")
    return checked, findings


CRITERIA = (criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9)


def run_suite(seed=None, only=None, fault=None):
    """Run all (or the selected) criteria.

    With a ``seed`` the criteria run in a shuffled order; results are
    independent of the order, and the report is sorted by criterion number.
    """
    order = list(range(1, len(CRITERIA) + 1))
    if seed is not None:
        random.Random(seed).shuffle(order)
    results = []
    for i in order:
        if only and i not in only:
            continue
        crit = CRITERIA[i - 1]
        results.append(crit(fault=fault) if i == 1 and fault else crit())
    return sorted(results, key=lambda r: r.number)


