"""The associated group of a symmetric rack and its first cohomology.

``G(X, rho)`` has a generator ``e_x`` per element and relators
``e_{x*y}^-1 e_y^-1 e_x e_y`` and ``e_{rho x} e_x``.  It acts on functions
``X -> A`` by ``(e_x . f)(z) = f(z * x)``.  Two coefficient modules are
offered:

* ``"hom"``: maps ``f`` with ``f(x * y) = f(x)`` and ``f(rho x) = -f(x)``;
* ``"functions"``: every ``f`` with ``f(rho x) = -f(x)``.

:func:`verify_iso` compares ``H^1`` of the group with the degree-2 rack
cohomology with trivial coefficients and checks the explicit maps between
cocycles in both directions.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .abgrp import FiniteAbelianGroup, Presentation, contains, map_kernel, map_solve, subquotient
from .racks import FiniteSymmetricRack

Word = tuple  # of (generator, +1 | -1)


class CocycleError(ValueError):
    def __init__(self, condition, witness):
        super().__init__(f"condition {condition} fails at {witness}")
        self.condition = condition
        self.witness = witness


def free_reduce(word) -> Word:
    out = []
    for g, e in word:
        if out and out[-1][0] == g and out[-1][1] == -e:
            out.pop()
        else:
            out.append((g, e))
    return tuple(out)


def invert(word) -> Word:
    return tuple((g, -e) for g, e in reversed(word))


def _cyclic_key(word):
    """Canonical representative up to cyclic permutation and inversion."""
    w = list(word)
    # cyclic reduction
    while len(w) >= 2 and w[0][0] == w[-1][0] and w[0][1] == -w[-1][1]:
        w = w[1:-1]
    cands = []
    for v in (w, list(invert(w))):
        for i in range(max(len(v), 1)):
            cands.append(tuple(v[i:] + v[:i]))
    return min(cands) if cands else ()


@dataclass
class GroupPresentation:
    generators: list
    relators: list = field(default_factory=list)

    def to_json(self):
        return {"generators": list(self.generators),
                "relators": [[[g, e] for g, e in r] for r in self.relators]}

    def exponent_matrix(self):
        idx = {g: i for i, g in enumerate(self.generators)}
        rows = []
        for r in self.relators:
            row = [0] * len(self.generators)
            for g, e in r:
                row[idx[g]] += e
            rows.append(row)
        return rows


def associated_group(X: FiniteSymmetricRack) -> GroupPresentation:
    """Presentation with duplicate and trivial relators removed."""
    rels = []
    seen = set()

    def add(word):
        w = free_reduce(word)
        key = _cyclic_key(w)
        if key and key not in seen:
            seen.add(key)
            rels.append(w)

    for x, y in itertools.product(range(X.n), repeat=2):
        add(((X.star(x, y), -1), (y, -1), (x, 1), (y, 1)))
    for x in range(X.n):
        add(((int(X.rho[x]), 1), (x, 1)))
    return GroupPresentation(list(range(X.n)), rels)


def tietze_reduce(P: GroupPresentation) -> GroupPresentation:
    """Eliminate generators through length-two relators ``g h^{+-1}`` and drop redundant relators.

    Each elimination substitutes ``g -> h^{-+1}`` everywhere; afterwards empty
    and duplicate (up to cyclic permutation and inversion) relators vanish.
    This is exactly what removes the ``e_{rho x} = e_x^{-1}`` generators.
    """
    gens = list(P.generators)
    rels = [free_reduce(r) for r in P.relators]
    changed = True
    while changed:
        changed = False
        for r in rels:
            if len(r) == 2 and r[0][0] != r[1][0]:
                (g, eg), (h, eh) = r
                # g^eg h^eh = 1  =>  g = h^(-eh * eg)
                sub = ((h, -eh * eg),)
                new = []
                for s in rels:
                    w = []
                    for a, e in s:
                        if a == g:
                            w.extend(sub if e == 1 else invert(sub))
                        else:
                            w.append((a, e))
                    new.append(free_reduce(w))
                gens.remove(g)
                rels = new
                changed = True
                break
        keys, kept = set(), []
        for r in rels:
            k = _cyclic_key(r)
            if k and k not in keys:
                keys.add(k)
                kept.append(r)
        rels = kept
    return GroupPresentation(gens, rels)


def abelianization(P: GroupPresentation) -> FiniteAbelianGroup:
    return Presentation(len(P.generators), P.exponent_matrix()).group()


# ---------------------------------------------------------------------------
# G-modules of functions X -> A
# ---------------------------------------------------------------------------

@dataclass
class GModule:
    """A subgroup ``V`` of ``A^X`` stable under the action of the generators.

    Coordinates of ``A^X`` are ordered element-major: ``(x, i)`` at ``x*k + i``.
    """

    X: FiniteSymmetricRack
    A: FiniteAbelianGroup
    gens: list
    kind: str

    @property
    def moduli(self):
        return list(self.A.factors) * self.X.n

    def group(self) -> FiniteAbelianGroup:
        return subquotient(self.gens, [], self.moduli)

    def act_matrix(self, x, sign=1):
        """Matrix of ``f -> e_x^sign . f`` on ``A^X``."""
        X, k = self.X, self.A.rank
        N = X.n
        P = np.zeros((N * k, N * k), dtype=np.int64)
        for z in range(N):
            src = X.star(z, x) if sign == 1 else X.star_inv(z, x)
            P[z * k:(z + 1) * k, src * k:(src + 1) * k] = np.eye(k, dtype=np.int64)
        return P

    def contains(self, f) -> bool:
        return bool(contains(self.gens, self.moduli, [list(f)])[0])


def _constraint_matrix(X, A, kind):
    """Rows whose kernel is the coefficient module inside ``A^X``."""
    k = A.rank
    N = X.n
    rows = []
    for x in range(N):
        rx = int(X.rho[x])
        blk = np.zeros((k, N * k), dtype=np.int64)
        blk[:, rx * k:(rx + 1) * k] += np.eye(k, dtype=np.int64)
        blk[:, x * k:(x + 1) * k] += np.eye(k, dtype=np.int64)
        rows.append(blk)
    if kind == "hom":
        for x, y in itertools.product(range(N), repeat=2):
            xy = X.star(x, y)
            if xy == x:
                continue
            blk = np.zeros((k, N * k), dtype=np.int64)
            blk[:, xy * k:(xy + 1) * k] += np.eye(k, dtype=np.int64)
            blk[:, x * k:(x + 1) * k] -= np.eye(k, dtype=np.int64)
            rows.append(blk)
    return np.vstack(rows) if rows else np.zeros((0, N * k), dtype=np.int64)


def hom_xa(X: FiniteSymmetricRack, A: FiniteAbelianGroup, coefficients="hom") -> GModule:
    if coefficients not in ("hom", "functions"):
        raise ValueError("coefficients must be 'hom' or 'functions'")
    K = _constraint_matrix(X, A, coefficients)
    moduli = list(A.factors) * X.n
    rmod = list(A.factors) * (len(K) // A.rank) if A.rank else []
    gens = [list(v) for v in map_kernel(K, moduli, rmod)] if A.rank else []
    return GModule(X, A, gens, coefficients)


# ---------------------------------------------------------------------------
# H^1 by Fox calculus
# ---------------------------------------------------------------------------

@dataclass
class H1Result:
    group: FiniteAbelianGroup
    cocycles: list        # generators of Z^1 as lists of per-generator vectors
    coboundaries: list
    module: GModule
    presentation: GroupPresentation


def _fox_blocks(P: GroupPresentation, V: GModule):
    """Matrix of ``u -> (u(r))_r`` on ``(A^X)^{generators}``."""
    d = len(V.moduli)
    gi = {g: i for i, g in enumerate(P.generators)}
    act = {(g, s): V.act_matrix(g, s) for g in P.generators for s in (1, -1)}
    blocks = []
    for r in P.relators:
        row = np.zeros((d, d * len(P.generators)), dtype=np.int64)
        prefix = np.eye(d, dtype=np.int64)
        for g, e in r:
            c = gi[g] * d
            if e == 1:
                row[:, c:c + d] += prefix
            else:
                row[:, c:c + d] -= prefix @ act[(g, -1)]
            prefix = prefix @ act[(g, e)]
        blocks.append(row)
    return blocks


def h1(P: GroupPresentation, V: GModule) -> H1Result:
    """``H^1`` of the presented group with coefficients in ``V``."""
    d = len(V.moduli)
    ng = len(P.generators)
    moduli = V.moduli * ng
    K = _constraint_matrix(V.X, V.A, V.kind)
    rows = list(_fox_blocks(P, V))
    rmod = V.moduli * len(rows)
    # each u_g must lie in V
    for i in range(ng):
        blk = np.zeros((len(K), d * ng), dtype=np.int64)
        blk[:, i * d:(i + 1) * d] = K
        rows.append(blk)
        rmod += list(V.A.factors) * (len(K) // V.A.rank) if V.A.rank else []
    F = np.vstack(rows) if rows else np.zeros((0, d * ng), dtype=np.int64)
    Z = map_kernel(F, moduli, rmod) if d else []
    B = []
    for m in V.gens:
        m = np.array(m, dtype=np.int64)
        vec = np.concatenate([m - V.act_matrix(g) @ m for g in P.generators]) if ng else m[:0]
        B.append([int(v) for v in vec])
    group = subquotient(Z, B, moduli) if d else FiniteAbelianGroup(())
    return H1Result(group, [_split(z, d, ng) for z in Z], [_split(b, d, ng) for b in B], V, P)


def _split(vec, d, ng):
    return [list(vec[i * d:(i + 1) * d]) for i in range(ng)]


def group_h1(X: FiniteSymmetricRack, A: FiniteAbelianGroup, coefficients="hom") -> H1Result:
    return h1(associated_group(X), hom_xa(X, A, coefficients))


def evaluate_cocycle(u, word, V: GModule, generators):
    """``u(w)`` for a word, from the values ``u[g]`` on generators."""
    gi = {g: i for i, g in enumerate(generators)}
    d = len(V.moduli)
    total = np.zeros(d, dtype=np.int64)
    prefix = np.eye(d, dtype=np.int64)
    for g, e in word:
        ug = np.array(u[gi[g]], dtype=np.int64)
        if e == 1:
            total += prefix @ ug
        else:
            total -= prefix @ V.act_matrix(g, -1) @ ug
        prefix = prefix @ V.act_matrix(g, e)
    return [int(t) % m if m else int(t) for t, m in zip(total, V.moduli)]


# ---------------------------------------------------------------------------
# the comparison maps
# ---------------------------------------------------------------------------

def _flat_sigma(sigma):
    return [c for row in sigma for v in row for c in v]


def phi_map(X: FiniteSymmetricRack, A: FiniteAbelianGroup, u, V: GModule | None = None):
    """Group 1-cocycle -> rack 2-cochain: ``theta(x, y) = u(e_y)(x)``.

    ``u`` lists the values on the generators ``e_0 .. e_{n-1}``.  With ``V``
    given, ``u`` is first checked to be a cocycle.
    """
    if V is not None:
        P = associated_group(X)
        for r in P.relators:
            if any(evaluate_cocycle(u, r, V, P.generators)):
                raise CocycleError("relator", tuple(r))
    k = A.rank
    return [[A.reduce(u[y][x * k:(x + 1) * k]) for y in range(X.n)] for x in range(X.n)]


def psi_map(X: FiniteSymmetricRack, A: FiniteAbelianGroup, sigma, V: GModule | None = None):
    """Rack 2-cocycle -> group 1-cochain: ``chi(e_x) = sigma'(x)`` with ``sigma'(x)(y) = sigma(y, x)``.

    ``sigma`` must satisfy the rack-variant cocycle conditions (the failing
    condition is named otherwise).  With a coefficient module ``V`` the values
    are checked to lie in it and the result is checked on every relator.
    """
    from .ext import validate_factor_set
    from .modules import trivial_module

    rep = validate_factor_set(trivial_module(X, A), sigma, "sr")
    if not rep.ok:
        v = rep.violations[0]
        raise CocycleError(v.axiom, v.witness)
    u = []
    for x in range(X.n):
        vec = []
        for y in range(X.n):
            vec += list(A.reduce(sigma[y][x]))
        if V is not None and not V.contains(vec):
            raise CocycleError("coefficients", (x,))
        u.append(vec)
    if V is not None:
        P = associated_group(X)
        for r in P.relators:
            if any(evaluate_cocycle(u, r, V, P.generators)):
                raise CocycleError("relator", tuple(r))
    return u


def psi_representative(X: FiniteSymmetricRack, A: FiniteAbelianGroup, sigma, V: GModule):
    """A cohomologous ``sigma + delta v`` on which :func:`psi_map` lands in ``V``, or ``None``.

    The explicit formula only makes sense when every ``sigma'(x)`` lies in
    ``V``; on classes it is applied to such a representative.
    """
    from .ext import _delta1, _Layout
    from .modules import trivial_module

    M = trivial_module(X, A)
    L = _Layout(M)
    n, k = X.n, A.rank
    K = _constraint_matrix(X, A, V.kind)
    rk = len(K)
    Kall = np.zeros((n * rk, len(L.m2)), dtype=object)
    for x in range(n):
        for y in range(n):
            c = L.off2[y, x]
            Kall[x * rk:(x + 1) * rk, c:c + k] = K[:, y * k:(y + 1) * k]
    mK = (list(A.factors) * (rk // k)) * n if k else []
    D, E, mE = _delta1(L)
    Dm = np.array(D, dtype=object).reshape(len(L.m2), len(L.m1))
    C1 = map_kernel(E, L.m1, mE)
    svec = np.array(_flat_sigma(sigma), dtype=object)
    target = [-int(t) for t in Kall.dot(svec)] if len(Kall) else []
    if not C1:
        v = None if any(t % m if m else t for t, m in zip(target, mK)) else (0,) * len(L.m1)
    else:
        v = map_solve(Kall.dot(Dm), L.m1, mK, target, src_gens=C1)
    if v is None:
        return None
    rep = svec + Dm.dot(np.array(v, dtype=object)) if len(L.m1) else svec
    return L.vec_to_sigma([int(t) for t in rep])


@dataclass
class IsoReport:
    h2: FiniteAbelianGroup
    h1: FiniteAbelianGroup
    coefficients: str
    round_trip_ok: bool
    psi_direct_ok: bool
    findings: list = field(default_factory=list)

    @property
    def groups_equal(self) -> bool:
        return self.h2 == self.h1

    @property
    def equal(self) -> bool:
        return self.groups_equal and self.round_trip_ok

    def to_json(self):
        return {"h2_factors": list(self.h2.factors), "h1_factors": list(self.h1.factors),
                "coefficients": self.coefficients, "groups_equal": self.groups_equal,
                "round_trip_ok": self.round_trip_ok, "psi_direct_ok": self.psi_direct_ok,
                "equal": self.equal, "findings": self.findings}


def verify_iso(X: FiniteSymmetricRack, A: FiniteAbelianGroup, coefficients="hom") -> IsoReport:
    """Compare ``H^2`` (rack variant, trivial coefficients) with ``H^1(G; V)`` and run both maps.

    ``H^2`` comes from the cochain complex and ``H^1`` from the relator
    system, so the two sides share no code.  The round trips:

    * for each generator ``u`` of ``Z^1``: ``phi(u)`` is a 2-cocycle and
      ``psi(phi(u)) = u`` exactly;
    * each generator of ``B^1`` goes to ``B^2``;
    * for each generator ``sigma`` of ``Z^2``: a cohomologous representative
      in the domain of ``psi`` exists, its image is a 1-cocycle and
      ``phi(psi(.))`` is cohomologous to ``sigma``;
    * each generator of ``B^2`` goes to ``B^1``.

    ``psi_direct_ok`` records whether ``psi`` accepts every ``Z^2`` generator
    as given, without moving to another representative.
    """
    from .cohomology import cohomology_group
    from .ext import _z2_b2, equivalent, validate_factor_set
    from .modules import trivial_module

    M = trivial_module(X, A)
    h2 = cohomology_group(X, M, 2, variant="sr")
    L, Zv, Bv = _z2_b2(M, "sr")
    z2 = [L.vec_to_sigma(z) for z in Zv]
    b2 = [L.vec_to_sigma(b) for b in Bv]
    res = group_h1(X, A, coefficients)
    V = res.module
    findings = []
    ok = True

    b1 = [[c for v in b for c in v] for b in res.coboundaries]
    moduli1 = V.moduli * X.n
    b2flat = [_flat_sigma(b) for b in b2]

    def in_b1(u):
        return bool(contains(b1, moduli1, [[c for v in u for c in v]])[0])

    def in_b2(sig):
        return bool(contains(b2flat, L.m2, [_flat_sigma(sig)])[0])

    for u in res.cocycles:
        theta = phi_map(X, A, u, V)
        if not validate_factor_set(M, theta, "sr").ok:
            ok = False
            findings.append("phi: image of a 1-cocycle is not a 2-cocycle")
            break
        back = psi_map(X, A, theta, V)
        if _reduced(back, V) != _reduced(u, V):
            ok = False
            findings.append("psi(phi(u)) differs from u")
            break
    for u in res.coboundaries:
        if not in_b2(phi_map(X, A, u)):
            ok = False
            findings.append("phi: image of a 1-coboundary is not a 2-coboundary")
            break

    direct = True
    for sig in z2:
        try:
            psi_map(X, A, sig, V)
        except CocycleError:
            direct = False
    for label, gens in (("cocycle", z2), ("coboundary", b2)):
        for sig in gens:
            rep = psi_representative(X, A, sig, V)
            if rep is None:
                ok = False
                findings.append(f"psi: a 2-{label} class has no representative with values in the coefficient module")
                break
            try:
                u = psi_map(X, A, rep, V)
            except CocycleError as exc:
                ok = False
                findings.append(f"psi: representative of a 2-{label} fails ({exc})")
                break
            if label == "cocycle" and equivalent(M, sig, phi_map(X, A, u)) is None:
                ok = False
                findings.append("phi(psi(sigma)) is not cohomologous to sigma")
                break
            if label == "coboundary" and not in_b1(u):
                ok = False
                findings.append("psi: image of a 2-coboundary is not a 1-coboundary")
                break
    if not direct:
        findings.append("psi: some 2-cocycle generators need a change of representative")
    if h2 != res.group:
        findings.append(f"H^2 = {h2} but H^1 = {res.group}")
    return IsoReport(h2, res.group, coefficients, ok, direct, findings)


def _reduced(u, V):
    return [[int(c) % m if m else int(c) for c, m in zip(w, V.moduli)] for w in u]
