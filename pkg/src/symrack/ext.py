"""Abelian extensions of symmetric racks by modules and the factor-set group H^2.

For a module ``M`` over ``X`` and a family ``sigma[x][y]`` in ``A_{x*y}`` the
extension ``E(sigma)`` lives on pairs ``(a, x)`` with ``a`` in ``A_x``:

    (a, x) * (b, y) = (phi_{x,y} a + psi_{x,y} b + sigma_{x,y}, x * y)
    rho(a, x)       = (eta_x a, rho x)

``E(sigma)`` is a symmetric rack exactly when ``sigma`` satisfies the linear
conditions F1..F3, and a symmetric quandle when in addition F4 holds.
Two factor sets give equivalent extensions when they differ by a
coboundary ``phi v_x + psi v_y - v_{x*y}`` with ``eta_x v_x = v_{rho x}``.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field

import numpy as np

from .abgrp import AbHom, FiniteAbelianGroup, map_kernel, map_solve, subquotient
from .modules import ModuleError, SQModule, validate_module
from .racks import FiniteSymmetricRack, ValidationReport


class ExtensionError(ValueError):
    pass


def default_variant(X: FiniteSymmetricRack) -> str:
    return "sq" if X.quandle else "sr"


def _check_variant(X, variant):
    variant = default_variant(X) if variant is None else variant.lower()
    if variant not in ("sq", "sr"):
        raise ExtensionError(f"unknown variant {variant!r}")
    if variant == "sq" and not X.quandle:
        raise ExtensionError("the quandle variant needs a quandle base")
    return variant


# ---------------------------------------------------------------------------
# factor sets
# ---------------------------------------------------------------------------

def zero_factor_set(M: SQModule):
    X = M.base
    return [[M.groups[X.star(x, y)].zero() for y in range(X.n)] for x in range(X.n)]


def normalize_sigma(M: SQModule, sigma):
    X = M.base
    n = X.n
    if len(sigma) != n or any(len(r) != n for r in sigma):
        raise ExtensionError("sigma must be indexed by pairs of elements")
    return tuple(tuple(M.groups[X.star(x, y)].reduce(sigma[x][y]) for y in range(n))
                 for x in range(n))


@dataclass(eq=False)
class FactorSet:
    module: SQModule
    sigma: tuple

    def __post_init__(self):
        self.sigma = normalize_sigma(self.module, self.sigma)

    def to_json(self):
        n = self.module.base.n
        return {"module": self.module.to_json(),
                "sigma": {f"{x},{y}": list(self.sigma[x][y]) for x in range(n) for y in range(n)}}

    @classmethod
    def from_json(cls, obj, module=None):
        if isinstance(obj, str):
            obj = json.loads(obj)
        M = module if module is not None else SQModule.from_json(obj["module"])
        n = M.base.n
        try:
            sigma = [[obj["sigma"][f"{x},{y}"] for y in range(n)] for x in range(n)]
        except KeyError as exc:
            raise ExtensionError(f"sigma is missing entry {exc}") from None
        return cls(M, sigma)


def validate_factor_set(M: SQModule, sigma, variant=None) -> ValidationReport:
    """Check F1..F3 (and F4 in the quandle variant) at every argument."""
    X = M.base
    variant = _check_variant(X, variant)
    s = normalize_sigma(M, sigma)
    op, rho = X.op, X.rho
    phi, psi, eta = M.phi, M.psi, M.eta
    G = M.groups
    rep = ValidationReport()
    n = X.n
    for x, y, z in itertools.product(range(n), repeat=3):
        xy, xz, yz = int(op[x, y]), int(op[x, z]), int(op[y, z])
        tgt = G[int(op[xy, z])]
        lhs = tgt.add(s[xy][z], phi[xy][z](s[x][y]))
        rhs = tgt.add(tgt.add(phi[xz][yz](s[x][z]), s[xz][yz]), psi[xz][yz](s[y][z]))
        if lhs != rhs:
            rep.add("F1", (x, y, z))
    for x, y in itertools.product(range(n), repeat=2):
        xy = int(op[x, y])
        if s[int(rho[x])][y] != eta[xy](s[x][y]):
            rep.add("F2", (x, y))
        ry = int(rho[y])
        xry = int(op[x, ry])
        if G[x].add(phi[xry][y](s[x][ry]), s[xry][y]) != G[x].zero():
            rep.add("F3", (x, y))
    if variant == "sq":
        for x in range(n):
            if any(s[x][x]):
                rep.add("F4", (x,))
    return rep


def coboundary(M: SQModule, v):
    """``(delta v)_{x,y} = phi_{x,y} v_x + psi_{x,y} v_y - v_{x*y}``.

    ``v`` must satisfy ``eta_x v_x = v_{rho x}``.
    """
    X = M.base
    v = [M.groups[x].reduce(v[x]) for x in range(X.n)]
    for x in range(X.n):
        if M.eta[x](v[x]) != v[int(X.rho[x])]:
            raise ExtensionError(f"v violates eta_x v_x = v_(rho x) at x = {x}")
    out = []
    for x in range(X.n):
        row = []
        for y in range(X.n):
            xy = X.star(x, y)
            A = M.groups[xy]
            row.append(A.add(A.add(M.phi[x][y](v[x]), M.psi[x][y](v[y])), A.neg(v[xy])))
        out.append(row)
    return tuple(tuple(r) for r in out)


# ---------------------------------------------------------------------------
# linear-algebra layout: cochains as vectors over a concatenated ambient
# ---------------------------------------------------------------------------

class _Layout:
    """Offsets for ``C1 = + A_x`` and ``C2 = + A_{x*y}``."""

    def __init__(self, M: SQModule):
        self.M = M
        X = M.base
        self.n = X.n
        self.off1, m1 = [], []
        for x in range(X.n):
            self.off1.append(len(m1))
            m1 += list(M.groups[x].factors)
        self.m1 = m1
        self.off2, m2 = {}, []
        for x, y in itertools.product(range(X.n), repeat=2):
            self.off2[x, y] = len(m2)
            m2 += list(M.groups[X.star(x, y)].factors)
        self.m2 = m2

    def sigma_to_vec(self, sigma):
        vec = []
        for x, y in itertools.product(range(self.n), repeat=2):
            vec += list(sigma[x][y])
        return vec

    def vec_to_sigma(self, vec):
        X = self.M.base
        out = []
        for x in range(self.n):
            row = []
            for y in range(self.n):
                o = self.off2[x, y]
                G = self.M.groups[X.star(x, y)]
                row.append(G.reduce(vec[o:o + G.rank]))
            out.append(tuple(row))
        return tuple(out)

    def vec_to_v(self, vec):
        return [self.M.groups[x].reduce(vec[self.off1[x]:self.off1[x] + self.M.groups[x].rank])
                for x in range(self.n)]


def _place(mat, r0, c0, h: AbHom, sign=1):
    for i, row in enumerate(h.mat):
        for j, val in enumerate(row):
            mat[r0 + i][c0 + j] += sign * val


def _delta1(L: _Layout):
    """Matrix of v -> delta v (C2 x C1) and the constraint v -> eta v - v o rho."""
    M = L.M
    X = M.base
    n = X.n
    D = [[0] * len(L.m1) for _ in L.m2]
    for x, y in itertools.product(range(n), repeat=2):
        r = L.off2[x, y]
        xy = X.star(x, y)
        _place(D, r, L.off1[x], M.phi[x][y])
        _place(D, r, L.off1[y], M.psi[x][y])
        _place(D, r, L.off1[xy], AbHom.identity(M.groups[xy]), -1)
    mE, E = [], []
    for x in range(n):
        rx = int(X.rho[x])
        block = [[0] * len(L.m1) for _ in range(M.groups[rx].rank)]
        _place(block, 0, L.off1[x], M.eta[x])
        _place(block, 0, L.off1[rx], AbHom.identity(M.groups[rx]), -1)
        E += block
        mE += list(M.groups[rx].factors)
    return D, E, mE


def _factor_conditions(L: _Layout, variant):
    """Matrix (and target moduli) of the linear conditions F1..F4 on C2."""
    M = L.M
    X = M.base
    n = X.n
    op, rho = X.op, X.rho
    rows, moduli = [], []

    def block(tgt: FiniteAbelianGroup):
        b = [[0] * len(L.m2) for _ in range(tgt.rank)]
        return b

    for x, y, z in itertools.product(range(n), repeat=3):
        xy, xz, yz = int(op[x, y]), int(op[x, z]), int(op[y, z])
        tgt = M.groups[int(op[xy, z])]
        b = block(tgt)
        _place(b, 0, L.off2[xy, z], AbHom.identity(tgt))
        _place(b, 0, L.off2[x, y], M.phi[xy][z])
        _place(b, 0, L.off2[xz, yz], AbHom.identity(tgt), -1)
        _place(b, 0, L.off2[x, z], M.phi[xz][yz], -1)
        _place(b, 0, L.off2[y, z], M.psi[xz][yz], -1)
        rows += b
        moduli += list(tgt.factors)
    for x, y in itertools.product(range(n), repeat=2):
        xy = int(op[x, y])
        rx = int(rho[x])
        tgt = M.groups[int(op[rx, y])]
        b = block(tgt)
        _place(b, 0, L.off2[rx, y], AbHom.identity(tgt))
        _place(b, 0, L.off2[x, y], M.eta[xy], -1)
        rows += b
        moduli += list(tgt.factors)
        ry = int(rho[y])
        xry = int(op[x, ry])
        tgt = M.groups[x]
        b = block(tgt)
        _place(b, 0, L.off2[x, ry], M.phi[xry][y])
        _place(b, 0, L.off2[xry, y], AbHom.identity(tgt))
        rows += b
        moduli += list(tgt.factors)
    if variant == "sq":
        for x in range(n):
            tgt = M.groups[x]
            b = block(tgt)
            _place(b, 0, L.off2[x, x], AbHom.identity(tgt))
            rows += b
            moduli += list(tgt.factors)
    return rows, moduli


@dataclass
class H2Result:
    group: FiniteAbelianGroup
    variant: str
    cocycles: list = field(default_factory=list)     # generators of Z^2 as factor sets
    coboundaries: list = field(default_factory=list)  # generators of B^2 as factor sets

    @property
    def invariants(self):
        return list(self.group.factors)

    def to_json(self):
        return {"invariants": self.invariants, "variant": self.variant}


def _z2_b2(M: SQModule, variant):
    L = _Layout(M)
    F, mF = _factor_conditions(L, variant)
    Z = map_kernel(F, L.m2, mF)
    D, E, mE = _delta1(L)
    C1 = map_kernel(E, L.m1, mE)
    Dm = np.array(D, dtype=object).reshape(len(L.m2), len(L.m1))
    B = []
    for v in C1:
        b = Dm.dot(np.array(v, dtype=object)) if len(L.m1) else np.zeros(len(L.m2), dtype=object)
        b = [int(val) % m if m else int(val) for val, m in zip(b, L.m2)]
        if any(b):
            B.append(b)
    return L, Z, B


def h2_ext(M: SQModule, variant=None) -> H2Result:
    """Factor sets modulo coboundaries, computed directly on the factor-set conditions.

    Works for non-homogeneous modules.  The default variant is the quandle
    one over quandles (F4 imposed) and the rack one otherwise.
    """
    variant = _check_variant(M.base, variant)
    rep = validate_module(M)
    if not rep.ok:
        raise ModuleError(f"module fails {sorted(rep.axioms())}")
    L, Z, B = _z2_b2(M, variant)
    group = subquotient(Z, B, L.m2)
    return H2Result(group, variant,
                    [L.vec_to_sigma(z) for z in Z], [L.vec_to_sigma(b) for b in B])


def equivalent(M: SQModule, sigma, tau):
    """Return ``v`` with ``tau = sigma + delta v`` or ``None`` when the classes differ."""
    L = _Layout(M)
    s = L.sigma_to_vec(normalize_sigma(M, sigma))
    t = L.sigma_to_vec(normalize_sigma(M, tau))
    D, E, mE = _delta1(L)
    target = [(b - a) % m if m else b - a for a, b, m in zip(s, t, L.m2)] + [0] * len(mE)
    sol = map_solve(D + E, L.m1, L.m2 + mE, target)
    if sol is None:
        return None
    return L.vec_to_v(sol)


def is_split(M: SQModule, sigma) -> bool:
    return equivalent(M, zero_factor_set(M), sigma) is not None


# ---------------------------------------------------------------------------
# the extension rack itself
# ---------------------------------------------------------------------------

class ExtensionRack:
    """``E(sigma)`` with elements enumerated fibre by fibre.

    Element ``i`` is the pair ``(a, x)``; ``index`` and ``element`` convert.
    """

    def __init__(self, M: SQModule, sigma=None):
        if any(not G.is_finite for G in M.groups):
            raise ExtensionError("extension racks are materialised for finite fibres only")
        self.module = M
        X = M.base
        self.base = X
        self.sigma = normalize_sigma(M, zero_factor_set(M) if sigma is None else sigma)
        self.offsets = []
        self.pairs = []
        for x in range(X.n):
            self.offsets.append(len(self.pairs))
            self.pairs += [(a, x) for a in M.groups[x].elements()]
        self._rack = None

    @property
    def size(self):
        return len(self.pairs)

    def index(self, a, x) -> int:
        return self.offsets[x] + self.module.groups[x].index(a)

    def element(self, i):
        return self.pairs[i]

    def projection(self):
        return [x for _, x in self.pairs]

    def star(self, u, v):
        (a, x), (b, y) = u, v
        M = self.module
        xy = self.base.star(x, y)
        G = M.groups[xy]
        return (G.add(G.add(M.phi[x][y](a), M.psi[x][y](b)), self.sigma[x][y]), xy)

    def rho(self, u):
        a, x = u
        return (self.module.eta[x](a), int(self.base.rho[x]))

    def act(self, c, u):
        """Fibre action: ``c . (a, x) = (a + c, x)``."""
        a, x = u
        return (self.module.groups[x].add(a, c), x)

    def difference(self, u, v):
        """The unique ``c`` with ``u = c . v`` (both in the same fibre)."""
        (a, x), (b, y) = u, v
        if x != y:
            raise ExtensionError("elements lie in different fibres")
        G = self.module.groups[x]
        return G.add(a, G.neg(b))

    def tables(self):
        N = self.size
        op = np.zeros((N, N), dtype=np.int64)
        for i, u in enumerate(self.pairs):
            for j, v in enumerate(self.pairs):
                op[i, j] = self.index(*self.star(u, v))
        rho = [self.index(*self.rho(u)) for u in self.pairs]
        return op, rho

    def rack(self, quandle=None) -> FiniteSymmetricRack:
        """The extension as a symmetric rack; raises when the axioms fail."""
        op, rho = self.tables()
        return FiniteSymmetricRack(op, rho, quandle=quandle)

    def validate(self, quandle=None) -> ValidationReport:
        from .racks import derive_inverse, validate

        op, rho = self.tables()
        if quandle is None:
            quandle = self.base.quandle
        return validate(op, derive_inverse(op), rho, quandle)


def build_extension(M: SQModule, sigma, variant=None) -> ExtensionRack:
    """``E(sigma)``; raises :class:`ExtensionError` naming the first failing condition."""
    rep = validate_factor_set(M, sigma, variant)
    if not rep.ok:
        v = rep.violations[0]
        raise ExtensionError(f"factor set fails {v.axiom} at {v.witness}")
    return ExtensionRack(M, sigma)


def semidirect(M: SQModule) -> ExtensionRack:
    rep = validate_module(M)
    if not rep.ok:
        raise ModuleError(f"module fails {sorted(rep.axioms())}")
    return ExtensionRack(M)


def equivalence_map(E_sigma: ExtensionRack, E_tau: ExtensionRack, v):
    """Rack isomorphism ``E(sigma) -> E(tau)``, ``(a, x) -> (a - v_x, x)``, for ``tau = sigma + delta v``."""
    out = []
    for a, x in E_sigma.pairs:
        G = E_sigma.module.groups[x]
        out.append(E_tau.index(G.add(a, G.neg(v[x])), x))
    return out


# ---------------------------------------------------------------------------
# recovering the module from an extension with a section
# ---------------------------------------------------------------------------

def extract_module(E: ExtensionRack, section):
    """Recover ``(module, factor set)`` from an extension and an equivariant section.

    ``section[x]`` is an element of the fibre over ``x`` (index or pair).  The
    maps are read off the operation table of ``E`` using fibrewise
    differences only:

    * ``phi_{x,y}(a) = (a.s(x)) * s(y) - s(x) * s(y)``
    * ``psi_{x,y}(b) = s(x) * (b.s(y)) - s(x) * s(y)``
    * ``eta_x(a) = rho(a.s(x)) - rho(s(x))``
    * ``sigma_{x,y} = s(x) * s(y) - s(x * y)``
    """
    X = E.base
    n = X.n
    sec = [E.element(s) if isinstance(s, (int, np.integer)) else (tuple(s[0]), int(s[1]))
           for s in section]
    if len(sec) != n or any(sec[x][1] != x for x in range(n)):
        raise ExtensionError("section is not a right inverse of the projection")
    for x in range(n):
        if E.rho(sec[x]) != sec[int(X.rho[x])]:
            raise ExtensionError(f"section does not commute with rho at {x}")
    op, rho = E.tables()
    pairs = E.pairs
    groups = list(E.module.groups)

    def star(u, v):
        return pairs[op[E.index(*u), E.index(*v)]]

    def read_map(src, dst, f):
        cols = [f(e) for e in src.generators()]
        h = AbHom(src, dst, [[cols[j][i] for j in range(src.rank)] for i in range(dst.rank)])
        for a in src.elements():
            if h(a) != dst.reduce(f(a)):
                raise ExtensionError("fibre map is not a homomorphism")
        return h

    phi, psi, sigma = [], [], []
    for x in range(n):
        prow, qrow, srow = [], [], []
        for y in range(n):
            xy = X.star(x, y)
            base_pt = star(sec[x], sec[y])
            prow.append(read_map(groups[x], groups[xy],
                                 lambda a: E.difference(star(E.act(a, sec[x]), sec[y]), base_pt)))
            qrow.append(read_map(groups[y], groups[xy],
                                 lambda b: E.difference(star(sec[x], E.act(b, sec[y])), base_pt)))
            srow.append(E.difference(base_pt, sec[xy]))
        phi.append(prow)
        psi.append(qrow)
        sigma.append(srow)
    eta = []
    for x in range(n):
        rx = int(X.rho[x])
        r0 = pairs[rho[E.index(*sec[x])]]
        eta.append(read_map(groups[x], groups[rx],
                            lambda a: E.difference(pairs[rho[E.index(*E.act(a, sec[x]))]], r0)))
    return SQModule(X, groups, phi, psi, eta), tuple(tuple(r) for r in sigma)
