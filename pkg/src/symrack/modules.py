"""Symmetric quandle modules over a finite symmetric rack.

A module assigns an abelian group ``A_x`` to every element ``x`` together
with homomorphisms

* ``phi[x][y] : A_x -> A_{x*y}`` (invertible),
* ``psi[x][y] : A_y -> A_{x*y}``,
* ``eta[x]    : A_x -> A_{rho x}``,

subject to nine compatibility axioms M1..M9 (M9 only over quandles).  The
tables are dense; :func:`validate_module` checks every axiom at every
argument tuple and reports all failures.
"""

from __future__ import annotations

import functools
import itertools
import json
from dataclasses import dataclass

from .abgrp import AbGroupError, AbHom, FiniteAbelianGroup
from .racks import FiniteSymmetricRack, ValidationReport


class ModuleError(ValueError):
    """Structural problems: mismatched shapes, bad JSON, invalid module inputs."""


class ModuleAxiomError(ModuleError):
    def __init__(self, report):
        v = report.violations[0]
        super().__init__(f"module axiom {v.axiom} fails at {v.witness}")
        self.report = report


@dataclass(eq=False)
class SQModule:
    base: FiniteSymmetricRack
    groups: tuple
    phi: tuple
    psi: tuple
    eta: tuple

    def __post_init__(self):
        X = self.base
        n = X.n
        self.groups = tuple(self.groups)
        self.phi = tuple(tuple(r) for r in self.phi)
        self.psi = tuple(tuple(r) for r in self.psi)
        self.eta = tuple(self.eta)
        if len(self.groups) != n or len(self.eta) != n or len(self.phi) != n or len(self.psi) != n:
            raise ModuleError("module tables must have one entry per element of the base")
        for x in range(n):
            if len(self.phi[x]) != n or len(self.psi[x]) != n:
                raise ModuleError("phi and psi must be indexed by pairs of elements")
            e = self.eta[x]
            if e.src != self.groups[x] or e.dst != self.groups[int(X.rho[x])]:
                raise ModuleError(f"eta[{x}] has the wrong source or target")
            for y in range(n):
                xy = X.star(x, y)
                if self.phi[x][y].src != self.groups[x] or self.phi[x][y].dst != self.groups[xy]:
                    raise ModuleError(f"phi[{x}][{y}] has the wrong source or target")
                if self.psi[x][y].src != self.groups[y] or self.psi[x][y].dst != self.groups[xy]:
                    raise ModuleError(f"psi[{x}][{y}] has the wrong source or target")

    @property
    def homogeneous(self) -> bool:
        return len(set(self.groups)) <= 1

    def group(self, x) -> FiniteAbelianGroup:
        return self.groups[x]

    def validate(self) -> ValidationReport:
        return validate_module(self)

    def check(self) -> "SQModule":
        rep = validate_module(self)
        if not rep.ok:
            raise ModuleAxiomError(rep)
        return self

    # serialisation ------------------------------------------------------------
    def to_json(self) -> dict:
        n = self.base.n
        return {
            "base": self.base.to_json(),
            "groups": {str(x): list(self.groups[x].factors) for x in range(n)},
            "phi": {f"{x},{y}": self.phi[x][y].to_json() for x in range(n) for y in range(n)},
            "psi": {f"{x},{y}": self.psi[x][y].to_json() for x in range(n) for y in range(n)},
            "eta": {str(x): self.eta[x].to_json() for x in range(n)},
        }

    def dumps(self):
        return json.dumps(self.to_json())

    @classmethod
    def from_json(cls, obj, base=None) -> "SQModule":
        if isinstance(obj, str):
            obj = json.loads(obj)
        try:
            X = base if base is not None else FiniteSymmetricRack.from_json(obj["base"])
            n = X.n
            groups = [FiniteAbelianGroup(obj["groups"][str(x)]) for x in range(n)]
            phi = [[AbHom(groups[x], groups[X.star(x, y)], obj["phi"][f"{x},{y}"])
                    for y in range(n)] for x in range(n)]
            psi = [[AbHom(groups[y], groups[X.star(x, y)], obj["psi"][f"{x},{y}"])
                    for y in range(n)] for x in range(n)]
            eta = [AbHom(groups[x], groups[int(X.rho[x])], obj["eta"][str(x)]) for x in range(n)]
        except (KeyError, TypeError) as exc:
            raise ModuleError(f"malformed module JSON: missing {exc}") from None
        except AbGroupError as exc:
            raise ModuleError(str(exc)) from None
        return cls(X, groups, phi, psi, eta)


@functools.lru_cache(maxsize=4096)
def _is_iso(h: AbHom) -> bool:
    return h.is_iso()


def validate_module(M: SQModule) -> ValidationReport:
    """Exhaustively check M1..M9 and return every violation."""
    X = M.base
    n = X.n
    op, inv, rho = X.op, X.inv_op, X.rho
    phi, psi, eta = M.phi, M.psi, M.eta
    rep = ValidationReport()
    for x, y in itertools.product(range(n), repeat=2):
        if not _is_iso(phi[x][y]):
            rep.add("invertible", (x, y))
    for x, y, z in itertools.product(range(n), repeat=3):
        xy, xz, yz = op[x, y], op[x, z], op[y, z]
        # M1
        if phi[xy][z] @ phi[x][y] != phi[xz][yz] @ phi[x][z]:
            rep.add("M1", (x, y, z))
        # M2
        if phi[xy][z] @ psi[x][y] != psi[xz][yz] @ phi[y][z]:
            rep.add("M2", (x, y, z))
        # M7
        if psi[xy][z] != phi[xz][yz] @ psi[x][z] + psi[xz][yz] @ psi[y][z]:
            rep.add("M7", (x, y, z))
    for x in range(n):
        if eta[int(rho[x])] @ eta[x] != AbHom.identity(M.groups[x]):
            rep.add("M3", (x,))
    for x, y in itertools.product(range(n), repeat=2):
        xy = op[x, y]
        rx, ry = int(rho[x]), int(rho[y])
        # M4
        if eta[xy] @ phi[x][y] != phi[rx][y] @ eta[x]:
            rep.add("M4", (x, y))
        # M5
        if eta[xy] @ psi[x][y] != psi[rx][y]:
            rep.add("M5", (x, y))
        # M6 and M8 use x *^-1 y and x * rho(y)
        xi = inv[x, y]
        xry = op[x, ry]
        if phi[xi][y] @ phi[x][ry] != AbHom.identity(M.groups[x]):
            rep.add("M6", (x, y))
        if phi[xi][y] @ psi[x][ry] @ eta[y] != -psi[xry][y]:
            rep.add("M8", (x, y))
    if X.quandle:
        for x in range(n):
            if phi[x][x] + psi[x][x] != AbHom.identity(M.groups[x]):
                rep.add("M9", (x,))
    return rep


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------

def constant_module(X: FiniteSymmetricRack, A: FiniteAbelianGroup, phi: AbHom, psi: AbHom,
                    eta: AbHom) -> SQModule:
    """Homogeneous module using the same three maps at every index (not validated)."""
    n = X.n
    return SQModule(X, [A] * n, [[phi] * n for _ in range(n)], [[psi] * n for _ in range(n)],
                    [eta] * n)


def trivial_module(X: FiniteSymmetricRack, A: FiniteAbelianGroup) -> SQModule:
    """``phi = id``, ``psi = 0``, ``eta = -id``."""
    return constant_module(X, A, AbHom.identity(A), AbHom.zero(A), AbHom.scalar(A, -1)).check()


def involutive_pair_module(X: FiniteSymmetricRack, alpha: AbHom, beta: AbHom) -> SQModule:
    """``phi = alpha``, ``psi = 0``, ``eta = beta`` for commuting involutions.

    Over a quandle the idempotency axiom forces ``alpha = id``; other choices
    come back from :func:`validate_module` with M9 violations rather than
    being rejected here.
    """
    A = alpha.src
    if alpha.dst != A or beta.src != A or beta.dst != A:
        raise ModuleError("alpha and beta must be endomorphisms of the same group")
    ident = AbHom.identity(A)
    if alpha @ alpha != ident or beta @ beta != ident or alpha @ beta != beta @ alpha:
        raise ModuleError("alpha and beta must be commuting involutions")
    return constant_module(X, A, alpha, AbHom.zero(A), beta)


def order4_module(X: FiniteSymmetricRack, A: FiniteAbelianGroup) -> SQModule:
    """``phi = -id``, ``psi = 2 id``, ``eta = -id`` for ``A`` a sum of copies of Z/2 and Z/4."""
    if any(d not in (2, 4) for d in A.factors):
        raise ModuleError("every cyclic factor must have order 2 or 4")
    return constant_module(X, A, AbHom.scalar(A, -1), AbHom.scalar(A, 2),
                           AbHom.scalar(A, -1)).check()


def orbit_module(X: FiniteSymmetricRack, groups, f, g) -> SQModule:
    """Orbit-wise module: ``A_x = groups[o]``, ``phi[x][y] = f[o]``, ``psi = 0``, ``eta[x] = g[o]``.

    ``o`` is the index of the orbit of ``x`` in ``X.orbits()``.  ``f[o]`` and
    ``g[o]`` must be commuting involutions of ``groups[o]``.
    """
    orbits = X.orbits()
    if not (len(groups) == len(f) == len(g) == len(orbits)):
        raise ModuleError(f"expected data for {len(orbits)} orbits")
    where = {x: i for i, orb in enumerate(orbits) for x in orb}
    for o in range(len(orbits)):
        A = groups[o]
        ident = AbHom.identity(A)
        if f[o].src != A or f[o].dst != A or g[o].src != A or g[o].dst != A:
            raise ModuleError(f"maps for orbit {o} must be endomorphisms of its group")
        if f[o] @ f[o] != ident or g[o] @ g[o] != ident or f[o] @ g[o] != g[o] @ f[o]:
            raise ModuleError(f"maps for orbit {o} must be commuting involutions")
    n = X.n
    Ax = [groups[where[x]] for x in range(n)]
    phi = [[f[where[x]] for _ in range(n)] for x in range(n)]
    psi = [[AbHom.zero(Ax[y], Ax[X.star(x, y)]) for y in range(n)] for x in range(n)]
    eta = [g[where[x]] for x in range(n)]
    return SQModule(X, Ax, phi, psi, eta)


# ---------------------------------------------------------------------------
# morphisms
# ---------------------------------------------------------------------------

@dataclass(eq=False)
class XMap:
    """A family ``f[x] : A_x -> B_x`` between modules over the same base."""

    src: SQModule
    dst: SQModule
    f: tuple

    def is_iso(self) -> bool:
        return all(h.is_iso() for h in self.f)


def validate_xmap(F: XMap) -> ValidationReport:
    """Check the three naturality squares at every argument."""
    M, N = F.src, F.dst
    X = M.base
    if N.base != X:
        raise ModuleError("modules live over different bases")
    rep = ValidationReport()
    f = F.f
    for x in range(X.n):
        if f[x].src != M.groups[x] or f[x].dst != N.groups[x]:
            raise ModuleError(f"component {x} has the wrong source or target")
    for x, y in itertools.product(range(X.n), repeat=2):
        xy = X.star(x, y)
        if f[xy] @ M.phi[x][y] != N.phi[x][y] @ f[x]:
            rep.add("phi-square", (x, y))
        if f[xy] @ M.psi[x][y] != N.psi[x][y] @ f[y]:
            rep.add("psi-square", (x, y))
    for x in range(X.n):
        if f[int(X.rho[x])] @ M.eta[x] != N.eta[x] @ f[x]:
            rep.add("eta-square", (x,))
    return rep


def modules_equal(M: SQModule, N: SQModule) -> bool:
    return (M.base == N.base and M.groups == N.groups and M.phi == N.phi
            and M.psi == N.psi and M.eta == N.eta)
