"""Named instances: racks, coefficient groups and modules by short string names.

Rack names
    ``unknot-sq``                 two points swapped by rho
    ``trivial-<n>[-<perm>]``      trivial quandle; perm is ``id``, ``swap`` or
                                  ``p`` followed by the image digits, e.g. ``p1032``
    ``conj-<G>``                  conjugation quandle, rho = inverse
    ``core-<G>[-z<k>]``           core quandle, rho = id or ``y -> y z_k``
    ``dihedral-<n>``              core of Z/n with rho = id
    ``permrack-<n>-<perm>``       ``x * y = s(x)`` for an involution ``s``, rho = id
    ``census-<n>-<i>``            the i-th symmetric quandle of order n in :func:`symmetric_quandles`
    ``A*B``                       product of two named racks

Groups ``G`` for conj/core: ``Z<n>``, ``S3``, ``D<n>`` (order 2n), ``Z2xZ2``.

Module names are ``<kind>-<coeff>`` with kind ``trivial``, ``order4`` or
``pair`` (phi = id, psi = 0, eta = id) and a coefficient such as ``Z2``,
``Z/4`` or ``Z/2+Z/2``.
"""

from __future__ import annotations

import functools
import itertools
import json
import os
import re

import numpy as np

from .abgrp import AbHom, FiniteAbelianGroup
from .modules import SQModule, constant_module, order4_module, trivial_module
from .racks import (FiniteSymmetricRack, Group, RackError, conj, core, cyclic_group, dihedral,
                    dihedral_group, direct_product_group, product, symmetric_group, trivial)


class CatalogError(ValueError):
    pass


def group_by_name(name: str) -> Group:
    m = re.fullmatch(r"Z(\d+)", name)
    if m:
        return cyclic_group(int(m.group(1)))
    m = re.fullmatch(r"S(\d)", name)
    if m:
        return symmetric_group(int(m.group(1)))
    m = re.fullmatch(r"D(\d+)", name)
    if m:
        return dihedral_group(int(m.group(1)))
    parts = name.split("x")
    if len(parts) > 1:
        G = group_by_name(parts[0])
        for p in parts[1:]:
            G = direct_product_group(G, group_by_name(p))
        return G
    raise CatalogError(f"unknown group {name!r}")


def _perm(spec: str, n: int):
    if spec == "id":
        return list(range(n))
    if spec == "swap":
        if n % 2:
            raise CatalogError("swap needs an even number of points")
        return [i ^ 1 for i in range(n)]
    if spec.startswith("p") and len(spec) == n + 1 and spec[1:].isdigit():
        return [int(c) for c in spec[1:]]
    raise CatalogError(f"bad permutation {spec!r} for {n} points")


def _single(name: str) -> FiniteSymmetricRack:
    if name == "unknot-sq":
        return trivial(2, [1, 0])
    m = re.fullmatch(r"trivial-(\d+)(?:-(\w+))?", name)
    if m:
        n = int(m.group(1))
        return trivial(n, _perm(m.group(2) or "id", n))
    m = re.fullmatch(r"conj-(\w+)", name)
    if m:
        return conj(group_by_name(m.group(1)))
    m = re.fullmatch(r"core-([A-Za-z0-9]+?)(?:-z(\d+))?", name)
    if m:
        z = None if m.group(2) is None else int(m.group(2))
        return core(group_by_name(m.group(1)), z)
    m = re.fullmatch(r"dihedral-(\d+)", name)
    if m:
        return dihedral(int(m.group(1)))
    m = re.fullmatch(r"permrack-(\d+)-(\w+)", name)
    if m:
        n = int(m.group(1))
        s = _perm(m.group(2), n)
        op = np.tile(np.array(s)[:, None], (1, n))
        return FiniteSymmetricRack(op, list(range(n)))
    m = re.fullmatch(r"census-(\d+)-(\d+)", name)
    if m:
        found = symmetric_quandles(int(m.group(1)))
        i = int(m.group(2))
        if i >= len(found):
            raise CatalogError(f"only {len(found)} symmetric quandles of order {m.group(1)}")
        return found[i]
    raise CatalogError(f"unknown rack name {name!r}")


def rack_by_name(name: str) -> FiniteSymmetricRack:
    try:
        parts = [_single(p) for p in name.split("*")]
    except RackError as exc:
        raise CatalogError(f"{name}: {exc}") from None
    X = parts[0]
    for Y in parts[1:]:
        X = product(X, Y)
    X.name = name
    return X


def load_rack(ref: str) -> FiniteSymmetricRack:
    """A catalog name or a path to a rack JSON file."""
    if os.path.exists(ref):
        with open(ref) as fh:
            X = FiniteSymmetricRack.from_json(json.load(fh))
        X.name = os.path.basename(ref)
        return X
    return rack_by_name(ref)


def parse_coeff(text: str) -> FiniteAbelianGroup:
    """``Z``, ``Z/n``, ``Zn`` or plus-separated sums; canonicalized."""
    try:
        return FiniteAbelianGroup.parse(text)
    except Exception as exc:
        raise CatalogError(f"bad coefficient group {text!r}: {exc}") from None


def module_by_name(name: str, X: FiniteSymmetricRack) -> SQModule:
    kind, _, coeff = name.partition("-")
    if not coeff:
        raise CatalogError(f"module name {name!r} must look like <kind>-<coeff>")
    A = parse_coeff(coeff)
    if kind == "trivial":
        return trivial_module(X, A)
    if kind == "order4":
        return order4_module(X, A)
    if kind == "pair":
        ident = AbHom.identity(A)
        return constant_module(X, A, ident, AbHom.zero(A), ident).check()
    raise CatalogError(f"unknown module kind {kind!r}")


def load_module(ref: str, X: FiniteSymmetricRack | None) -> SQModule:
    if os.path.exists(ref):
        with open(ref) as fh:
            return SQModule.from_json(json.load(fh), base=X if X is not None else None)
    if X is None:
        raise CatalogError("a named module needs --rack")
    return module_by_name(ref, X)


# ---------------------------------------------------------------------------
# census of small symmetric quandles
# ---------------------------------------------------------------------------

def _canonical(op, rho):
    """Lexicographically smallest relabelling, used to deduplicate up to isomorphism."""
    n = len(op)
    best = None
    for p in itertools.permutations(range(n)):
        p = np.array(p)
        q = np.argsort(p)  # new label -> old label
        t = p[op[q[:, None], q[None, :]]]
        r = p[rho[q]]
        key = (tuple(t.ravel()), tuple(r))
        if best is None or key < best:
            best = key
    return best


@functools.lru_cache(maxsize=None)
def _quandle_tables(n):
    """All quandle operation tables on ``n`` points (right translations fixing their index)."""
    cols = []
    for y in range(n):
        cols.append([p for p in itertools.permutations(range(n)) if p[y] == y])
    out = []
    for choice in itertools.product(*cols):
        op = np.array(choice, dtype=np.int64).T  # op[x, y] = choice[y][x]
        left = op[op, :]  # (x*y)*z indexed [x, y, z]
        right = op[op[:, None, :], op[None, :, :]]  # (x*z)*(y*z)
        if np.array_equal(left, right):
            out.append(op)
    return out


@functools.lru_cache(maxsize=None)
def symmetric_quandles(n: int) -> list:
    """Every symmetric quandle of order ``n`` up to isomorphism, in a fixed order."""
    if n > 5:
        raise CatalogError("census is limited to order 5")
    seen = {}
    for op in _quandle_tables(n):
        for rho in itertools.permutations(range(n)):
            rho = np.array(rho)
            if not np.array_equal(rho[rho], np.arange(n)):
                continue
            try:
                X = FiniteSymmetricRack(op, rho)
            except RackError:
                continue
            key = _canonical(op, rho)
            if key not in seen:
                seen[key] = X
    out = []
    for i, key in enumerate(sorted(seen)):
        t, r = key
        X = FiniteSymmetricRack(np.array(t).reshape(n, n), list(r))
        X.name = f"census-{n}-{i}"
        out.append(X)
    return out


def small_modules(X: FiniteSymmetricRack, max_order=9) -> list:
    """Homogeneous constructor-library modules with ``|A| <= max_order``."""
    groups = [FiniteAbelianGroup(f) for f in
              ([1], [2], [3], [4], [2, 2], [5], [6], [7], [8], [2, 4], [2, 2, 2], [9], [3, 3])]
    groups = [A for A in groups if A.order <= max_order]
    out = []
    for A in groups:
        M = trivial_module(X, A)
        M.name = f"trivial-{A.name().replace(' ', '')}"
        out.append(M)
        if A.rank and all(d in (2, 4) for d in A.factors) and any(d == 4 for d in A.factors):
            M = order4_module(X, A)
            M.name = f"order4-{A.name().replace(' ', '')}"
            out.append(M)
        if A.rank and A.exponent > 2:
            ident = AbHom.identity(A)
            M = constant_module(X, A, ident, AbHom.zero(A), ident)
            if M.validate().ok:
                M.name = f"pair-{A.name().replace(' ', '')}"
                out.append(M)
    return out


def default_catalog(max_n=4) -> list:
    """Every symmetric quandle with at most ``max_n`` elements."""
    out = []
    for n in range(1, max_n + 1):
        out.extend(symmetric_quandles(n))
    return out
