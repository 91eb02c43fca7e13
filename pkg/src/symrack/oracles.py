"""Brute-force enumerators used to cross-check the linear-algebra code paths.

Nothing here shares code with :mod:`symrack.ext` beyond the data
structures: factor sets are enumerated element by element, extension racks
are checked through their full operation tables, and H^2 is recovered from
element counts.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from .abgrp import FiniteAbelianGroup, counts_to_invariants
from .modules import SQModule


class OracleTooLarge(RuntimeError):
    pass


class _Tables:
    """Element-index tables for every fibre group and every structure map."""

    def __init__(self, M: SQModule):
        X = M.base
        self.M = M
        self.n = X.n
        self.sizes = [G.order for G in M.groups]
        self.elems = [list(G.elements()) for G in M.groups]
        self.add = []
        self.neg = []
        for G, el in zip(M.groups, self.elems):
            idx = {e: i for i, e in enumerate(el)}
            self.add.append(np.array([[idx[G.add(a, b)] for b in el] for a in el], dtype=np.int64))
            self.neg.append(np.array([idx[G.neg(a)] for a in el], dtype=np.int64))

        def table(h, src, dst):
            idx = {e: i for i, e in enumerate(self.elems[dst])}
            return np.array([idx[h(a)] for a in self.elems[src]], dtype=np.int64)

        op = X.op
        self.phi = [[table(M.phi[x][y], x, int(op[x, y])) for y in range(self.n)] for x in range(self.n)]
        self.psi = [[table(M.psi[x][y], y, int(op[x, y])) for y in range(self.n)] for x in range(self.n)]
        self.eta = [table(M.eta[x], x, int(X.rho[x])) for x in range(self.n)]


def candidate_count(M: SQModule) -> int:
    X = M.base
    return math.prod(M.groups[X.star(x, y)].order for x in range(X.n) for y in range(X.n))


def _candidates(M, chunk, limit):
    """Yield arrays of shape (k, n, n) of element indices covering all factor-set candidates."""
    X = M.base
    n = X.n
    total = candidate_count(M)
    if total > limit:
        raise OracleTooLarge(f"{total} candidates exceed the limit {limit}")
    radices = [M.groups[X.star(x, y)].order for x in range(n) for y in range(n)]
    for start in range(0, total, chunk):
        k = np.arange(start, min(total, start + chunk), dtype=np.int64)
        digits = np.zeros((len(k), n * n), dtype=np.int64)
        for pos in range(n * n - 1, -1, -1):
            digits[:, pos] = k % radices[pos]
            k = k // radices[pos]
        yield digits.reshape(-1, n, n)


def factor_set_mask(M: SQModule, S, variant: str) -> np.ndarray:
    """Boolean mask over candidates ``S`` (k, n, n) satisfying F1..F3 (+F4 for 'sq')."""
    T = _Tables(M)
    X = M.base
    op, rho = X.op, X.rho
    n = X.n
    ok = np.ones(len(S), dtype=bool)
    for x, y, z in itertools.product(range(n), repeat=3):
        xy, xz, yz = int(op[x, y]), int(op[x, z]), int(op[y, z])
        t = int(op[xy, z])
        add = T.add[t]
        lhs = add[S[:, xy, z], T.phi[xy][z][S[:, x, y]]]
        rhs = add[add[T.phi[xz][yz][S[:, x, z]], S[:, xz, yz]], T.psi[xz][yz][S[:, y, z]]]
        ok &= lhs == rhs
    for x, y in itertools.product(range(n), repeat=2):
        xy = int(op[x, y])
        ok &= S[:, int(rho[x]), y] == T.eta[xy][S[:, x, y]]
        ry = int(rho[y])
        xry = int(op[x, ry])
        ok &= T.add[x][T.phi[xry][y][S[:, x, ry]], S[:, xry, y]] == 0
    if variant == "sq":
        for x in range(n):
            ok &= S[:, x, x] == 0
    return ok


def extension_mask(M: SQModule, S, quandle):
    """Boolean mask: is the extension table built from each candidate a symmetric rack/quandle?

    Builds the full operation table of ``E(sigma)`` for every candidate and
    checks every axiom on it directly.  With ``quandle=None`` both masks are
    returned as ``(rack, quandle)``.
    """
    T = _Tables(M)
    X = M.base
    n = X.n
    off = np.cumsum([0] + T.sizes)[:-1]
    N = int(sum(T.sizes))
    fib = np.concatenate([np.full(s, x) for x, s in enumerate(T.sizes)])
    loc = np.concatenate([np.arange(s) for s in T.sizes])
    # base part of the table (without sigma) and the fibre index of each product
    base_loc = np.zeros((N, N), dtype=np.int64)
    base_fib = np.zeros((N, N), dtype=np.int64)
    for i in range(N):
        x, a = fib[i], loc[i]
        for j in range(N):
            y, b = fib[j], loc[j]
            xy = int(X.op[x, y])
            base_fib[i, j] = xy
            base_loc[i, j] = T.add[xy][T.phi[x][y][a], T.psi[x][y][b]]
    rho_tab = np.array([off[int(X.rho[fib[i]])] + T.eta[fib[i]][loc[i]] for i in range(N)])
    # rho does not depend on sigma
    I = np.arange(N)
    rho_ok = bool(np.all(rho_tab[rho_tab] == I))
    add_flat = [T.add[z] for z in range(n)]
    k = len(S)
    ok = np.full(k, rho_ok)
    # sigma contribution, shape (k, N, N)
    sig = S[:, fib[:, None], fib[None, :]]
    op = np.empty((k, N, N), dtype=np.int32)
    for z in range(n):
        mask = base_fib == z
        op[:, mask] = off[z] + add_flat[z][base_loc[mask][None, :], sig[:, mask]]
    # checks run on the survivors only; most candidates fail distributivity early
    alive = np.flatnonzero(ok)
    checks = [lambda o: np.all(np.sort(o, axis=1) == I[None, :, None], axis=(1, 2))]
    for l in range(N):
        checks.append(lambda o, l=l: _distributes_at(o, l))
    checks.append(lambda o: np.all(rho_tab[o] == o[:, rho_tab, :], axis=(1, 2)))
    checks.append(lambda o: np.all(o[np.arange(len(o))[:, None, None], o[:, :, rho_tab],
                                     I[None, None, :]] == I[None, :, None], axis=(1, 2)))
    for check in checks:
        if not len(alive):
            break
        alive = alive[check(op[alive])]
    ok = np.zeros(k, dtype=bool)
    ok[alive] = True
    idem = np.all(op[:, I, I] == I[None, :], axis=1)
    if quandle is None:
        return ok, ok & idem
    return ok & idem if quandle else ok


def _distributes_at(op, l):
    """``(i*j)*l == (i*l)*(j*l)`` for all i, j, per table in the stack ``op``."""
    k, N, _ = op.shape
    flat = op.reshape(k, N * N)
    il = op[:, :, l]
    left = np.take_along_axis(il, op.reshape(k, N * N), axis=1)
    right = np.take_along_axis(flat, (il[:, :, None] * N + il[:, None, :]).reshape(k, N * N), axis=1)
    return np.all(left == right, axis=1)


def enumerate_factor_sets(M: SQModule, variant: str, limit=10 ** 6, chunk=1 << 14):
    """All factor sets (as (k, n, n) index arrays) satisfying the conditions."""
    found = [S[factor_set_mask(M, S, variant)] for S in _candidates(M, chunk, limit)]
    n = M.base.n
    return np.concatenate(found) if found else np.zeros((0, n, n), dtype=np.int64)


def enumerate_coboundaries(M: SQModule):
    """The set of coboundaries (as tuples of element indices) by enumerating all ``v``."""
    T = _Tables(M)
    X = M.base
    n = X.n
    out = set()
    for v in itertools.product(*[range(s) for s in T.sizes]):
        if any(T.eta[x][v[x]] != v[int(X.rho[x])] for x in range(n)):
            continue
        sig = []
        for x, y in itertools.product(range(n), repeat=2):
            xy = int(X.op[x, y])
            add = T.add[xy]
            sig.append(int(add[add[T.phi[x][y][v[x]], T.psi[x][y][v[y]]], T.neg[xy][v[xy]]]))
        out.add(tuple(sig))
    return out


def brute_force_h2(M: SQModule, variant: str, limit=10 ** 6):
    """``(|Z^2|, |B^2|, H^2)`` by counting; H^2 is rebuilt from its d-torsion counts."""
    if any(not G.is_finite for G in M.groups):
        raise OracleTooLarge("infinite coefficients")
    T = _Tables(M)
    X = M.base
    n = X.n
    Z = enumerate_factor_sets(M, variant, limit)
    B = enumerate_coboundaries(M)
    zs = Z.reshape(len(Z), n * n)
    tgt = [int(X.op[x, y]) for x, y in itertools.product(range(n), repeat=2)]
    h = len(Z) // len(B)
    exponent = math.lcm(*[G.exponent for G in M.groups])
    counts = {}
    for d in range(1, exponent + 1):
        if exponent % d:
            continue
        # d * sigma computed fibrewise with the addition tables
        mult = np.zeros_like(zs)
        for _ in range(d):
            mult = np.stack([T.add[tgt[p]][mult[:, p], zs[:, p]] for p in range(n * n)], axis=1)
        in_b = sum(1 for row in map(tuple, mult.tolist()) if row in B)
        counts[d] = in_b // len(B)
    group = counts_to_invariants(counts) if h > 1 else FiniteAbelianGroup(())
    return len(Z), len(B), group
