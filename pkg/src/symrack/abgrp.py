"""Finitely generated abelian groups and exact integer linear algebra.

Every group lives inside an *ambient* direct sum ``Z/m_1 + ... + Z/m_k``
where ``m_i == 0`` stands for a copy of ``Z``.  Subgroups are described by
generator lists; the moduli vectors ``m_i e_i`` are always understood to be
part of every lattice, so callers never have to add them by hand.

The public surface is small:

* :func:`snf` - exact Smith normal form with unimodular transforms,
* :class:`FiniteAbelianGroup` - a canonical decomposition into invariant factors,
* :class:`AbHom` - an integer matrix between two such groups,
* :func:`kernel`, :func:`image`, :func:`solve`, :func:`subquotient`.

>>> FiniteAbelianGroup([4, 6])
FiniteAbelianGroup('Z/2 + Z/12')
>>> subquotient([[1, 0], [0, 1]], [[2, 0], [0, 2]], [0, 0])
FiniteAbelianGroup('Z/2 + Z/2')
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np


class AbGroupError(ValueError):
    """Raised for malformed groups, ill-defined homomorphisms and bad inputs."""


# ---------------------------------------------------------------------------
# Smith normal form (exact, pure Python integers)
# ---------------------------------------------------------------------------

def _identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def snf(M):
    """Return ``(U, D, V)`` with ``U @ M @ V == D`` exactly.

    ``U`` and ``V`` are unimodular, ``D`` is diagonal with non-negative
    entries ``d_1 | d_2 | ...`` (zeros last).  Works with Python integers
    throughout, so there is no overflow.
    """
    A = [[int(v) for v in row] for row in M]
    m = len(A)
    n = len(A[0]) if m else 0
    U = _identity(m)
    V = _identity(n)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row_dst += q * row_src
        if q:
            A[dst] = [a + q * b for a, b in zip(A[dst], A[src])]
            U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, q):  # col_dst += q * col_src
        if q:
            for row in A:
                row[dst] += q * row[src]
            for row in V:
                row[dst] += q * row[src]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        while True:
            p = A[t][t]
            dirty = False
            for i in range(t + 1, m):
                add_row(i, t, -(A[i][t] // p))
                dirty |= A[i][t] != 0
            for j in range(t + 1, n):
                add_col(j, t, -(A[t][j] // p))
                dirty |= A[t][j] != 0
            if dirty:
                cands = [(abs(A[i][t]), i, None) for i in range(t + 1, m) if A[i][t]]
                cands += [(abs(A[t][j]), None, j) for j in range(t + 1, n) if A[t][j]]
                _, i, j = min(cands, key=lambda c: c[0])
                if i is not None:
                    swap_rows(t, i)
                else:
                    swap_cols(t, j)
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if A[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if A[t][t] < 0:
            A[t] = [-a for a in A[t]]
            U[t] = [-a for a in U[t]]
        t += 1
    return U, A, V


def smith_diagonal(M) -> list[int]:
    """Diagonal of the Smith form of ``M`` (length ``min(rows, cols)``)."""
    _, D, _ = snf(M)
    return [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0))]


# ---------------------------------------------------------------------------
# canonical invariant factors
# ---------------------------------------------------------------------------

def _factorize(n):
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def canonical_factors(orders: Iterable[int]) -> tuple[int, ...]:
    """Invariant factors of ``+ Z/o_i``: a divisibility chain, no 1s, zeros last."""
    orders = [abs(int(o)) for o in orders]
    free = sum(1 for o in orders if o == 0)
    powers: dict[int, list[int]] = {}
    for o in orders:
        if o > 1:
            for p, e in _factorize(o).items():
                powers.setdefault(p, []).append(p ** e)
    width = max((len(v) for v in powers.values()), default=0)
    chain = [1] * width
    for p, vals in powers.items():
        vals.sort(reverse=True)
        for i, v in enumerate(vals):
            chain[width - 1 - i] *= v
    return tuple(chain) + (0,) * free


_CYCLIC = re.compile(r"^Z(?:/(\d+)|(\d+))?$")


class FiniteAbelianGroup:
    """``Z/d_1 + ... + Z/d_r + Z^s`` with ``d_1 | d_2 | ...`` and every ``d_i > 1``.

    Despite the name a trailing free part is allowed (factor ``0``).
    Elements are tuples of coordinates reduced into ``[0, d_i)``.
    """

    __slots__ = ("factors",)

    def __init__(self, factors: Iterable[int] = ()):
        object.__setattr__(self, "factors", canonical_factors(factors))

    def __setattr__(self, name, value):
        raise AttributeError("FiniteAbelianGroup is immutable")

    @classmethod
    def parse(cls, text: str) -> "FiniteAbelianGroup":
        """Parse ``"Z"``, ``"Z/n"``, ``"Zn"``, ``"Z/a+Z/b"`` or ``"0"``."""
        text = text.replace(" ", "")
        if text in ("0", "", "1", "Z/1"):
            return cls(())
        orders = []
        for part in text.split("+"):
            mt = _CYCLIC.match(part)
            if not mt:
                raise AbGroupError(f"cannot parse abelian group {text!r}")
            num = mt.group(1) or mt.group(2)
            if num is not None and int(num) == 0:
                raise AbGroupError("Z/0 is ambiguous; write Z for the integers")
            orders.append(int(num) if num is not None else 0)
        return cls(orders)

    @property
    def rank(self) -> int:
        return len(self.factors)

    @property
    def is_finite(self) -> bool:
        return 0 not in self.factors

    @property
    def order(self):
        """Group order as an int, or ``math.inf`` when there is a free part."""
        return math.prod(self.factors) if self.is_finite else math.inf

    @property
    def exponent(self):
        if not self.is_finite:
            return 0
        return self.factors[-1] if self.factors else 1

    def zero(self) -> tuple[int, ...]:
        return (0,) * self.rank

    def reduce(self, vec: Sequence[int]) -> tuple[int, ...]:
        if len(vec) != self.rank:
            raise AbGroupError(f"vector of length {len(vec)} in a group of rank {self.rank}")
        return tuple(int(v) % d if d else int(v) for v, d in zip(vec, self.factors))

    def add(self, u, v):
        return self.reduce([a + b for a, b in zip(u, v)])

    def neg(self, u):
        return self.reduce([-a for a in u])

    def mul(self, c: int, u):
        return self.reduce([c * a for a in u])

    def elements(self):
        """All elements in mixed-radix order (last coordinate fastest)."""
        if not self.is_finite:
            raise AbGroupError("cannot enumerate an infinite group")
        return itertools.product(*[range(d) for d in self.factors])

    def index(self, vec) -> int:
        idx = 0
        for v, d in zip(self.reduce(vec), self.factors):
            idx = idx * d + v
        return idx

    def element(self, idx: int) -> tuple[int, ...]:
        out = []
        for d in reversed(self.factors):
            idx, r = divmod(idx, d)
            out.append(r)
        return tuple(reversed(out))

    def generators(self):
        return [tuple(int(i == j) for j in range(self.rank)) for i in range(self.rank)]

    def to_json(self):
        return {"factors": list(self.factors)}

    @classmethod
    def from_json(cls, obj):
        if isinstance(obj, str):
            return cls.parse(obj)
        if isinstance(obj, list):
            return cls(obj)
        return cls(obj["factors"])

    def name(self) -> str:
        if not self.factors:
            return "0"
        return " + ".join(f"Z/{d}" if d else "Z" for d in self.factors)

    def __eq__(self, other):
        return isinstance(other, FiniteAbelianGroup) and self.factors == other.factors

    def __hash__(self):
        return hash(("FAG", self.factors))

    def __repr__(self):
        return f"FiniteAbelianGroup({self.name()!r})"

    __str__ = name


def _reduce_matrix(mat, dst: FiniteAbelianGroup):
    return tuple(tuple(int(v) % d if d else int(v) for v in row)
                 for row, d in zip(mat, dst.factors))


@dataclass(frozen=True, eq=False)
class AbHom:
    """Homomorphism ``src -> dst`` given by an integer matrix (dst-rank x src-rank).

    Well-definedness means ``mat[i][j] * d_j(src) == 0 mod d_i(dst)``.
    Entries are stored reduced modulo the target factors, so structural
    equality of two homs is equality of their stored matrices.
    """

    src: FiniteAbelianGroup
    dst: FiniteAbelianGroup
    mat: tuple

    def __post_init__(self):
        rows = [list(r) for r in self.mat]
        if len(rows) != self.dst.rank or any(len(r) != self.src.rank for r in rows):
            raise AbGroupError(
                f"matrix shape does not match {self.src.rank} -> {self.dst.rank}")
        for i, di in enumerate(self.dst.factors):
            for j, dj in enumerate(self.src.factors):
                v = int(rows[i][j]) * dj
                if (v % di if di else v) != 0:
                    raise AbGroupError(
                        f"ill-defined homomorphism: entry ({i},{j}) = {rows[i][j]} "
                        f"sends an element of order {dj or 'inf'} into Z/{di or 'Z'}")
        object.__setattr__(self, "mat", _reduce_matrix(rows, self.dst))

    # constructors -----------------------------------------------------------
    @classmethod
    def identity(cls, G):
        return cls(G, G, _identity(G.rank))

    @classmethod
    def zero(cls, G, H=None):
        H = G if H is None else H
        return cls(G, H, [[0] * G.rank for _ in range(H.rank)])

    @classmethod
    def scalar(cls, G, c: int):
        return cls(G, G, [[c * int(i == j) for j in range(G.rank)] for i in range(G.rank)])

    # evaluation and arithmetic ---------------------------------------------
    def __call__(self, vec):
        vec = self.src.reduce(vec)
        return self.dst.reduce([sum(a * b for a, b in zip(row, vec)) for row in self.mat])

    def compose(self, other: "AbHom") -> "AbHom":
        """``self o other`` (apply ``other`` first)."""
        if other.dst != self.src:
            raise AbGroupError(f"cannot compose: {other.dst} is not {self.src}")
        prod = [[sum(self.mat[i][t] * other.mat[t][j] for t in range(self.src.rank))
                 for j in range(other.src.rank)] for i in range(self.dst.rank)]
        return AbHom(other.src, self.dst, prod)

    __matmul__ = compose

    def _check_parallel(self, other):
        if self.src != other.src or self.dst != other.dst:
            raise AbGroupError("homomorphisms have different source or target")

    def __add__(self, other):
        self._check_parallel(other)
        return AbHom(self.src, self.dst, [[a + b for a, b in zip(r, s)]
                                          for r, s in zip(self.mat, other.mat)])

    def __neg__(self):
        return AbHom(self.src, self.dst, [[-a for a in r] for r in self.mat])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, c: int):
        return AbHom(self.src, self.dst, [[c * a for a in r] for r in self.mat])

    __rmul__ = __mul__

    def __eq__(self, other):
        return (isinstance(other, AbHom) and self.src == other.src
                and self.dst == other.dst and self.mat == other.mat)

    def __hash__(self):
        return hash((self.src, self.dst, self.mat))

    def __repr__(self):
        return f"AbHom({self.src} -> {self.dst}, {[list(r) for r in self.mat]})"

    # structure ---------------------------------------------------------------
    def kernel(self):
        return kernel(self)

    def image(self):
        return image(self)

    def is_iso(self) -> bool:
        """Bijective?  Tested as trivial kernel plus full image."""
        if self.src.rank == 0 and self.dst.rank == 0:
            return True
        if kernel(self):
            return False
        return subquotient(None, image(self), self.dst.factors).rank == 0

    def inverse(self) -> "AbHom":
        if not self.is_iso():
            raise AbGroupError("not an isomorphism")
        cols = [solve(self, e) for e in self.dst.generators()]
        return AbHom(self.dst, self.src, [[cols[j][i] for j in range(len(cols))]
                                          for i in range(self.src.rank)])

    def to_json(self):
        return [list(r) for r in self.mat]


# ---------------------------------------------------------------------------
# lattice engine
# ---------------------------------------------------------------------------
# A lattice inside Z^k is spanned by explicit rows plus the implicit vectors
# m_j e_j (m_j > 0).  Implicit vectors let us reduce coordinate j modulo m_j
# whenever we like; a column's implicit vector becomes an explicit row just
# before that column is eliminated and is never reduced afterwards.

_SMALL = 2 ** 31


def _dtype_for(moduli):
    if moduli and all(0 < m < _SMALL for m in moduli):
        return np.int64
    if not moduli:
        return np.int64
    return object


def _to_array(rows, k, dtype):
    rows = [list(r) for r in rows]
    if not rows:
        return np.zeros((0, k), dtype=dtype)
    if dtype is object:
        arr = np.empty((len(rows), k), dtype=object)
        for i, r in enumerate(rows):
            if len(r) != k:
                raise AbGroupError("generator has the wrong length")
            for j, v in enumerate(r):
                arr[i, j] = int(v)
        return arr
    arr = np.asarray(rows, dtype=np.int64)
    if arr.shape[1] != k:
        raise AbGroupError("generator has the wrong length")
    return arr


class _Lattice:
    """Row echelon form of ``span(rows) + sum m_j Z e_j`` over the first ``stop`` columns."""

    def __init__(self, rows, moduli, stop=None):
        self.moduli = [int(m) for m in moduli]
        k = len(self.moduli)
        self.k = k
        self.stop = k if stop is None else stop
        self.dtype = _dtype_for(self.moduli)
        m = np.array(self.moduli, dtype=self.dtype) if k else np.zeros(0, dtype=np.int64)
        self._m = m
        self._fin = np.array([mm > 0 for mm in self.moduli], dtype=bool)
        G = rows if isinstance(rows, np.ndarray) else _to_array(rows, k, object)
        if len(G) and self.dtype is not object and G.dtype == object:
            # reduce arbitrary-size entries before narrowing to int64
            G = G % np.array(self.moduli, dtype=object)[None, :]
        G = G.astype(self.dtype, copy=True)
        if len(G):
            G[:, self._fin] %= m[self._fin]
        # the modulus rows m_j e_j are untouched until column j is reached, so
        # they can sit in the pool from the start
        fin_idx = [j for j in range(self.stop) if self.moduli[j] > 0]
        if fin_idx:
            extra = np.zeros((len(fin_idx), k), dtype=self.dtype)
            extra[np.arange(len(fin_idx)), fin_idx] = m[fin_idx]
            G = np.vstack([G, extra])
        alive = np.ones(len(G), dtype=bool)
        self.pivots = []  # (column, row)
        for c in range(self.stop):
            later = self._fin.copy()
            later[: c + 1] = False
            any_later = bool(later.any())
            while True:
                nz = np.flatnonzero((G[:, c] != 0) & alive)
                if len(nz) <= 1:
                    break
                i = nz[int(np.argmin(np.abs(G[nz, c])))]
                others = nz[nz != i]
                piv = G[i]
                q = G[others, c] // piv[c]
                sub = G[others] - np.outer(q, piv)
                if any_later:
                    sub[:, later] %= m[later]
                G[others] = sub
            if len(nz) == 1:
                i = nz[0]
                row = G[i].copy()
                if row[c] < 0:
                    row = -row
                    if any_later:
                        row[later] %= m[later]
                self.pivots.append((c, row))
                alive[i] = False
        G = G[alive]
        self.rest = G[np.any(G != 0, axis=1)] if len(G) else G

    def _later(self, c):
        """Mask of finite-modulus columns after ``c`` (cached), or ``None`` if empty."""
        cache = self.__dict__.setdefault("_later_cache", {})
        if c not in cache:
            later = self._fin.copy()
            later[: c + 1] = False
            cache[c] = later if later.any() else None
        return cache[c]

    def reduce(self, targets, track=False):
        """Reduce rows of ``targets`` by the pivots.

        Returns ``(ok, residue, quotients)``; ``ok[i]`` says the first ``stop``
        coordinates of target ``i`` were cleared.  ``quotients`` (when
        ``track``) holds the multiple of each pivot that was subtracted.
        """
        # with tracking the reduction must be an exact integer combination of
        # pivots, so no implicit-modulus shortcuts (and Python integers)
        dtype = object if track else self.dtype
        T = targets if isinstance(targets, np.ndarray) else _to_array(targets, self.k, dtype)
        T = T.astype(dtype, copy=True)
        ok = np.ones(len(T), dtype=bool)
        Q = np.zeros((len(T), len(self.pivots)), dtype=object) if track else None
        if len(T) == 0:
            return ok, T, Q
        if not track:
            T[:, self._fin] %= self._m[self._fin]
        has_pivot = set()
        for idx, (c, row) in enumerate(self.pivots):
            has_pivot.add(c)
            col = T[:, c]
            sel = np.flatnonzero(col != 0)
            if not len(sel):
                continue
            q, r = col[sel] // row[c], col[sel] % row[c]
            bad = r != 0
            if bad.any():
                ok[sel[bad]] = False
                q = np.where(bad, 0, q)
            keep = q != 0
            sel, q = sel[keep], q[keep].astype(dtype)
            if not len(sel):
                continue
            sub = T[sel] - np.outer(q, row.astype(dtype))
            if not track:
                later = self._later(c)
                if later is not None:
                    sub[:, later] %= self._m[later]
            T[sel] = sub
            if track:
                Q[sel, idx] = q
        for c in range(self.stop):
            if c not in has_pivot:
                ok &= T[:, c] == 0
        return ok, T, Q


def _moduli_of(group_or_moduli):
    if isinstance(group_or_moduli, FiniteAbelianGroup):
        return list(group_or_moduli.factors)
    return [int(m) for m in group_or_moduli]


def _map_rows(F, src_moduli, dst_moduli, src_gens=None, dst_relations=()):
    """Rows ``(F s, s)`` for generators ``s`` plus ``(t, 0)`` for target relations."""
    p, q = len(src_moduli), len(dst_moduli)
    moduli = list(dst_moduli) + list(src_moduli)
    small = bool(moduli) and all(0 < mm < 2 ** 20 for mm in moduli)
    dtype = np.int64 if small else object
    Fa = np.asarray(F, dtype=dtype).reshape(q, p) if q and p else np.zeros((q, p), dtype=dtype)
    if src_gens is None:
        S = np.eye(p, dtype=dtype)
    else:
        S = _to_array(src_gens, p, dtype)
    if small:
        mvec = np.array(moduli, dtype=np.int64)
        Fa = Fa % mvec[:q, None] if q else Fa
        S = S % mvec[None, q:]
    top = S.dot(Fa.T) if len(S) else np.zeros((0, q), dtype=dtype)
    rows = np.hstack([top, S]) if len(S) else np.zeros((0, p + q), dtype=dtype)
    rel = _to_array(dst_relations, q, dtype) if len(dst_relations) else np.zeros((0, q), dtype=dtype)
    if len(rel):
        rows = np.vstack([rows, np.hstack([rel, np.zeros((len(rel), p), dtype=dtype)])])
    if small and len(rows):
        rows = rows % mvec[None, :]
    return rows.reshape(len(rows), p + q), moduli


def map_kernel(F, src_moduli, dst_moduli, src_gens=None, dst_relations=()):
    """Generators of ``{s in S : F s in T}``.

    ``S`` is spanned by ``src_gens`` (default: the whole source ambient) and
    ``T`` by ``dst_relations``.  The result lives in the source ambient.
    """
    src_moduli, dst_moduli = _moduli_of(src_moduli), _moduli_of(dst_moduli)
    rows, moduli = _map_rows(F, src_moduli, dst_moduli, src_gens, dst_relations)
    lat = _Lattice(rows, moduli, stop=len(dst_moduli))
    q = len(dst_moduli)
    out = []
    for r in lat.rest:
        v = tuple(int(x) % m if m else int(x) for x, m in zip(r[q:], src_moduli))
        if any(v):
            out.append(v)
    return out


def map_solve(F, src_moduli, dst_moduli, target, src_gens=None, dst_relations=()):
    """Some ``s`` in ``S`` with ``F s = target`` modulo ``T``, or ``None``."""
    src_moduli, dst_moduli = _moduli_of(src_moduli), _moduli_of(dst_moduli)
    rows, moduli = _map_rows(F, src_moduli, dst_moduli, src_gens, dst_relations)
    lat = _Lattice(rows, moduli, stop=len(dst_moduli))
    t = list(target) + [0] * len(src_moduli)
    ok, res, _ = lat.reduce([t])
    if not ok[0]:
        return None
    q = len(dst_moduli)
    return tuple((-int(x)) % m if m else -int(x) for x, m in zip(res[0][q:], src_moduli))


def map_solve_many(F, src_moduli, dst_moduli, targets, src_gens=None, dst_relations=()):
    """Vectorised :func:`map_solve`; returns a boolean array of solvability."""
    src_moduli, dst_moduli = _moduli_of(src_moduli), _moduli_of(dst_moduli)
    rows, moduli = _map_rows(F, src_moduli, dst_moduli, src_gens, dst_relations)
    lat = _Lattice(rows, moduli, stop=len(dst_moduli))
    T = [list(t) + [0] * len(src_moduli) for t in targets]
    ok, _, _ = lat.reduce(_to_array(T, len(moduli), lat.dtype) if T else
                          np.zeros((0, len(moduli)), dtype=lat.dtype))
    return ok


def contains(gens, moduli, targets):
    """Boolean array: is each target in ``span(gens) + sum m_j Z e_j``?"""
    moduli = _moduli_of(moduli)
    lat = _Lattice(gens, moduli)
    ok, _, _ = lat.reduce(targets)
    return ok


def _diagonalize(A, N=None):
    """Diagonal entries after row/column Euclid elimination of ``A``.

    With ``N`` given, the lattice is ``rowspan(A) + N Z^cols``; entries may then
    be reduced mod ``N`` at any point because ``N Z^cols`` is stable under
    every unimodular column operation.
    """
    A = np.array(A, dtype=object if N is None or N >= _SMALL else np.int64)
    diag = []
    while A.shape[0] and A.shape[1]:
        if N:
            A %= N
        nz = np.argwhere(A != 0)
        if len(nz) == 0:
            break
        i, j = nz[int(np.argmin(np.abs(A[A != 0])))]
        A[[0, i]] = A[[i, 0]]
        A[:, [0, j]] = A[:, [j, 0]]
        while True:
            p = A[0, 0]
            if len(A) > 1:
                q = A[1:, 0] // p
                A[1:] -= np.outer(q, A[0])
            if A.shape[1] > 1:
                q = A[0, 1:] // p
                A[:, 1:] -= np.outer(A[:, 0], q)
            if N:
                A[:, 1:] %= N
                A[1:, :] %= N
            col = np.flatnonzero(A[1:, 0] != 0) + 1
            row = np.flatnonzero(A[0, 1:] != 0) + 1
            if not len(col) and not len(row):
                break
            cand = [(abs(A[r, 0]), r, 0) for r in col] + [(abs(A[0, c]), 0, c) for c in row]
            _, r, c = min(cand, key=lambda t: t[0])
            if r:
                A[[0, r]] = A[[r, 0]]
            else:
                A[:, [0, c]] = A[:, [c, 0]]
        diag.append(int(A[0, 0]))
        A = A[1:, 1:]
    return diag


def quotient_invariants(relations, ncols: int, N=None) -> FiniteAbelianGroup:
    """``Z^ncols / (rowspan(relations) + N Z^ncols)`` (``N=None`` means no extra relations)."""
    if ncols == 0:
        return FiniteAbelianGroup(())
    rel = [list(r) for r in relations]
    if N:
        # shrink the relation set first: echelon form modulo N
        lat = _Lattice(rel, [N] * ncols)
        rel = [list(row) for _, row in lat.pivots]
    if not rel:
        return FiniteAbelianGroup([N or 0] * ncols)
    diag = _diagonalize(rel, N)
    orders = [math.gcd(d, N) if N else abs(d) for d in diag]
    orders += [N or 0] * (ncols - len(diag))
    return FiniteAbelianGroup(orders)


class SubquotientError(AbGroupError):
    def __init__(self, witness):
        super().__init__(f"generator {tuple(witness)} of B does not lie in Z")
        self.witness = tuple(witness)


def subquotient(Z, B, moduli) -> FiniteAbelianGroup:
    """Invariant factors of ``Z / B`` inside the ambient with the given moduli.

    ``Z`` and ``B`` are generator lists (``Z=None`` means the whole ambient).
    Raises :class:`SubquotientError` naming a generator of ``B`` outside ``Z``.
    """
    return subquotient_data(Z, B, moduli)[0]


def subquotient_data(Z, B, moduli):
    """Like :func:`subquotient` but also return the echelon basis of ``Z``."""
    moduli = _moduli_of(moduli)
    k = len(moduli)
    if Z is None:
        Z = [tuple(int(i == j) for j in range(k)) for i in range(k)]
    latZ = _Lattice(Z, moduli)
    B = [list(b) for b in B]
    extra = [[m * int(i == j) for j in range(k)] for i, m in enumerate(moduli) if m]
    T = B + extra
    if not T:
        return FiniteAbelianGroup([0] * len(latZ.pivots)), latZ
    ok, _, Q = latZ.reduce(_to_array(T, k, object), track=True)
    if not ok.all():
        bad = int(np.flatnonzero(~ok)[0])
        raise SubquotientError(T[bad])
    N = math.lcm(*moduli) if moduli and all(moduli) else None
    G = quotient_invariants([[int(v) for v in row] for row in Q], len(latZ.pivots), N)
    return G, latZ


# ---------------------------------------------------------------------------
# homomorphism-level wrappers
# ---------------------------------------------------------------------------

def kernel(f: AbHom):
    """Generators of ``ker f`` as coordinate tuples of ``f.src``."""
    return map_kernel(f.mat, f.src.factors, f.dst.factors)


def image(f: AbHom):
    """Generators of ``im f`` (the images of the source generators)."""
    return [v for v in (f(e) for e in f.src.generators()) if any(v)]


def solve(f: AbHom, target):
    """A preimage of ``target`` under ``f`` or ``None``."""
    return map_solve(f.mat, f.src.factors, f.dst.factors, f.dst.reduce(target))


class Presentation:
    """Abelian group ``Z^ngens / rowspan(relations)``."""

    def __init__(self, ngens: int, relations=()):
        self.ngens = ngens
        self.relations = [list(map(int, r)) for r in relations]

    def group(self) -> FiniteAbelianGroup:
        rel = [r for r in self.relations if any(r)]
        if not rel:
            return FiniteAbelianGroup([0] * self.ngens)
        diag = smith_diagonal(rel)
        return FiniteAbelianGroup(list(diag) + [0] * (self.ngens - len(diag)))


def counts_to_invariants(torsion_counts: dict[int, int]) -> FiniteAbelianGroup:
    """Recover a finite group from ``d -> |{g : d g = 0}|`` for all ``d | exponent``.

    Used by the brute-force oracles: for each prime ``p`` the number of
    invariant factors with ``p``-part at least ``p^j`` is
    ``log_p(|G[p^j]| / |G[p^(j-1)]|)``.
    """
    order = max(torsion_counts.values())
    if order == 1:
        return FiniteAbelianGroup(())
    orders = []
    for p in _factorize(order):
        j = 1
        prev = 1
        counts = []
        while p ** j in torsion_counts or (j == 1):
            c = torsion_counts.get(p ** j)
            if c is None:
                break
            ratio = c // prev
            e = round(math.log(ratio, p)) if ratio > 1 else 0
            if p ** e != ratio:
                raise AbGroupError("inconsistent torsion counts")
            counts.append(e)
            prev = c
            j += 1
        # counts[j-1] = number of cyclic p-factors with exponent >= j
        for j, cnt in enumerate(counts, start=1):
            nxt = counts[j] if j < len(counts) else 0
            orders += [p ** j] * (cnt - nxt)
    return FiniteAbelianGroup(orders)
