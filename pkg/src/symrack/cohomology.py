"""(Co)homology of a symmetric rack with coefficients in a homogeneous module.

The chain groups are free on words ``(x_1, ..., x_n)``; boundary coefficients
are elements of the symmetric rack algebra acting on a single abelian group
``A`` through the matrices ``Phi[x][y]``, ``Psi[x][y]`` and ``H[x]``.

Everything is assembled as integer block matrices:

* ``boundary_matrix(n)`` has a row block for every ``n``-word and a column
  block for every ``(n-1)``-word; block ``(w, w')`` is the action matrix of
  the coefficient of ``w'`` in ``d_n(w)``.  Read as a map ``A^{X^(n-1)} ->
  A^{X^n}`` it is the coboundary on cochains.
* degeneracy generators (U, V and, for quandles, W) are lists of
  ``(matrix, word)`` terms.

Cohomology is computed with cochains that annihilate the degeneracies;
homology with the transposed (right) action on the quotient complex.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field

import numpy as np

from .abgrp import (AbGroupError, FiniteAbelianGroup, contains, map_kernel, subquotient)
from .modules import ModuleError, SQModule, validate_module
from .racks import FiniteSymmetricRack, ValidationReport

MAX_COLUMNS = 200_000
DEFAULT_MAX_DEGREE = 3


class CohomologyError(ValueError):
    pass


class ResourceGuard(RuntimeError):
    """Raised instead of silently truncating a computation that is too large."""


# ---------------------------------------------------------------------------
# coefficient action
# ---------------------------------------------------------------------------

def _reduce(mat, factors):
    m = np.array(mat, dtype=np.int64).reshape(len(factors), len(factors))
    for i, d in enumerate(factors):
        if d:
            m[i] %= d
    return m


class CoeffAction:
    """Matrices of the generators ``phi_{x,y}``, ``psi_{x,y}``, ``eta_x`` acting on ``A``."""

    def __init__(self, X: FiniteSymmetricRack, A: FiniteAbelianGroup, Phi, Psi, H):
        self.X = X
        self.A = A
        f = A.factors
        n = X.n
        self.Phi = [[_reduce(Phi[x][y], f) for y in range(n)] for x in range(n)]
        self.Psi = [[_reduce(Psi[x][y], f) for y in range(n)] for x in range(n)]
        self.H = [_reduce(H[x], f) for x in range(n)]
        self.k = A.rank

    @property
    def identity(self):
        return np.eye(self.k, dtype=np.int64)

    def eq(self, P, Q) -> bool:
        D = np.asarray(P, dtype=np.int64) - np.asarray(Q, dtype=np.int64)
        return all(not d or not np.any(D[i] % d) if d else not np.any(D[i])
                   for i, d in enumerate(self.A.factors))

    def relations(self) -> ValidationReport:
        """Check A1..A9 (and A10 over quandles) as matrix identities."""
        X = self.X
        n = X.n
        op, rho = X.op, X.rho
        Phi, Psi, H = self.Phi, self.Psi, self.H
        I = self.identity
        rep = ValidationReport()
        from .abgrp import AbHom
        for x, y in itertools.product(range(n), repeat=2):
            try:
                if not AbHom(self.A, self.A, Phi[x][y]).is_iso():
                    rep.add("A1", (x, y))
            except AbGroupError:
                rep.add("A1", (x, y))
        for x, y, z in itertools.product(range(n), repeat=3):
            xy, xz, yz = op[x, y], op[x, z], op[y, z]
            if not self.eq(Phi[xy][z] @ Phi[x][y], Phi[xz][yz] @ Phi[x][z]):
                rep.add("A2", (x, y, z))
            if not self.eq(Phi[xy][z] @ Psi[x][y], Psi[xz][yz] @ Phi[y][z]):
                rep.add("A3", (x, y, z))
            if not self.eq(Psi[xy][z], Phi[xz][yz] @ Psi[x][z] + Psi[xz][yz] @ Psi[y][z]):
                rep.add("A8", (x, y, z))
        for x in range(n):
            if not self.eq(H[rho[x]] @ H[x], I):
                rep.add("A4", (x,))
        for x, y in itertools.product(range(n), repeat=2):
            xy, rx, ry = op[x, y], rho[x], rho[y]
            if not self.eq(Phi[rx][y] @ H[x], H[xy] @ Phi[x][y]):
                rep.add("A5", (x, y))
            if not self.eq(Psi[rx][y], H[xy] @ Psi[x][y]):
                rep.add("A6", (x, y))
            xry = op[x, ry]
            if not self.eq(Phi[xry][y] @ Phi[x][ry], I):
                rep.add("A7", (x, y))
            if not self.eq(Phi[xry][y] @ Psi[x][ry] @ H[y], -Psi[xry][y]):
                rep.add("A9", (x, y))
        if X.quandle:
            for x in range(n):
                if not self.eq(Phi[x][x] + Psi[x][x], I):
                    rep.add("A10", (x,))
        return rep

    def transpose(self) -> "CoeffAction":
        """The right action given by transposed matrices (needed for homology)."""
        from .abgrp import AbHom
        n = self.X.n
        try:
            for mats in (self.Phi, self.Psi):
                for x, y in itertools.product(range(n), repeat=2):
                    AbHom(self.A, self.A, mats[x][y].T)
            for x in range(n):
                AbHom(self.A, self.A, self.H[x].T)
        except AbGroupError as exc:
            raise CohomologyError(f"transposed action is not well defined: {exc}") from None
        return CoeffAction(self.X, self.A,
                           [[self.Phi[x][y].T for y in range(n)] for x in range(n)],
                           [[self.Psi[x][y].T for y in range(n)] for x in range(n)],
                           [h.T for h in self.H])

    def is_augmentation(self) -> bool:
        return augmentation_check(self)


def coeff_action(M: SQModule) -> CoeffAction:
    """Reduce a homogeneous module to its action matrices and verify A1..A10."""
    if not M.homogeneous:
        raise CohomologyError("cohomology needs a homogeneous module")
    rep = validate_module(M)
    if not rep.ok:
        raise ModuleError(f"module fails {sorted(rep.axioms())}")
    X = M.base
    n = X.n
    A = M.groups[0]
    C = CoeffAction(X, A,
                    [[M.phi[x][y].mat for y in range(n)] for x in range(n)],
                    [[M.psi[x][y].mat for y in range(n)] for x in range(n)],
                    [M.eta[x].mat for x in range(n)])
    rel = C.relations()
    if not rel.ok:
        raise CohomologyError(f"relations fail: {sorted(rel.axioms())}")
    return C


def augmentation_check(C: CoeffAction) -> bool:
    """Is this the trivial action ``Phi = id``, ``Psi = 0``, ``H = -id``?"""
    n = C.X.n
    I = C.identity
    Z = np.zeros_like(I)
    return all(C.eq(C.Phi[x][y], I) and C.eq(C.Psi[x][y], Z)
               for x in range(n) for y in range(n)) and all(C.eq(C.H[x], -I) for x in range(n))


# ---------------------------------------------------------------------------
# words, boundary and degeneracies (symbolic terms)
# ---------------------------------------------------------------------------
# A term is (kind, a, b, sign, word) with kind in {"phi", "psi", "eta", "one"};
# its matrix is sign * Phi[a][b], sign * Psi[a][b], sign * H[a] or sign * I.

def fold(X: FiniteSymmetricRack, word) -> int:
    return X.fold(word)


def boundary_terms(X: FiniteSymmetricRack, word, p: int = 0):
    """Terms of ``d_n(word)``; the empty tuple denotes the basepoint generator of ``C_0``."""
    n = len(word)
    if n == 0:
        raise CohomologyError("d_0 is not defined")
    if n == 1:
        (x,) = word
        return [("psi", X.star_inv(x, p), p, -1, ())]
    terms = []
    s_n = -1 if n % 2 else 1
    for j in range(2, n + 1):
        sign = (1 if j % 2 == 0 else -1) * s_n
        rest = word[: j - 1] + word[j:]
        terms.append(("phi", fold(X, rest), fold(X, word[j - 1:]), sign, rest))
        xj = word[j - 1]
        moved = tuple(X.star(w, xj) for w in word[: j - 1]) + word[j:]
        terms.append(("one", None, None, -sign, moved))
    no2 = (word[0],) + word[2:]
    terms.append(("psi", fold(X, no2), fold(X, word[1:]), s_n, word[1:]))
    return terms


def degeneracy_terms(X: FiniteSymmetricRack, n: int, variant: str):
    """Generators of ``D_n`` as lists of terms, labelled ``("U"|"V"|"W", word[, i])``."""
    variant = variant.lower()
    if variant == "sq" and not X.quandle:
        raise CohomologyError("the quandle variant needs a quandle base")
    if n == 0:
        return []
    gens = []
    rho = X.rho
    for w in itertools.product(range(X.n), repeat=n):
        gens.append((("U", w), [("eta", fold(X, w), None, 1, w),
                                ("one", None, None, -1, (int(rho[w[0]]),) + w[1:])]))
    if n >= 2:
        for w in itertools.product(range(X.n), repeat=n):
            for i in range(2, n + 1):
                xi = w[i - 1]
                rest = w[: i - 1] + w[i:]
                moved = tuple(X.star(a, xi) for a in w[: i - 1]) + (int(rho[xi]),) + w[i:]
                gens.append((("V", w, i), [("phi", fold(X, rest), fold(X, w[i - 1:]), 1, moved),
                                           ("one", None, None, 1, w)]))
    if variant == "sq":
        for w in itertools.product(range(X.n), repeat=n):
            if any(w[i] == w[i + 1] for i in range(n - 1)):
                gens.append((("W", w), [("one", None, None, 1, w)]))
    return gens


def _word_index(word, n_elems):
    idx = 0
    for a in word:
        idx = idx * n_elems + a
    return idx


_KIND = {"one": 0, "eta": 1, "phi": 2, "psi": 3}


def _term_slot(kinds, a, b, n):
    """Position in the stack ``[I, H[0..n), Phi[a][b], Psi[a][b]]``."""
    return np.select([kinds == 0, kinds == 1, kinds == 2],
                     [0, 1 + a, 1 + n + a * n + b], 1 + n + n * n + a * n + b)


def _compile(terms_per_row, n_elems):
    rows, cols, kinds, a, b, signs = [], [], [], [], [], []
    for r, terms in enumerate(terms_per_row):
        for kind, ta, tb, sign, w in terms:
            rows.append(r)
            cols.append(_word_index(w, n_elems))
            kinds.append(_KIND[kind])
            a.append(0 if ta is None else ta)
            b.append(0 if tb is None else tb)
            signs.append(sign)
    return tuple(np.array(v, dtype=np.int64) for v in (rows, cols, kinds, a, b, signs))


@functools.lru_cache(maxsize=256)
def _compiled_boundary(X: FiniteSymmetricRack, n: int, p: int):
    words = itertools.product(range(X.n), repeat=n)
    return _compile([boundary_terms(X, w, p) for w in words], X.n)


@functools.lru_cache(maxsize=256)
def _compiled_degeneracy(X: FiniteSymmetricRack, n: int, variant: str):
    gens = degeneracy_terms(X, n, variant)
    return _compile([g[1] for g in gens], X.n), [g[0] for g in gens]


def _term_matrix(C: CoeffAction, kind, a, b, sign):
    if kind == "phi":
        return sign * C.Phi[a][b]
    if kind == "psi":
        return sign * C.Psi[a][b]
    if kind == "eta":
        return sign * C.H[a]
    return sign * C.identity


# ---------------------------------------------------------------------------
# the complex
# ---------------------------------------------------------------------------

@dataclass
class ComplexSlice:
    degree: int
    basepoint: int
    boundary: np.ndarray          # rows: n-words x k, cols: (n-1)-words x k
    degeneracies: np.ndarray      # rows: generators x k, cols: n-words x k
    labels: list = field(default_factory=list)

    def to_json(self):
        return {"degree": self.degree, "basepoint": self.basepoint,
                "boundary": self.boundary.tolist(), "degeneracies": self.degeneracies.tolist(),
                "labels": [list(map(lambda t: list(t) if isinstance(t, tuple) else t, lab))
                           for lab in self.labels]}


def _dot(A, B):
    """Exact integer product; int64 when the entries are provably small enough."""
    A = np.asarray(A)
    B = np.asarray(B)
    if A.size and B.size:
        a = int(np.max(np.abs(A)))
        b = int(np.max(np.abs(B)))
        bound = a * b * max(A.shape[-1], 1)
        if bound < 2 ** 52:
            # float64 BLAS is exact below 2^53
            return np.rint(A.astype(np.float64).dot(B.astype(np.float64))).astype(np.int64)
        if bound < 2 ** 62:
            return A.astype(np.int64).dot(B.astype(np.int64))
    return A.astype(object).dot(B.astype(object))


def _unique_rows(M):
    if M.dtype == object:
        uniq, inverse = np.unique(M.astype(str), axis=0, return_inverse=True)
        keep = {}
        for i, j in enumerate(np.asarray(inverse).ravel()):
            keep.setdefault(int(j), i)
        return M[[keep[j] for j in range(len(uniq))]], np.asarray(inverse).ravel()
    A = np.ascontiguousarray(M)
    keys = A.view(np.dtype((np.void, A.dtype.itemsize * A.shape[1]))).ravel()
    _, first, inverse = np.unique(keys, return_index=True, return_inverse=True)
    return A[first], np.asarray(inverse).ravel()


def _nonzero_rows(P, mod):
    """Boolean per row: is row ``i`` nonzero modulo ``mod[i]`` (0 meaning no reduction)?"""
    if not len(P):
        return np.zeros(0, dtype=bool)
    m = np.array(mod, dtype=object if P.dtype == object else np.int64)[:, None]
    safe = np.where(m == 0, 1, m) if P.dtype != object else np.array([[d or 1] for d in mod], dtype=object)
    R = np.where(m == 0, P, P % safe)
    return np.array([bool(np.any(r != 0)) for r in R]) if P.dtype == object else np.any(R != 0, axis=1)


class Complex:
    """Block matrices of the chain complex for one rack, one action and one variant."""

    def __init__(self, C: CoeffAction, variant: str | None = None, basepoint: int = 0,
                 max_columns: int = MAX_COLUMNS):
        X = C.X
        self.C = C
        self.X = X
        self.variant = (("sq" if X.quandle else "sr") if variant is None else variant.lower())
        if self.variant not in ("sq", "sr"):
            raise CohomologyError(f"unknown variant {variant!r}")
        if self.variant == "sq" and not X.quandle:
            raise CohomologyError("the quandle variant needs a quandle base")
        if not 0 <= basepoint < X.n:
            raise CohomologyError(f"basepoint {basepoint} is not an element of the rack")
        self.p = basepoint
        self.k = C.k
        self.max_columns = max_columns
        self._bd = {}
        self._gen = {}

    def nwords(self, n):
        return 1 if n == 0 else self.X.n ** n

    def moduli(self, n):
        return list(self.C.A.factors) * self.nwords(n)

    def _guard(self, n):
        cols = self.nwords(n) * self.k
        if cols > self.max_columns:
            raise ResourceGuard(f"degree {n} needs {cols} columns (limit {self.max_columns})")

    def _assemble(self, table, nrows, ncols_words):
        """Block matrix from a compiled term table (see :func:`_compile`)."""
        k = self.k
        rows, cols, kinds, a, b, signs = table
        M = np.zeros((nrows, ncols_words, k, k), dtype=np.int64)
        if len(rows) and k:
            blocks = self._term_stack()[_term_slot(kinds, a, b, self.X.n)] * signs[:, None, None]
            np.add.at(M, (rows, cols), blocks)
        f = np.array(self.C.A.factors, dtype=np.int64)
        if k and f.all():
            M %= f[None, None, :, None]
        elif k:
            fin = f > 0
            M[:, :, fin, :] %= f[fin][None, None, :, None]
        return M.transpose(0, 2, 1, 3).reshape(nrows * k, ncols_words * k)

    def _term_stack(self):
        """All k x k matrices a term can refer to, indexed by :func:`_term_slot`."""
        if not hasattr(self, "_stack"):
            C, n = self.C, self.X.n
            mats = [C.identity] + [C.H[a] for a in range(n)]
            mats += [C.Phi[a][b] for a in range(n) for b in range(n)]
            mats += [C.Psi[a][b] for a in range(n) for b in range(n)]
            self._stack = np.array(mats, dtype=np.int64).reshape(len(mats), self.k, self.k)
        return self._stack

    def boundary(self, n) -> np.ndarray:
        """Matrix of ``d_n`` (rows ``n``-words, columns ``(n-1)``-words)."""
        if n < 1:
            raise CohomologyError("boundary is defined for n >= 1")
        if n not in self._bd:
            self._guard(n)
            table = _compiled_boundary(self.X, n, self.p)
            self._bd[n] = self._assemble(table, self.nwords(n), self.nwords(n - 1))
        return self._bd[n]

    def degeneracy(self, n):
        """``(matrix, labels)`` with one row block per generator of ``D_n``."""
        if n not in self._gen:
            self._guard(n)
            table, labels = _compiled_degeneracy(self.X, n, self.variant)
            M = self._assemble(table, len(labels), self.nwords(n))
            self._gen[n] = (M, labels)
        return self._gen[n]

    def slice(self, n) -> ComplexSlice:
        G, labels = self.degeneracy(n)
        return ComplexSlice(n, self.p, self.boundary(n), G, labels)

    # ----------------------------------------------------------------- checks
    def dd_zero(self, n) -> bool:
        """``d_{n-1} d_n = 0`` (as a product of block matrices, reduced mod A)."""
        P = _dot(self.boundary(n), self.boundary(n - 1))
        f = self.C.A.factors
        mod = f * self.nwords(n)
        return not _nonzero_rows(P, mod).any()

    def closure_failures_homology(self, n):
        """Generators ``g`` of ``D_n`` with ``d_n(a g)`` outside ``D_{n-1}`` for some ``a`` in ``A``.

        Chains carry the right action ``a . c = M(c)^T a``, so ``a g`` for
        ``a = e_i`` is row ``i`` of the generator's row block and the boundary
        of a row vector ``r`` is ``r @ B_n``.  Returns a list of labels.
        """
        self.C.transpose()  # raises when the right action is ill defined
        G, labels = self.degeneracy(n)
        k = self.k
        span = self.degeneracy(n - 1)[0] if n > 1 else np.zeros((0, self.k), dtype=np.int64)
        images = self._reduce_rows_mod(_dot(G, self.boundary(n)), n - 1)
        bad = []
        if not len(images):
            return bad
        # many generators share images; test each distinct nonzero row once
        uniq, inverse = _unique_rows(images)
        nz = np.any(uniq != 0, axis=1)
        ok_u = np.ones(len(uniq), dtype=bool)
        if nz.any():
            ok_u[nz] = contains(span, self.moduli(n - 1), uniq[nz])
        ok = ok_u[inverse]
        for r in range(len(labels)):
            if not ok[r * k:(r + 1) * k].all():
                bad.append(labels[r])
        return bad

    def _reduce_rows_mod(self, M, n):
        """Reduce every column of ``M`` modulo the factor of its coordinate in degree ``n``."""
        f = np.array(self.C.A.factors, dtype=np.int64)
        if M.dtype == object or not len(M) or not f.any():
            return M
        R = M.reshape(len(M), -1, self.k)
        if f.all():
            R = R % f[None, None, :]
        else:
            R = R.copy()
            fin = f > 0
            R[:, :, fin] %= f[fin][None, None, :]
        return R.reshape(M.shape)

    def _span_rows(self, n):
        if n == 0:
            return []
        G, _ = self.degeneracy(n)
        return [list(r) for r in G]

    def closure_failures_cochain(self, n):
        """Cochain form: ``delta`` maps the annihilator of ``D_{n-1}`` into that of ``D_n``.

        Returns the labels of generators of ``D_n`` on which some
        ``delta f`` (``f`` annihilating ``D_{n-1}``) does not vanish.
        """
        gens = self.cochain_generators(n - 1)
        if not gens:
            return []
        G, labels = self.degeneracy(n)
        if not len(G):
            return []
        vals = _dot(G, _dot(self.boundary(n), np.array(gens, dtype=object).T))
        mod = list(self.C.A.factors) * len(labels)
        rows = np.flatnonzero(_nonzero_rows(vals, mod))
        return [labels[i] for i in sorted({int(r) // self.k for r in rows})]

    # ------------------------------------------------------------- cochains
    def cochain_generators(self, n):
        """Generators of ``{f in A^{X^n} : f annihilates D_n}``."""
        self._guard(n)
        if n == 0:
            return [list(e) for e in np.eye(self.k, dtype=np.int64)]
        G, _ = self.degeneracy(n)
        rmod = list(self.C.A.factors) * (len(G) // self.k) if self.k else []
        return [list(v) for v in map_kernel(G, self.moduli(n), rmod)]

    def cohomology(self, n) -> FiniteAbelianGroup:
        self._guard(n + 1)
        if self.k == 0:
            return FiniteAbelianGroup(())
        mod_n = self.moduli(n)
        rows = []
        rmod = []
        if n >= 1:
            G, _ = self.degeneracy(n)
            rows.append(G)
            rmod += list(self.C.A.factors) * (len(G) // self.k)
        B1 = self.boundary(n + 1)
        rows.append(B1)
        rmod += self.moduli(n + 1)
        F = np.vstack(rows)
        Z = map_kernel(F, mod_n, rmod)
        if n == 0:
            B = []
        else:
            prev = self.cochain_generators(n - 1)
            B = [list(r) for r in _dot(self.boundary(n), np.array(prev, dtype=object).T).T] if prev else []
        return subquotient(Z, B, mod_n)

    def homology(self, n) -> FiniteAbelianGroup:
        """``{c : d c in D_{n-1} (x) A} / (D_n (x) A + im d_{n+1})`` with the right action.

        With ``a . c = M(c)^T a`` the chain boundary is the full transpose of
        the block matrix and ``D_n (x) A`` is spanned by the rows of the
        degeneracy matrix.
        """
        self._guard(n + 1)
        if self.k == 0:
            return FiniteAbelianGroup(())
        self.C.transpose()
        mod_n = self.moduli(n)
        if n == 0:
            Z = None
        else:
            Z = map_kernel(self.boundary(n).T, mod_n, self.moduli(n - 1),
                           dst_relations=self._span_rows(n - 1))
        gens = self._span_rows(n)
        B1 = self.boundary(n + 1)
        gens += [list(r) for r in B1]
        return subquotient(Z, gens, mod_n)


# ---------------------------------------------------------------------------
# convenience functions
# ---------------------------------------------------------------------------

def _complex(X, M_or_C, variant, basepoint):
    C = M_or_C if isinstance(M_or_C, CoeffAction) else coeff_action(M_or_C)
    if C.X != X:
        raise CohomologyError("module lives over a different rack")
    return Complex(C, variant, basepoint)


def boundary(X, C, n, p=0):
    return _complex(X, C, "sr", p).boundary(n)


def degeneracy_generators(X, C, n, variant):
    return _complex(X, C, variant, 0).degeneracy(n)


def cochain_space(X, C, n, variant):
    return _complex(X, C, variant, 0).cochain_generators(n)


def _check_degree(n, max_degree):
    if n < 0:
        raise CohomologyError("degree must be non-negative")
    if max_degree is not None and n > max_degree:
        raise ResourceGuard(f"degree {n} exceeds the configured maximum {max_degree}")


def cohomology_group(X, M, n, variant=None, basepoint=0, max_degree=DEFAULT_MAX_DEGREE):
    _check_degree(n, max_degree)
    return _complex(X, M, variant, basepoint).cohomology(n)


def homology_group(X, M, n, variant=None, basepoint=0, max_degree=DEFAULT_MAX_DEGREE):
    _check_degree(n, max_degree)
    return _complex(X, M, variant, basepoint).homology(n)


def two_cocycle_check(kappa, C: CoeffAction, quandle=False) -> bool:
    """Direct check of the degree-2 cocycle conditions for ``kappa: X^2 -> A``."""
    X = C.X
    n = X.n
    A = C.A
    op, rho = X.op, X.rho
    K = [[np.array(A.reduce(kappa[x][y]), dtype=np.int64) for y in range(n)] for x in range(n)]

    def zero(v):
        return A.reduce([int(t) for t in v]) == A.zero()

    Phi, Psi, H = C.Phi, C.Psi, C.H
    for x1, x2, x3 in itertools.product(range(n), repeat=3):
        x12, x13, x23 = op[x1, x2], op[x1, x3], op[x2, x3]
        val = (-Phi[x13][x23] @ K[x1][x3] + Phi[x12][x3] @ K[x1][x2] + K[x12][x3]
               - K[x13][x23] - Psi[x13][x23] @ K[x2][x3])
        if not zero(val):
            return False
    for x1, x2 in itertools.product(range(n), repeat=2):
        x12 = op[x1, x2]
        if not zero(H[x12] @ K[x1][x2] - K[rho[x1]][x2]):
            return False
        if not zero(Phi[x1][x2] @ K[x12][rho[x2]] + K[x1][x2]):
            return False
    if quandle and any(not zero(K[x][x]) for x in range(n)):
        return False
    return True
