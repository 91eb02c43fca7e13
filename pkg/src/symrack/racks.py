"""Finite symmetric racks and quandles stored as dense operation tables.

Elements are ``0 .. n-1``.  ``op[x, y]`` is ``x * y`` (right translation by
``y`` applied to ``x``), ``inv_op[x, y]`` is ``x *^-1 y`` and ``rho`` is the
good involution.  A symmetric rack satisfies

* right self-distributivity and bijective right translations,
* ``rho`` is an involution (S1),
* ``rho(x * y) = rho(x) * y`` (S2),
* ``x * rho(y) = x *^-1 y`` (S3),

and a symmetric quandle is additionally idempotent.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field

import numpy as np


class RackError(ValueError):
    """Structural problems (empty sets, wrong shapes, bad JSON)."""


class RackAxiomError(RackError):
    def __init__(self, report):
        first = report.violations[0]
        super().__init__(f"symmetric rack axiom {first.axiom} fails at {first.witness}")
        self.report = report


@dataclass(frozen=True)
class Violation:
    axiom: str
    witness: tuple

    def to_json(self):
        return {"axiom": self.axiom, "witness": list(self.witness)}


@dataclass
class ValidationReport:
    """All axiom violations found by an exhaustive check (empty means valid)."""

    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok

    def axioms(self) -> set:
        return {v.axiom for v in self.violations}

    def add(self, axiom, witness):
        self.violations.append(Violation(axiom, tuple(int(w) for w in witness)))

    def to_json(self):
        return {"ok": self.ok, "violations": [v.to_json() for v in self.violations]}


def _as_table(t, n=None):
    a = np.asarray(t, dtype=np.int64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise RackError("operation table must be square")
    if n is not None and a.shape[0] != n:
        raise RackError("table size mismatch")
    return a


def derive_inverse(op) -> np.ndarray:
    """``inv[x, y]`` with ``inv[x, y] * y == x``; entries are -1 where no preimage exists."""
    op = np.asarray(op)
    n = len(op)
    inv = -np.ones((n, n), dtype=np.int64)
    for y in range(n):
        for x in range(n):
            z = op[x, y]
            if 0 <= z < n and inv[z, y] < 0:
                inv[z, y] = x
    return inv


def validate(op, inv_op, rho, quandle: bool) -> ValidationReport:
    """Check every axiom exhaustively and report every violation with witnesses."""
    op = _as_table(op)
    n = len(op)
    if n == 0:
        raise RackError("a rack must have at least one element")
    inv_op = _as_table(inv_op, n)
    rho = np.asarray(rho, dtype=np.int64)
    if rho.shape != (n,):
        raise RackError("rho must have one entry per element")
    if op.min() < 0 or op.max() >= n or rho.min() < 0 or rho.max() >= n:
        raise RackError("table entries out of range")
    rep = ValidationReport()
    # right translations are bijections
    for y in range(n):
        col = op[:, y]
        if len(set(col.tolist())) != n:
            seen = {}
            for x in range(n):
                if col[x] in seen:
                    rep.add("bijectivity", (seen[col[x]], x, y))
                    break
                seen[col[x]] = x
    # inverse table agrees with op
    X = np.arange(n)
    bad = np.argwhere((inv_op < 0) | (inv_op >= n))
    for x, y in bad:
        rep.add("inverse", (x, y))
    safe_inv = np.clip(inv_op, 0, n - 1)
    bad = np.argwhere(op[safe_inv, X[None, :]] != X[:, None])
    for x, y in bad:
        if 0 <= inv_op[x, y] < n:
            rep.add("inverse", (x, y))
    # (x*y)*z == (x*z)*(y*z)
    lhs = op[op[:, :, None], X[None, None, :]]
    rhs = op[op[:, None, :], op[None, :, :]]
    for x, y, z in np.argwhere(lhs != rhs):
        rep.add("distributivity", (x, y, z))
    for x in np.flatnonzero(rho[rho] != X):
        rep.add("S1", (x,))
    for x, y in np.argwhere(rho[op] != op[rho[:, None], X[None, :]]):
        rep.add("S2", (x, y))
    true_inv = derive_inverse(op)
    for x, y in np.argwhere((op[:, rho] != true_inv) & (true_inv >= 0)):
        rep.add("S3", (x, y))
    if quandle:
        for x in np.flatnonzero(op[X, X] != X):
            rep.add("idempotency", (x,))
    return rep


def _frozen(a):
    a = np.array(a, dtype=np.int64)
    a.setflags(write=False)
    return a


class FiniteSymmetricRack:
    """A validated finite symmetric rack (or quandle).

    Construct through :meth:`from_tables` or one of the constructor helpers;
    use ``check=False`` only for tables already known to be valid.
    """

    def __init__(self, op, rho, quandle=None, inv_op=None, check=True):
        op = _as_table(op)
        if len(op) == 0:
            raise RackError("a rack must have at least one element")
        inv = derive_inverse(op) if inv_op is None else _as_table(inv_op, len(op))
        is_idem = bool(np.all(op[np.arange(len(op)), np.arange(len(op))] == np.arange(len(op))))
        quandle = is_idem if quandle is None else bool(quandle)
        if check:
            rep = validate(op, inv, rho, quandle)
            if not rep.ok:
                raise RackAxiomError(rep)
        self.op = _frozen(op)
        self.inv_op = _frozen(inv)
        self.rho = _frozen(rho)
        self.quandle = quandle
        self.name = None

    @classmethod
    def from_tables(cls, op, rho, quandle=None, inv_op=None):
        return cls(op, rho, quandle, inv_op)

    @property
    def n(self) -> int:
        return len(self.op)

    def __len__(self):
        return self.n

    def star(self, x, y) -> int:
        return int(self.op[x, y])

    def star_inv(self, x, y) -> int:
        return int(self.inv_op[x, y])

    def fold(self, word) -> int:
        """``((x1 * x2) * x3) * ... * xn`` for a non-empty word."""
        it = iter(word)
        acc = next(it)
        for y in it:
            acc = self.op[acc, y]
        return int(acc)

    @property
    def is_idempotent(self) -> bool:
        X = np.arange(self.n)
        return bool(np.all(self.op[X, X] == X))

    def validate(self) -> ValidationReport:
        return validate(self.op, self.inv_op, self.rho, self.quandle)

    def orbits(self) -> list[list[int]]:
        """Orbits under right translations together with ``rho``."""
        parent = list(range(self.n))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        def union(a, b):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)

        for x in range(self.n):
            union(x, int(self.rho[x]))
            for y in range(self.n):
                union(x, int(self.op[x, y]))
        groups: dict[int, list[int]] = {}
        for x in range(self.n):
            groups.setdefault(find(x), []).append(x)
        return sorted(groups.values())

    def __eq__(self, other):
        return (isinstance(other, FiniteSymmetricRack) and self.quandle == other.quandle
                and np.array_equal(self.op, other.op) and np.array_equal(self.rho, other.rho))

    def __hash__(self):
        return hash((self.op.tobytes(), self.rho.tobytes(), self.quandle))

    def __repr__(self):
        kind = "quandle" if self.quandle else "rack"
        label = f" {self.name}" if self.name else ""
        return f"<symmetric {kind}{label} on {self.n} elements>"

    # serialisation -----------------------------------------------------------
    def to_json(self) -> dict:
        return {"n": self.n, "op": self.op.tolist(), "rho": self.rho.tolist(),
                "quandle": self.quandle, "inv_op": self.inv_op.tolist()}

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    @classmethod
    def from_json(cls, obj, check=True) -> "FiniteSymmetricRack":
        if isinstance(obj, str):
            obj = json.loads(obj)
        try:
            n, op, rho = int(obj["n"]), obj["op"], obj["rho"]
        except (KeyError, TypeError, ValueError) as exc:
            raise RackError(f"malformed rack JSON: {exc}") from None
        if n <= 0:
            raise RackError("a rack must have at least one element")
        op = _as_table(op, n)
        quandle = obj.get("quandle")
        inv = obj.get("inv_op")
        inv = None if inv is None else _as_table(inv, n)
        return cls(op, rho, quandle, inv, check=check)


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------

def trivial(n: int, involution=None) -> FiniteSymmetricRack:
    """Trivial quandle ``x * y = x`` with the given involution (identity by default)."""
    if n <= 0:
        raise RackError("a rack must have at least one element")
    rho = list(range(n)) if involution is None else list(involution)
    op = np.tile(np.arange(n)[:, None], (1, n))
    return FiniteSymmetricRack(op, rho, quandle=True)


class Group:
    """A finite group by multiplication table; identity must be element 0."""

    def __init__(self, table, name=None):
        t = np.asarray(table, dtype=np.int64)
        n = len(t)
        if t.shape != (n, n) or n == 0:
            raise RackError("group table must be square and non-empty")
        if not (np.array_equal(t[0], np.arange(n)) and np.array_equal(t[:, 0], np.arange(n))):
            raise RackError("element 0 must be the identity")
        ab = t[t[:, :, None], np.arange(n)[None, None, :]]
        a_bc = t[np.arange(n)[:, None, None], t[None, :, :]]
        if not np.array_equal(ab, a_bc):
            raise RackError("group table is not associative")
        inv = [int(np.flatnonzero(t[g] == 0)[0]) for g in range(n)]
        self.table = t
        self.inv = np.array(inv)
        self.name = name

    @property
    def order(self):
        return len(self.table)

    def mul(self, a, b):
        return int(self.table[a, b])

    def center(self):
        n = self.order
        return [z for z in range(n) if np.array_equal(self.table[z], self.table[:, z])]


def cyclic_group(n: int) -> Group:
    a = np.arange(n)
    return Group((a[:, None] + a[None, :]) % n, name=f"Z{n}")


def direct_product_group(G: Group, H: Group) -> Group:
    n, m = G.order, H.order
    t = np.zeros((n * m, n * m), dtype=np.int64)
    for (a, b), (c, d) in itertools.product(itertools.product(range(n), range(m)), repeat=2):
        t[a * m + b, c * m + d] = G.table[a, c] * m + H.table[b, d]
    return Group(t, name=f"{G.name}x{H.name}")


def symmetric_group(k: int) -> Group:
    perms = sorted(itertools.permutations(range(k)))
    index = {p: i for i, p in enumerate(perms)}
    # (p*q)(i) = p(q(i)); the sorted order puts the identity first
    t = [[index[tuple(p[q[i]] for i in range(k))] for q in perms] for p in perms]
    return Group(t, name=f"S{k}")


def dihedral_group(n: int) -> Group:
    """Dihedral group of order ``2n``: ``r^i s^e`` stored as ``i + n*e``."""
    t = np.zeros((2 * n, 2 * n), dtype=np.int64)
    for i, e, j, f in itertools.product(range(n), range(2), range(n), range(2)):
        k = (i + (j if e == 0 else -j)) % n
        t[i + n * e, j + n * f] = k + n * ((e + f) % 2)
    return Group(t, name=f"D{n}")


def conj(G: Group) -> FiniteSymmetricRack:
    """Conjugation quandle ``x * y = y^-1 x y`` with ``rho(x) = x^-1``."""
    t, inv = G.table, G.inv
    n = G.order
    op = np.array([[t[t[inv[y], x], y] for y in range(n)] for x in range(n)])
    return FiniteSymmetricRack(op, inv.tolist(), quandle=True)


def core(G: Group, z=None) -> FiniteSymmetricRack:
    """Core quandle ``x * y = y x^-1 y``.

    ``rho`` is the identity, or ``y -> y z`` for a central element ``z`` of order 2.
    """
    t, inv = G.table, G.inv
    n = G.order
    op = np.array([[t[t[y, inv[x]], y] for y in range(n)] for x in range(n)])
    if z is None:
        rho = list(range(n))
    else:
        if z not in G.center() or z == 0 or t[z, z] != 0:
            raise RackError("z must be a central element of order 2")
        rho = [int(t[y, z]) for y in range(n)]
    return FiniteSymmetricRack(op, rho, quandle=True)


def dihedral(n: int) -> FiniteSymmetricRack:
    """Dihedral quandle ``R_n`` on ``Z/n``: ``x * y = 2y - x`` with ``rho = id``."""
    X = core(cyclic_group(n))
    X.name = f"dihedral-{n}"
    return X


def product(X: FiniteSymmetricRack, Y: FiniteSymmetricRack) -> FiniteSymmetricRack:
    """Componentwise product; element ``(x, y)`` is stored as ``x * |Y| + y``."""
    n, m = X.n, Y.n
    op = np.zeros((n * m, n * m), dtype=np.int64)
    for x1, y1, x2, y2 in itertools.product(range(n), range(m), range(n), range(m)):
        op[x1 * m + y1, x2 * m + y2] = X.op[x1, x2] * m + Y.op[y1, y2]
    rho = [int(X.rho[x]) * m + int(Y.rho[y]) for x in range(n) for y in range(m)]
    return FiniteSymmetricRack(op, rho, quandle=X.quandle and Y.quandle)


def is_hom(f, X: FiniteSymmetricRack, Y: FiniteSymmetricRack) -> bool:
    """Does ``f`` (a list, ``f[x]`` in ``Y``) preserve the operation and commute with rho?"""
    f = np.asarray(f, dtype=np.int64)
    if f.shape != (X.n,):
        raise RackError("map must have one entry per element")
    return bool(np.array_equal(f[X.op], Y.op[f[:, None], f[None, :]])
                and np.array_equal(f[X.rho], Y.rho[f]))


def is_isomorphic(X: FiniteSymmetricRack, Y: FiniteSymmetricRack):
    """Brute-force isomorphism search; returns a bijection or ``None``."""
    if X.n != Y.n:
        return None
    for perm in itertools.permutations(range(Y.n)):
        if is_hom(perm, X, Y):
            return list(perm)
    return None
