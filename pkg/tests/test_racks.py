import itertools
import json

import numpy as np
import pytest

from symrack.catalog import (CatalogError, default_catalog, group_by_name, rack_by_name,
                             symmetric_quandles)
from symrack.racks import (FiniteSymmetricRack, RackAxiomError, RackError, conj, core,
                           cyclic_group, dihedral, is_hom, is_isomorphic, product, symmetric_group,
                           trivial, validate)


def test_singleton_is_valid():
    assert trivial(1).validate().ok


def test_core_z3_with_identity_involution():
    X = core(cyclic_group(3))
    assert X.validate().ok
    assert all(X.star(x, y) == (2 * y - x) % 3 for x in range(3) for y in range(3))
    assert list(X.rho) == [0, 1, 2]


def test_corrupted_inverse_table_is_reported_with_witness():
    X = trivial(2)
    inv = np.array(X.inv_op)
    inv[0, 1] = 1
    rep = validate(X.op, inv, X.rho, True)
    assert not rep.ok
    assert ("inverse", (0, 1)) in {(v.axiom, tuple(int(t) for t in v.witness))
                                   for v in rep.violations}


def test_construction_rejects_invalid_tables():
    with pytest.raises(RackAxiomError) as exc:
        FiniteSymmetricRack([[0, 0], [0, 1]], [0, 1])
    assert "bijectivity" in exc.value.report.axioms()
    with pytest.raises(RackAxiomError):
        FiniteSymmetricRack([[0, 0], [1, 1]], [1, 1])  # rho not an involution
    with pytest.raises(RackError):
        FiniteSymmetricRack([], [])


def test_every_axiom_can_fail():
    # a non-distributive table with bijective columns
    op = [[0, 1, 2], [2, 1, 0], [1, 0, 2]]
    rep = FiniteSymmetricRack.from_json({"n": 3, "op": op, "rho": [0, 1, 2]}, check=False).validate()
    assert "distributivity" in rep.axioms()
    # S2 fails: rho does not commute with right translation
    X = dihedral(3)
    rep = validate(X.op, X.inv_op, [1, 0, 2], True)
    assert "S2" in rep.axioms() or "S3" in rep.axioms()
    # idempotency only checked for quandles
    P = rack_by_name("permrack-2-swap")
    assert validate(P.op, P.inv_op, P.rho, False).ok
    assert validate(P.op, P.inv_op, P.rho, True).axioms() == {"idempotency"}


def test_trivial_constructor():
    U = trivial(2, [1, 0])
    assert U.validate().ok and U.quandle
    assert trivial(3, [1, 0, 2]).validate().ok


def test_conjugation_quandles():
    S3 = conj(symmetric_group(3))
    assert S3.n == 6 and S3.validate().ok
    # rho = inverse fixes exactly the self-inverse elements; counted by brute force on perms
    perms = sorted(itertools.permutations(range(3)))
    involutive = sum(1 for p in perms if tuple(p[p[i]] for i in range(3)) == (0, 1, 2))
    assert involutive == 4
    assert sum(int(S3.rho[x]) == x for x in range(6)) == 4
    Z2 = conj(cyclic_group(2))
    assert np.array_equal(Z2.op, trivial(2).op) and list(Z2.rho) == [0, 1]
    Z4 = conj(cyclic_group(4))
    assert np.array_equal(Z4.op, trivial(4).op) and list(Z4.rho) == [0, 3, 2, 1]


def test_core_quandles():
    X = core(cyclic_group(4), 2)
    assert X.validate().ok and list(X.rho) == [2, 3, 0, 1]
    assert np.array_equal(core(cyclic_group(2)).op, trivial(2).op)
    with pytest.raises(RackError):
        core(cyclic_group(4), 1)


def test_products():
    R3 = dihedral(3)
    one = trivial(1)
    assert is_isomorphic(product(R3, one), R3) is not None
    U = trivial(2, [1, 0])
    UU = product(U, U)
    assert np.array_equal(UU.op, trivial(4).op) and list(UU.rho) == [3, 2, 1, 0]
    P = product(R3, U)
    assert P.n == 6 and P.validate().ok


def test_homomorphisms():
    R3 = dihedral(3)
    assert is_hom(list(range(3)), R3, R3)
    T = trivial(1)
    assert is_hom([0, 0, 0], R3, T)
    # swap on trivial(2, id) into trivial(2, swap) does not intertwine the involutions
    assert not is_hom([1, 0], trivial(2), trivial(2, [1, 0]))


def test_json_round_trip_and_errors():
    X = conj(symmetric_group(3))
    Y = FiniteSymmetricRack.from_json(json.loads(X.dumps()))
    assert Y == X
    with pytest.raises(RackError):
        FiniteSymmetricRack.from_json({"op": [[0]]})


def test_orbits():
    assert trivial(3, [1, 0, 2]).orbits() == [[0, 1], [2]]
    assert dihedral(3).orbits() == [[0, 1, 2]]


# --- catalog ------------------------------------------------------------------------

@pytest.mark.parametrize("name,n,quandle", [
    ("unknot-sq", 2, True), ("trivial-3-p102", 3, True), ("conj-S3", 6, True),
    ("core-Z4-z2", 4, True), ("dihedral-5", 5, True), ("permrack-4-swap", 4, False),
    ("census-3-2", 3, True), ("dihedral-3*unknot-sq", 6, True), ("conj-Z2xZ2", 4, True),
    ("conj-D4", 8, True),
])
def test_catalog_names(name, n, quandle):
    X = rack_by_name(name)
    assert X.n == n and X.quandle == quandle and X.validate().ok and X.name == name


@pytest.mark.parametrize("bad", ["nope", "trivial-3-swap", "census-2-9", "conj-Q8", "permrack-3-p012x"])
def test_catalog_rejects(bad):
    with pytest.raises(CatalogError):
        rack_by_name(bad)


def test_group_names():
    assert group_by_name("S3").order == 6
    assert group_by_name("Z2xZ3").order == 6
    assert group_by_name("D4").order == 8


def _all_symmetric_quandles_brute(n):
    """Every symmetric quandle structure on n points, from all n^(n*n) tables."""
    found = []
    for flat in itertools.product(range(n), repeat=n * n):
        op = np.array(flat).reshape(n, n)
        if any(op[x, x] != x for x in range(n)):
            continue
        if any(len(set(op[:, y])) != n for y in range(n)):
            continue
        if any(op[op[x, y], z] != op[op[x, z], op[y, z]]
               for x in range(n) for y in range(n) for z in range(n)):
            continue
        for rho in itertools.permutations(range(n)):
            try:
                found.append(FiniteSymmetricRack(op, rho, quandle=True))
            except RackError:
                pass
    return found


@pytest.mark.parametrize("n", [1, 2, 3])
def test_census_matches_brute_force_up_to_isomorphism(n):
    brute = _all_symmetric_quandles_brute(n)
    classes = []
    for X in brute:
        if not any(is_isomorphic(X, Y) is not None for Y in classes):
            classes.append(X)
    census = symmetric_quandles(n)
    assert len(census) == len(classes)
    for Y in classes:
        assert sum(is_isomorphic(X, Y) is not None for X in census) == 1


def test_census_sizes_and_order_four():
    assert [len(symmetric_quandles(n)) for n in (1, 2, 3, 4)] == [1, 2, 5, 13]
    Q4 = symmetric_quandles(4)
    for X, Y in itertools.combinations(Q4, 2):
        assert is_isomorphic(X, Y) is None
    assert len(default_catalog(4)) == 21


def test_order_four_census_against_all_quandles():
    """All 7 quandles of order 4 are found; exactly those with a good involution reach the census."""
    n = 4
    cols = [[p for p in itertools.permutations(range(n)) if p[y] == y] for y in range(n)]
    quandles = []
    for choice in itertools.product(*cols):
        op = np.array(choice).T
        if all(op[op[x, y], z] == op[op[x, z], op[y, z]]
               for x in range(n) for y in range(n) for z in range(n)):
            Q = FiniteSymmetricRack(op, list(range(n)), quandle=True, check=False)
            if not any(_quandle_iso(Q, R) for R in quandles):
                quandles.append(Q)
    assert len(quandles) == 7
    with_involution = []
    for Q in quandles:
        for rho in itertools.permutations(range(n)):
            if validate(Q.op, Q.inv_op, rho, True).ok:
                with_involution.append(Q)
                break
    bases = []
    for X in symmetric_quandles(n):
        plain = FiniteSymmetricRack(X.op, list(range(n)), quandle=True, check=False)
        if not any(_quandle_iso(plain, B) for B in bases):
            bases.append(plain)
    assert len(bases) == len(with_involution) == 5
    for B in bases:
        assert sum(_quandle_iso(B, Q) for Q in with_involution) == 1


def _quandle_iso(X, Y):
    """Isomorphism of the operations alone, ignoring the involutions."""
    return any(np.array_equal(np.array(p)[X.op], Y.op[np.array(p)[:, None], np.array(p)[None, :]])
               for p in itertools.permutations(range(X.n)))
