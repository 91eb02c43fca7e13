import itertools
import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from symrack.abgrp import AbHom, FiniteAbelianGroup
from symrack.catalog import module_by_name, rack_by_name, small_modules
from symrack.modules import (ModuleAxiomError, ModuleError, SQModule, XMap, constant_module,
                             involutive_pair_module, modules_equal, orbit_module, order4_module,
                             trivial_module, validate_module, validate_xmap)
from symrack.racks import dihedral, trivial

Z = FiniteAbelianGroup.parse


def _elementwise_failures(M):
    """Axioms violated, checked on every group element rather than on matrices."""
    X = M.base
    n = X.n
    op, rho = X.op, X.rho
    inv = X.inv_op
    phi, psi, eta = M.phi, M.psi, M.eta
    bad = set()
    els = [list(G.elements()) for G in M.groups]
    for x, y, z in itertools.product(range(n), repeat=3):
        xy, xz, yz = int(op[x, y]), int(op[x, z]), int(op[y, z])
        G = M.groups[int(op[xy, z])]
        for a in els[x]:
            if phi[xy][z](phi[x][y](a)) != phi[xz][yz](phi[x][z](a)):
                bad.add("M1")
        for b in els[y]:
            if phi[xy][z](psi[x][y](b)) != psi[xz][yz](phi[y][z](b)):
                bad.add("M2")
        for c in els[z]:
            if psi[xy][z](c) != G.add(phi[xz][yz](psi[x][z](c)), psi[xz][yz](psi[y][z](c))):
                bad.add("M7")
    for x in range(n):
        if any(eta[int(rho[x])](eta[x](a)) != a for a in els[x]):
            bad.add("M3")
    for x, y in itertools.product(range(n), repeat=2):
        xy, rx, ry = int(op[x, y]), int(rho[x]), int(rho[y])
        xi, xry = int(inv[x, y]), int(op[x, ry])
        if any(eta[xy](phi[x][y](a)) != phi[rx][y](eta[x](a)) for a in els[x]):
            bad.add("M4")
        if any(eta[xy](psi[x][y](b)) != psi[rx][y](b) for b in els[y]):
            bad.add("M5")
        if any(phi[xi][y](phi[x][ry](a)) != a for a in els[x]):
            bad.add("M6")
        G = M.groups[x]
        if any(phi[xi][y](psi[x][ry](eta[y](b))) != G.neg(psi[xry][y](b)) for b in els[y]):
            bad.add("M8")
        images = {phi[x][y](a) for a in els[x]}
        if len(images) != len(els[x]):
            bad.add("invertible")
    if X.quandle:
        for x in range(n):
            G = M.groups[x]
            if any(G.add(phi[x][x](a), psi[x][x](a)) != a for a in els[x]):
                bad.add("M9")
    return bad


_BASES = ["unknot-sq", "trivial-1", "dihedral-3", "trivial-3-p102", "permrack-2-swap",
          "census-3-4", "core-Z4-z2"]


@settings(max_examples=150, deadline=None)
@given(st.sampled_from(_BASES), st.sampled_from([2, 3, 4, 5, 6]), st.integers(0, 5),
       st.integers(0, 5), st.integers(0, 5))
def test_validator_agrees_with_elementwise_oracle(base, m, a, b, c):
    X = rack_by_name(base)
    A = FiniteAbelianGroup([m])
    M = constant_module(X, A, AbHom.scalar(A, a), AbHom.scalar(A, b), AbHom.scalar(A, c))
    assert validate_module(M).axioms() == _elementwise_failures(M)


def test_trivial_module_is_valid_everywhere():
    for base in _BASES:
        X = rack_by_name(base)
        for A in ("Z/2", "Z/3", "Z", "Z/2+Z/4", "0"):
            assert validate_module(trivial_module(X, Z(A))).ok


def test_order_four_example_and_its_z3_variant():
    A = Z("Z/4")
    M = order4_module(rack_by_name("unknot-sq"), A)
    assert M.validate().ok
    assert M.phi[0][0] == AbHom.scalar(A, -1) and M.psi[0][0] == AbHom.scalar(A, 2)
    # the same scalars over Z/3: eta psi = -2 = 1 breaks M5, and M8 fails too
    B = Z("Z/3")
    N = constant_module(trivial(1), B, AbHom.scalar(B, -1), AbHom.scalar(B, 2), AbHom.scalar(B, -1))
    assert validate_module(N).axioms() == {"M5", "M8"} == _elementwise_failures(N)
    with pytest.raises(ModuleError):
        order4_module(trivial(1), Z("Z/8"))


def test_order_four_over_z2_is_the_trivial_pattern():
    A = Z("Z/2")
    X = rack_by_name("unknot-sq")
    assert modules_equal(order4_module(X, A), trivial_module(X, A))


def test_trivial_module_small_cases():
    X = rack_by_name("unknot-sq")
    M = trivial_module(X, Z("Z/2"))
    assert M.eta[0] == AbHom.identity(Z("Z/2"))
    M = trivial_module(dihedral(3), Z("Z"))
    assert M.validate().ok and M.eta[0] == AbHom.scalar(Z("Z"), -1)
    M = trivial_module(dihedral(3), Z("0"))
    assert M.validate().ok


def test_involutive_pair_modules():
    A5 = Z("Z/5")
    ident = AbHom.identity(A5)
    assert involutive_pair_module(dihedral(3), ident, ident).validate().ok
    A3 = Z("Z/3")
    minus = AbHom.scalar(A3, -1)
    rack = rack_by_name("permrack-2-swap")
    assert involutive_pair_module(rack, minus, AbHom.identity(A3)).validate().ok
    assert involutive_pair_module(dihedral(3), minus, AbHom.identity(A3)).validate().axioms() == {"M9"}
    V = Z("Z/2+Z/2")
    swap = AbHom(V, V, [[0, 1], [1, 0]])
    assert involutive_pair_module(rack, swap, AbHom.identity(V)).validate().ok
    with pytest.raises(ModuleError):
        involutive_pair_module(rack, AbHom.scalar(Z("Z/5"), 2), AbHom.identity(Z("Z/5")))


def test_orbit_modules():
    A6 = Z("Z/6")
    i6 = AbHom.identity(A6)
    assert orbit_module(dihedral(3), [A6], [i6], [i6]).validate().ok
    A4 = Z("Z/4")
    M = orbit_module(rack_by_name("unknot-sq"), [A4], [AbHom.identity(A4)], [AbHom.scalar(A4, -1)])
    assert M.validate().ok
    A2, A3 = Z("Z/2"), Z("Z/3")
    N = orbit_module(trivial(2), [A2, A3], [AbHom.identity(A2), AbHom.identity(A3)],
                     [AbHom.identity(A2), AbHom.identity(A3)])
    assert N.validate().ok and not N.homogeneous
    with pytest.raises(ModuleError):
        orbit_module(trivial(2), [A2], [AbHom.identity(A2)], [AbHom.identity(A2)])


def test_structural_errors():
    X = rack_by_name("unknot-sq")
    A, B = Z("Z/2"), Z("Z/3")
    with pytest.raises(ModuleError):
        constant_module(X, A, AbHom.identity(B), AbHom.zero(A), AbHom.identity(A))
    bad = constant_module(X, A, AbHom.identity(A), AbHom.identity(A), AbHom.identity(A))
    with pytest.raises(ModuleAxiomError):
        bad.check()


def test_json_round_trip():
    X = dihedral(3)
    M = order4_module(X, Z("Z/2+Z/4"))
    N = SQModule.from_json(json.loads(M.dumps()))
    assert modules_equal(M, N)
    with pytest.raises(ModuleError):
        SQModule.from_json({"base": X.to_json(), "groups": {}})


def test_xmaps():
    X = rack_by_name("unknot-sq")
    A = Z("Z/4")
    M = trivial_module(X, A)
    ident = XMap(M, M, tuple(AbHom.identity(A) for _ in range(2)))
    assert validate_xmap(ident).ok and ident.is_iso()
    zero = XMap(M, M, tuple(AbHom.zero(A) for _ in range(2)))
    assert validate_xmap(zero).ok and not zero.is_iso()
    double = XMap(M, M, tuple(AbHom.scalar(A, 2) for _ in range(2)))
    assert validate_xmap(double).ok
    N = order4_module(X, A)
    # identity components do not intertwine phi = id with phi = -id
    assert not validate_xmap(XMap(M, N, tuple(AbHom.identity(A) for _ in range(2)))).ok


def test_small_modules_library():
    X = dihedral(3)
    mods = small_modules(X, 9)
    names = [M.name for M in mods]
    assert len(set(names)) == len(names) == 24
    assert all(M.validate().ok and M.homogeneous for M in mods)
    assert module_by_name("pair-Z/3", X).validate().ok
