import itertools
import json
import random

import pytest

from symrack.abgrp import AbHom, FiniteAbelianGroup
from symrack.catalog import module_by_name, rack_by_name
from symrack.cohomology import cohomology_group
from symrack.ext import (ExtensionError, ExtensionRack, FactorSet, build_extension, coboundary,
                         equivalence_map, equivalent, extract_module, h2_ext, is_split, semidirect,
                         validate_factor_set, zero_factor_set)
from symrack.modules import (ModuleError, XMap, constant_module, modules_equal, order4_module,
                             trivial_module, validate_xmap)
from symrack.oracles import OracleTooLarge, brute_force_h2, enumerate_factor_sets
from symrack.racks import is_hom, trivial

Z = FiniteAbelianGroup.parse


@pytest.fixture
def swap_z2():
    X = rack_by_name("trivial-2-swap")
    return trivial_module(X, Z("Z/2"))


ONES = [[(1,), (1,)], [(1,), (1,)]]


# --- factor sets -----------------------------------------------------------------------

def test_zero_factor_set_is_valid(swap_z2):
    assert validate_factor_set(swap_z2, zero_factor_set(swap_z2)).ok


def test_constant_factor_set_on_the_swap(swap_z2):
    assert validate_factor_set(swap_z2, ONES, "sr").ok
    rep = validate_factor_set(swap_z2, ONES, "sq")
    assert rep.axioms() == {"F4"}


def test_diagonal_factor_set_violates_f4():
    X = rack_by_name("dihedral-3")
    M = trivial_module(X, Z("Z/2"))
    sigma = [[(int(x == y),) for y in range(3)] for x in range(3)]
    assert "F4" in validate_factor_set(M, sigma, "sq").axioms()


def test_variant_errors(swap_z2):
    M = trivial_module(rack_by_name("permrack-2-swap"), Z("Z/2"))
    with pytest.raises(ExtensionError):
        validate_factor_set(M, zero_factor_set(M), "sq")
    with pytest.raises(ExtensionError):
        validate_factor_set(swap_z2, zero_factor_set(swap_z2), "xx")


def test_factor_set_json(swap_z2):
    fs = FactorSet(swap_z2, ONES)
    back = FactorSet.from_json(json.loads(json.dumps(fs.to_json())))
    assert back.sigma == fs.sigma
    with pytest.raises(ExtensionError):
        FactorSet.from_json({"sigma": {"0,0": [1]}}, module=swap_z2)


# --- extension racks ----------------------------------------------------------------

def test_semidirect_of_trivial_z2_over_unknot():
    X = rack_by_name("unknot-sq")
    E = semidirect(trivial_module(X, Z("Z/2")))
    R = E.rack()
    assert R.n == 4 and R.quandle and R.validate().ok
    for a, x in E.pairs:
        assert E.rho((a, x)) == (a, int(X.rho[x]))


def test_semidirect_of_order_four_module_over_a_point():
    A = Z("Z/4")
    E = semidirect(order4_module(trivial(1), A))
    R = E.rack()
    assert R.quandle and R.validate().ok
    for a, b in itertools.product(range(4), repeat=2):
        assert E.star(((a,), 0), ((b,), 0)) == (((-a + 2 * b) % 4,), 0)


def test_semidirect_over_a_rack_is_not_a_quandle():
    M = trivial_module(rack_by_name("permrack-2-swap"), Z("Z/3"))
    E = semidirect(M)
    assert E.validate().ok
    assert not E.rack().quandle
    assert not E.rack().is_idempotent


def test_semidirect_rejects_invalid_module():
    X = rack_by_name("unknot-sq")
    A = Z("Z/2")
    bad = constant_module(X, A, AbHom.identity(A), AbHom.identity(A), AbHom.identity(A))
    with pytest.raises(ModuleError):
        semidirect(bad)


def test_nonzero_extension_is_not_split(swap_z2):
    E = build_extension(swap_z2, ONES, "sr")
    assert E.validate(quandle=False).ok
    assert E.rack(quandle=False).n == 4
    assert equivalent(swap_z2, zero_factor_set(swap_z2), ONES) is None
    assert not is_split(swap_z2, ONES)
    # the same answer by trying every admissible v (v_0 = v_1 because eta = id)
    admissible = [v for v in itertools.product([(0,), (1,)], repeat=2)
                  if all(swap_z2.eta[x](v[x]) == v[int(swap_z2.base.rho[x])] for x in range(2))]
    assert all(coboundary(swap_z2, v) != tuple(tuple(r) for r in ONES) for v in admissible)
    with pytest.raises(ExtensionError):
        build_extension(swap_z2, ONES, "sq")


def _perturbations(M, sigma, rng, count):
    X = M.base
    for _ in range(count):
        x, y = rng.randrange(X.n), rng.randrange(X.n)
        G = M.groups[X.star(x, y)]
        if G.order == 1:
            continue
        s = [list(r) for r in sigma]
        delta = G.element(rng.randrange(1, G.order))
        s[x][y] = G.add(s[x][y], delta)
        yield s


@pytest.mark.parametrize("rack,module", [
    ("dihedral-3", "trivial-Z2"), ("census-3-2", "trivial-Z2"), ("census-3-4", "order4-Z4"),
    ("unknot-sq", "pair-Z/3"), ("census-3-0", "trivial-Z/2+Z/2"), ("trivial-2-swap", "trivial-Z4"),
])
def test_conditions_match_extension_axioms_under_perturbation(rack, module):
    """Both directions: valid sigma give valid extensions, and broken ones give broken tables."""
    X = rack_by_name(rack)
    M = module_by_name(module, X)
    rng = random.Random(7)
    for variant, quandle in (("sq", True), ("sr", False)):
        valid = enumerate_factor_sets(M, variant)
        assert len(valid) >= 1
        sample = [valid[i] for i in rng.sample(range(len(valid)), min(6, len(valid)))]
        for S in sample:
            sigma = [[M.groups[X.star(x, y)].element(int(S[x, y])) for y in range(X.n)]
                     for x in range(X.n)]
            assert validate_factor_set(M, sigma, variant).ok
            assert build_extension(M, sigma, variant).validate(quandle).ok
            for s in _perturbations(M, sigma, rng, 4):
                cond = validate_factor_set(M, s, variant).ok
                assert ExtensionRack(M, s).validate(quandle).ok == cond


# --- equivalence ------------------------------------------------------------------------

def test_equivalence_relation_with_composed_witnesses():
    X = rack_by_name("census-3-2")
    M = trivial_module(X, Z("Z/2"))
    A = Z("Z/2")
    sigmas = []
    for S in enumerate_factor_sets(M, "sq"):
        sigmas.append([[A.element(int(S[x, y])) for y in range(3)] for x in range(3)])
    assert equivalent(M, sigmas[0], sigmas[0]) == [(0,)] * 3
    for s, t in itertools.product(sigmas, repeat=2):
        v = equivalent(M, s, t)
        w = equivalent(M, t, s)
        assert (v is None) == (w is None)
        if v is not None:
            # t = s + delta v, so the map (a, x) -> (a - v_x, x) is a rack isomorphism
            Es, Et = build_extension(M, s), build_extension(M, t)
            f = equivalence_map(Es, Et, v)
            assert sorted(f) == list(range(Es.size))
            assert is_hom(f, Es.rack(), Et.rack())
            assert [Et.pairs[f[i]][1] for i in range(Es.size)] == Es.projection()
    classes = []
    for s in sigmas:
        if not any(equivalent(M, c, s) is not None for c in classes):
            classes.append(s)
    assert len(classes) == h2_ext(M, "sq").group.order


def test_coboundaries_are_equivalent_to_each_other():
    X = rack_by_name("dihedral-3")
    M = trivial_module(X, Z("Z/4"))
    # eta = -id, rho = id: admissible v have 2 v_x = 0
    v1 = [(2,), (0,), (2,)]
    v2 = [(0,), (2,), (2,)]
    assert equivalent(M, coboundary(M, v1), coboundary(M, v2)) is not None
    with pytest.raises(ExtensionError):
        coboundary(M, [(1,), (0,), (0,)])


# --- H^2 ----------------------------------------------------------------------------------

def test_h2_of_the_swap(swap_z2):
    assert h2_ext(swap_z2, "sr").group.factors == (2,)
    assert h2_ext(swap_z2, "sq").group.factors == ()
    z, b, g = brute_force_h2(swap_z2, "sr")
    assert (z, b) == (2, 1) and g.factors == (2,)
    z, b, g = brute_force_h2(swap_z2, "sq")
    assert (z, b) == (1, 1)


def test_h2_of_a_point_is_zero():
    for A in ("Z/2", "Z/6", "Z/2+Z/2", "Z"):
        assert h2_ext(trivial_module(trivial(1), Z(A))).group.factors == ()


def test_h2_of_r3_with_z3_is_pinned_by_brute_force():
    M = trivial_module(rack_by_name("dihedral-3"), Z("Z/3"))
    z, b, g = brute_force_h2(M, "sq")
    assert (z, b, g.factors) == (1, 1, ())
    assert h2_ext(M).group == g


@pytest.mark.parametrize("rack,module,variant,z,b,factors", [
    ("census-3-2", "trivial-Z2", "sq", 4, 2, (2,)),
    ("census-3-2", "trivial-Z2", "sr", 16, 2, (2, 2, 2)),
    ("dihedral-3", "order4-Z4", "sr", 8, 4, (2,)),
    ("unknot-sq", "trivial-Z2", "sr", 2, 1, (2,)),
])
def test_orders_against_brute_force(rack, module, variant, z, b, factors):
    X = rack_by_name(rack)
    M = module_by_name(module, X)
    bz, bb, bg = brute_force_h2(M, variant)
    assert (bz, bb, bg.factors) == (z, b, factors)
    assert h2_ext(M, variant).group.factors == factors


@pytest.mark.parametrize("rack", ["census-3-2", "unknot-sq", "dihedral-3", "permrack-2-swap"])
def test_h2_over_integers_matches_the_cochain_complex(rack):
    X = rack_by_name(rack)
    M = trivial_module(X, Z("Z"))
    assert h2_ext(M, "sr").group == cohomology_group(X, M, 2, "sr")


def test_h2_for_a_non_homogeneous_module():
    from symrack.modules import orbit_module
    A2, A3 = Z("Z/2"), Z("Z/3")
    X = trivial(2)
    M = orbit_module(X, [A2, A3], [AbHom.identity(A2), AbHom.identity(A3)],
                     [AbHom.identity(A2), AbHom.identity(A3)])
    z, b, g = brute_force_h2(M, "sr")
    assert h2_ext(M, "sr").group == g
    assert z // b == g.order


def test_brute_force_guard():
    M = trivial_module(rack_by_name("dihedral-5"), Z("Z/3"))
    with pytest.raises(OracleTooLarge):
        brute_force_h2(M, "sq", limit=1000)


# --- module extraction -------------------------------------------------------------------

def test_extract_module_from_semidirect_product():
    X = rack_by_name("unknot-sq")
    M = trivial_module(X, Z("Z/2"))
    E = semidirect(M)
    N, sigma = extract_module(E, [E.index((0,), x) for x in range(X.n)])
    F = XMap(M, N, tuple(AbHom.identity(G) for G in M.groups))
    assert validate_xmap(F).ok and F.is_iso()
    assert all(not any(v) for row in sigma for v in row)


@pytest.mark.parametrize("rack,module,variant", [
    ("trivial-2-swap", "trivial-Z2", "sr"), ("census-3-2", "trivial-Z2", "sq"),
    ("dihedral-3", "order4-Z4", "sr"),
])
def test_extract_recovers_module_and_factor_set(rack, module, variant):
    X = rack_by_name(rack)
    M = module_by_name(module, X)
    for S in enumerate_factor_sets(M, variant)[:8]:
        sigma = tuple(tuple(M.groups[X.star(x, y)].element(int(S[x, y])) for y in range(X.n))
                      for x in range(X.n))
        E = build_extension(M, sigma, variant)
        N, tau = extract_module(E, [((0,) * M.groups[x].rank, x) for x in range(X.n)])
        assert modules_equal(M, N)
        assert tau == sigma


def test_extract_rejects_bad_sections():
    X = rack_by_name("unknot-sq")
    A = Z("Z/4")
    M = trivial_module(X, A)  # eta = -id
    E = semidirect(M)
    with pytest.raises(ExtensionError):
        extract_module(E, [((1,), 0), ((1,), 1)])  # rho(1, 0) = (3, 1)
    with pytest.raises(ExtensionError):
        extract_module(E, [((0,), 1), ((0,), 0)])
