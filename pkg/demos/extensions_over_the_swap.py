"""Abelian extensions of the trivial quandle on two points with the swap involution.

The constant factor set 1 satisfies the rack conditions but not the extra
quandle condition, so the extension it builds is a symmetric rack that is
not a quandle.  Run:  python demos/extensions_over_the_swap.py
"""

from symrack.abgrp import FiniteAbelianGroup
from symrack.catalog import rack_by_name
from symrack.ext import build_extension, h2_ext, is_split, semidirect, validate_factor_set
from symrack.modules import trivial_module

X = rack_by_name("trivial-2-swap")
A = FiniteAbelianGroup.parse("Z/2")
M = trivial_module(X, A)

for variant in ("sq", "sr"):
    res = h2_ext(M, variant)
    print(f"{variant}: H^2 = {res.group}")

ones = [[(1,), (1,)], [(1,), (1,)]]
print("\nsigma = 1 everywhere")
print("  rack conditions:  ", validate_factor_set(M, ones, "sr").ok)
print("  quandle condition:", validate_factor_set(M, ones, "sq").ok,
      validate_factor_set(M, ones, "sq").axioms())
E = build_extension(M, ones, "sr")
print("  extension has", E.size, "elements; symmetric rack:", E.validate(quandle=False).ok,
      "; quandle:", E.validate(quandle=True).ok)
print("  split:", is_split(M, ones))

S = semidirect(M)
print("\nsemi-direct product:", S.size, "elements, a symmetric quandle:", S.validate(quandle=True).ok)
