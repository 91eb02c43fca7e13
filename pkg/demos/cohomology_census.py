"""Degree-1 and degree-2 cohomology of every symmetric quandle of order at most 3.

Prints one row per quandle, trivial coefficients Z/2 and Z/3, both variants.
Run:  python demos/cohomology_census.py
"""

from symrack.abgrp import FiniteAbelianGroup
from symrack.catalog import symmetric_quandles
from symrack.cohomology import Complex, coeff_action
from symrack.modules import trivial_module


def fmt(G):
    return str(G) if G.factors else "0"


print(f"{'quandle':<12} {'A':<4} {'var':<4} {'H^1':<16} H^2")
for n in (1, 2, 3):
    for X in symmetric_quandles(n):
        for text in ("Z/2", "Z/3"):
            C = coeff_action(trivial_module(X, FiniteAbelianGroup.parse(text)))
            for variant in ("sq", "sr"):
                Cx = Complex(C, variant)
                print(f"{X.name:<12} {text:<4} {variant:<4} {fmt(Cx.cohomology(1)):<16} "
                      f"{fmt(Cx.cohomology(2))}")
