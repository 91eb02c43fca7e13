"""The two-point symmetric quandle of the unknot, from its tables to H^2.

Run:  python demos/unknot_walkthrough.py
"""

from symrack.abgrp import FiniteAbelianGroup
from symrack.assoc_group import abelianization, associated_group, tietze_reduce, verify_iso
from symrack.catalog import rack_by_name
from symrack.cohomology import cohomology_group
from symrack.modules import trivial_module

X = rack_by_name("unknot-sq")
print("operation table:", X.op.tolist())
print("involution:     ", X.rho.tolist())
print("axioms hold:    ", X.validate().ok)

P = associated_group(X)
print("\nassociated group has", len(P.generators), "generators and", len(P.relators), "relators")
T = tietze_reduce(P)
print("after Tietze moves:", len(T.generators), "generator,", len(T.relators), "relators")
print("abelianization invariant factors:", list(abelianization(P).factors), "(0 means a copy of Z)")

print("\nsecond cohomology with trivial coefficients (rack variant):")
for text in ("Z/2", "Z/3", "Z/4"):
    A = FiniteAbelianGroup.parse(text)
    H = cohomology_group(X, trivial_module(X, A), 2, variant="sr")
    rep = verify_iso(X, A)
    print(f"  A = {text}: H^2 = {H}, group-side H^1 = {rep.h1}, maps round trip: {rep.round_trip_ok}")
