"""Bounds on the genus-2 surface, with and without a known simplicial volume."""
# %%
from __future__ import annotations

from fractions import Fraction

from svbounds import corpus
from svbounds.bounds import certify, manifold_ledgers, register_sv
from svbounds.homology import homology_profile
from svbounds.simplify import SearchConfig

S = corpus.genus2()
print("f-vector", S.f_vector(), "betti", homology_profile(S).betti)

# %% Betti numbers give 4 from below, a fan triangulation gives 6 from above.
ledgers, _, simp = manifold_ledgers(S, cfg=SearchConfig(seed=0))
print("isv:", ledgers["isv"].interval(), " best complex found:", simp.best_size)

# %% The hyperbolic surface has sv = 4 (Gromov-Thurston: area 4 pi over pi).
register_sv(ledgers, Fraction(4), source="gromov_thurston")
for e in ledgers["isv"].entries:
    print(f"  {e.kind:5s} {e.value!s:>4}  {e.provenance.value}")
print("certified:", certify(ledgers["isv"]))  # None: the bounds do not meet
