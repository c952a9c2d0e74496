"""Stable integral simplicial volume of the torus along a chain of covers.

Run with ``python3 notebooks/torus_vanishing.py``.  Each ``# %%`` block is a
cell for editors that understand the percent format.
"""
# %%
from __future__ import annotations

from svbounds import corpus
from svbounds.bounds import homology_growth_report, manifold_ledgers, stable_sequence
from svbounds.pi1_covers import presentation, subgroup_chain
from svbounds.simplify import SearchConfig

T = corpus.torus()
print(T.f_vector(), "presentation:", presentation(T).relators)

# %% The base ledger already certifies the integral value 2.
ledgers, profile, _ = manifold_ledgers(T)
print("isv interval on T^2:", ledgers["isv"].interval())

# %% Three refinement steps give covers of degree 1, 2, 4 and 8.
chain = subgroup_chain(T, 3)
print("indices:", chain.indices, "equivariant:", chain.check_equivariance())

# %% Simplify every cover and divide by the degree.
seq = stable_sequence(T, chain, SearchConfig(seed=0), ledgers)
for lvl in seq.levels:
    print(f"d = {lvl.index:2d}  simplified size {lvl.simplified_size:2d}  ratio {lvl.ratio}")
print("stisv upper bound:", ledgers["stisv"].upper())

# %% Torsion stays trivial and Betti ratios shrink like 1/d.
growth = homology_growth_report(T, chain, stable=seq)
for row in growth.rows:
    if row.quantity == "rank" and row.k == 1 and row.ring == "Q":
        print(f"d = {row.index:2d}  b_1/d = {row.ratio}  <= {row.bound}  {row.ok}")
print("violations:", len(growth.violations))
