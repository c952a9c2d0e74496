"""Dihedral angles, overlap counts and volumes of regular ideal simplices."""
# %%
from __future__ import annotations

import mpmath

from svbounds.hypconst import (HypParams, dihedral_angle_regular_ideal, hyp_report, k_overlap,
                               lobachevsky, lobachevsky_by_quadrature, nearest_integer_gap,
                               regular_ideal_volume, turn_quotient)

# %% alpha_3 is exactly pi/3, so six tetrahedra close up around an edge.
with mpmath.workdps(60):
    print("alpha_3 - pi/3 =", mpmath.nstr(dihedral_angle_regular_ideal(3) - mpmath.pi / 3, 5))

# %% From n = 4 on, 2 pi / alpha_n is never an integer.
for n in range(4, 11):
    q = turn_quotient(n)
    print(f"n = {n:2d}  2pi/alpha = {mpmath.nstr(q, 12):>14}  k_n = {k_overlap(n)}  "
          f"gap {nearest_integer_gap(q):.4f}")

# %% Two independent evaluations of the Lobachevsky function.
with mpmath.workdps(40):
    th = mpmath.pi / 3
    print("series     ", mpmath.nstr(lobachevsky(th, 30), 25))
    print("quadrature ", mpmath.nstr(lobachevsky_by_quadrature(th, 30), 25))
    print("v_3 =", mpmath.nstr(regular_ideal_volume(3, 30), 25))

# %% The gap constant for sample parameters; the inputs are placeholders.
rep = hyp_report(HypParams(3, eps=0.1, a=0.1, eta=0.1))
print(rep.to_document(12))
