from __future__ import annotations

import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from svbounds import corpus
from svbounds.dcomplex import barycentric_subdivision, fundamental_cycle, validate
from svbounds.homology import (IntegerMatrix, determinant, elementary_diagonal, field_rank,
                               homology_profile, pd_surjectivity_rank, smith_normal_form)


def _det(rows):
    """Exact determinant by Gaussian elimination over the rationals (oracle)."""
    m = [[Fraction(x) for x in r] for r in rows]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if m[r][c]), None)
        if p is None:
            return 0
        if p != c:
            m[c], m[p] = m[p], m[c]
            det = -det
        det *= m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] / m[c][c]
            m[r] = [a - f * b for a, b in zip(m[r], m[c])]
    return int(det)


def _determinantal_divisors(rows):
    """gcd of all k x k minors for k = 1..min(m, n)."""
    m, n = len(rows), len(rows[0])
    out = []
    for k in range(1, min(m, n) + 1):
        g = 0
        for R in itertools.combinations(range(m), k):
            for C in itertools.combinations(range(n), k):
                g = math.gcd(g, _det([[rows[i][j] for j in C] for i in R]))
        if g == 0:
            break
        out.append(g)
    return out


matrices = st.integers(1, 4).flatmap(lambda m: st.integers(1, 4).flatmap(
    lambda n: st.lists(st.lists(st.integers(-6, 6), min_size=n, max_size=n), min_size=m, max_size=m)))


@settings(max_examples=150, deadline=None)
@given(matrices)
def test_smith_form_matches_minor_gcds(rows):
    snf = smith_normal_form(rows)
    dd = _determinantal_divisors(rows)
    assert snf.rank == len(dd)
    prods = list(itertools.accumulate(snf.diagonal, lambda a, b: a * b))
    assert prods == dd
    for a, b in zip(snf.diagonal, snf.diagonal[1:]):
        assert b % a == 0
    A = IntegerMatrix.from_rows(rows)
    assert (snf.left @ A @ snf.right).entries == snf.matrix().entries
    assert abs(determinant(snf.left)) == 1 and abs(determinant(snf.right)) == 1


def test_smith_form_small_example():
    assert smith_normal_form([[2, 0], [0, 3]]).diagonal == (1, 6)


@settings(max_examples=60, deadline=None)
@given(matrices)
def test_sparse_paths_agree_with_dense(rows):
    sparse = [{j: x for j, x in enumerate(r) if x} for r in rows]
    assert field_rank(sparse) == smith_normal_form(rows).rank
    for p in (2, 3):
        dense = smith_normal_form(rows)
        assert field_rank(sparse, p) == sum(1 for d in dense.diagonal if d % p)
    diag = elementary_diagonal(sparse)
    assert sorted(abs(d) for d in diag if d) == sorted(smith_normal_form(rows).diagonal)


EXPECTED = {
    "torus": ((1, 2, 1), ()),
    "genus2": ((1, 4, 1), ()),
    "tetrahedron_boundary": ((1, 0, 1), ()),
    "sphere3": ((1, 0, 0, 1), ()),
    "s2xs1": ((1, 1, 1, 1), ()),
    "projective_plane": ((1, 0, 0), (2,)),
}


@pytest.mark.parametrize("name", sorted(EXPECTED))
def test_corpus_homology(name):
    betti, tors1 = EXPECTED[name]
    p = homology_profile(corpus.CORPUS[name]())
    assert p.betti == betti
    assert p[1].divisors == tors1
    assert sum((-1) ** k * b for k, b in enumerate(p.betti)) == p.euler_characteristic


def test_projective_plane_mod_two():
    p = homology_profile(corpus.projective_plane())
    assert [d.rank(2) for d in p.degrees] == [1, 1, 1]
    assert [d.rank(3) for d in p.degrees] == [1, 0, 0]
    assert p[1].tors_size == 2


def test_subdivision_invariance(genus2):
    assert homology_profile(barycentric_subdivision(genus2)) == homology_profile(genus2)


@pytest.mark.parametrize("name", ["torus", "genus2", "tetrahedron_boundary", "sphere3", "s2xs1"])
def test_duality_map_is_surjective(name):
    K = corpus.CORPUS[name]()
    z = fundamental_cycle(K, validate(K).orientation)
    prof = homology_profile(K)
    for k in range(K.dimension + 1):
        assert pd_surjectivity_rank(K, z, k) == prof[k].betti_Q
        assert pd_surjectivity_rank(K, z, k, 2) == prof[k].rank(2)
