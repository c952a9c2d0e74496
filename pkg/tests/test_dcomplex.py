from __future__ import annotations

import json

import pytest
from hypothesis import given, settings, strategies as st

from svbounds import corpus
from svbounds.dcomplex import (ChainVector, ComplexError, DanglingFaceError, DeltaComplex,
                               DocumentSyntaxError, SimplicialIdentityError, barycentric_subdivision,
                               boundary, canonical_complex, cone, disjoint_union,
                               euler_characteristic, from_facets, fundamental_cycle, is_connected,
                               is_isomorphic, load_complex, parse_complex, simplicial_subdivision,
                               surface_vertex_links, validate)


def test_torus_shape(torus):
    assert torus.f_vector() == (1, 3, 2)
    assert euler_characteristic(torus) == 0
    r = validate(torus)
    assert r.is_pseudomanifold and r.is_connected and r.is_orientable


def test_projective_plane_is_not_orientable():
    r = validate(corpus.projective_plane())
    assert r.is_pseudomanifold and not r.is_orientable


def test_genus2_counts(genus2):
    assert genus2.f_vector() == (1, 9, 6)
    assert euler_characteristic(genus2) == -2


def test_solid_corpus_counts():
    assert corpus.sphere3().f_vector() == (5, 10, 10, 5)
    assert corpus.s2_times_s1().f_vector() == (12, 48, 72, 36)
    assert euler_characteristic(corpus.s2_times_s1()) == 0


@pytest.mark.parametrize("name", sorted(corpus.CORPUS))
def test_fundamental_cycle_is_a_cycle(name):
    K = corpus.CORPUS[name]()
    r = validate(K)
    if not r.is_orientable:
        pytest.skip("non-orientable")
    z = fundamental_cycle(K, r.orientation)
    assert boundary(K, z).is_zero()
    assert z.l1 == K.top_count


def test_boundary_of_boundary_vanishes(genus2):
    for s in range(genus2.top_count):
        c = ChainVector(2, {s: 1})
        assert boundary(genus2, boundary(genus2, c)).is_zero()


def test_document_round_trip(torus, tmp_path):
    text = torus.dumps()
    assert parse_complex(text) == torus
    p = tmp_path / "torus.dcx"
    p.write_text(text)
    assert load_complex(p) == torus


def test_document_errors():
    with pytest.raises(DocumentSyntaxError) as exc:
        parse_complex("{\n  \"dimension\": 2,\n  oops")
    assert exc.value.line == 3
    with pytest.raises(ComplexError, match="vertex_count"):
        parse_complex('{"dimension": 2}')
    with pytest.raises(DanglingFaceError):
        parse_complex(json.dumps({"dimension": 2, "vertex_count": 1, "edges": [[0, 0]],
                                  "simplices_2": [[0, 0, 5]]}))
    with pytest.raises(ComplexError, match="unknown document fields"):
        parse_complex(json.dumps({"dimension": 2, "vertex_count": 1, "simplices": {}}))


def test_simplicial_identity_violation():
    # faces 1 and 2 start at different vertices
    with pytest.raises(SimplicialIdentityError):
        DeltaComplex(2, 2, [(0, 1), (0, 1), (1, 1)], {2: [(0, 1, 2)]})


def test_wrong_torus_gluing_is_flagged():
    # same face tuple twice gives a sphere with three points pinched together
    K = DeltaComplex(2, 1, [(0, 0)] * 3, {2: [(0, 1, 2), (0, 1, 2)]})
    assert surface_vertex_links(K) == [3]
    assert validate(K).diagnostics


def test_subdivision_preserves_euler_and_becomes_simplicial(torus):
    B = barycentric_subdivision(torus)
    assert B.f_vector() == (6, 18, 12)
    assert euler_characteristic(B) == 0
    S = simplicial_subdivision(torus)
    assert S.is_simplicial()
    assert euler_characteristic(S) == 0


def test_cone_is_contractible_shape():
    S = simplicial_subdivision(corpus.torus())
    C = cone(S)
    assert C.f_vector() == (S.vertex_count + 1,) + tuple(
        a + b for a, b in zip(S.f_vector()[1:], S.f_vector()[:-1])) + (S.top_count,)
    assert euler_characteristic(C) == 1


def test_disjoint_union_is_disconnected(torus):
    U = disjoint_union(torus, torus)
    assert not is_connected(U)
    assert U.f_vector() == (2, 6, 4)


def test_facets_builder_down_closes():
    K = from_facets([(0, 1, 2), (0, 2, 3)])
    assert K.f_vector() == (4, 5, 2)
    assert K.is_simplicial()


@settings(max_examples=30, deadline=None)
@given(st.permutations(range(4)))
def test_canonical_form_ignores_vertex_labels(perm):
    facets = [[perm[v] for v in f] for f in ((0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3))]
    assert is_isomorphic(from_facets(facets), corpus.tetrahedron_boundary())


def test_canonical_complex_is_idempotent(genus2):
    C = canonical_complex(genus2)
    assert canonical_complex(C) == C
    assert is_isomorphic(C, genus2)
    assert not is_isomorphic(genus2, corpus.torus())
