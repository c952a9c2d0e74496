from __future__ import annotations

import math

import pytest

from svbounds import corpus
from svbounds.dcomplex import (boundary, euler_characteristic, fundamental_cycle, is_isomorphic,
                               validate)
from svbounds.homology import homology_profile
from svbounds.pi1_covers import (CoverError, Presentation, SubgroupRecord, abelianization,
                                 build_cover, canonical_record, free_group, low_index_subgroups,
                                 presentation, presentation_complex, subgroup_chain)


def hall_counts(rank: int, n: int) -> list[int]:
    """Index-k subgroup counts of the free group, k = 1..n (Hall's recursion)."""
    a = []
    for k in range(1, n + 1):
        a.append(k * math.factorial(k) ** (rank - 1)
                 - sum(math.factorial(k - j) ** (rank - 1) * a[j - 1] for j in range(1, k)))
    return a


def sigma(n):
    return sum(d for d in range(1, n + 1) if n % d == 0)


def test_hall_oracle_values():
    assert hall_counts(2, 4) == [1, 3, 13, 71]


def test_torus_presentation(torus):
    P = presentation(torus)
    assert P.generators == 3 and len(P.relators) == 2
    ab = abelianization(P)
    assert (ab.free_rank, ab.divisors) == (2, ())


def test_presentation_generator_count(genus2):
    P = presentation(genus2)
    assert P.generators == genus2.count(1) - (genus2.vertex_count - 1)
    assert abelianization(P).free_rank == 4


def test_sphere_and_projective_plane():
    ab = abelianization(presentation(corpus.tetrahedron_boundary()))
    assert ab.is_trivial
    ab = abelianization(presentation(corpus.projective_plane()))
    assert (ab.free_rank, ab.divisors) == (0, (2,))
    assert abelianization(free_group(0)).is_trivial


@pytest.mark.parametrize("name", sorted(corpus.CORPUS))
def test_abelianization_matches_first_homology(name):
    K = corpus.CORPUS[name]()
    ab = abelianization(presentation(K))
    h1 = homology_profile(K)[1]
    assert (ab.free_rank, ab.divisors) == (h1.betti_Q, h1.divisors)


def test_disconnected_input_rejected(torus):
    from svbounds.dcomplex import disjoint_union
    with pytest.raises(ValueError):
        presentation(disjoint_union(torus, torus))


def test_free_group_counts_match_hall():
    P = free_group(2)
    assert [len(low_index_subgroups(P, d)) for d in (1, 2, 3, 4)] == hall_counts(2, 4)
    assert len(low_index_subgroups(free_group(3), 2)) == hall_counts(3, 2)[1]


def test_abelian_counts_match_divisor_sums(torus):
    P = presentation(torus)
    assert [len(low_index_subgroups(P, d)) for d in range(1, 7)] == [sigma(d) for d in range(1, 7)]


def test_records_are_valid_canonical_and_distinct(genus2):
    P = presentation(genus2)
    recs = low_index_subgroups(P, 3)
    assert len(recs) == len(set(recs))
    for r in recs:
        r.check(P)
        assert canonical_record(r) == r


def test_canonical_record_identifies_basepoint_preserving_relabelings():
    r = SubgroupRecord(3, ((1, 2, 0), (0, 2, 1)))
    swap = {0: 0, 1: 2, 2: 1}
    swapped = SubgroupRecord(3, tuple(tuple(swap[p[swap[c]]] for c in range(3)) for p in r.images))
    assert swapped != r
    assert canonical_record(swapped) == canonical_record(r)


def test_ceiling_and_bad_records(torus):
    with pytest.raises(ValueError):
        low_index_subgroups(presentation(torus), 13)
    P = presentation(torus)
    with pytest.raises(CoverError):
        build_cover(torus, SubgroupRecord(2, ((1, 0), (0, 1), (0, 1))), P)  # relators fail
    with pytest.raises(CoverError):
        SubgroupRecord(2, ((0, 0),))


def test_trivial_record_gives_isomorphic_complex(genus2):
    P = presentation(genus2)
    res = build_cover(genus2, SubgroupRecord.trivial(P.generators), P)
    assert is_isomorphic(res.cover, genus2)


def test_torus_double_covers_are_tori(torus):
    for r in low_index_subgroups(presentation(torus), 2):
        C = build_cover(torus, r).cover
        assert C.top_count == 4
        assert euler_characteristic(C) == 0
        assert homology_profile(C).betti == (1, 2, 1)


def test_genus2_double_cover_is_genus3(genus2):
    r = low_index_subgroups(presentation(genus2), 2)[0]
    C = build_cover(genus2, r).cover
    assert euler_characteristic(C) == -4
    assert validate(C).is_orientable
    assert homology_profile(C).betti == (1, 6, 1)


def test_transfer_of_fundamental_cycle(genus2):
    z = fundamental_cycle(genus2)
    for r in low_index_subgroups(presentation(genus2), 3):
        res = build_cover(genus2, r)
        lifted = res.lift_chain(z)
        assert boundary(res.cover, lifted).is_zero()
        assert lifted.l1 == 3 * z.l1
        assert res.sheet_map(res.cover.top_count - 1) == (genus2.top_count - 1, 2)


def test_cover_of_solid():
    K = corpus.s2_times_s1()
    P = presentation(K)
    for r in low_index_subgroups(P, 2):
        C = build_cover(K, r, P).cover
        assert C.f_vector() == tuple(2 * x for x in K.f_vector())
        assert homology_profile(C).betti == (1, 1, 1, 1)


def test_torus_chain():
    ch = subgroup_chain(corpus.torus(), 2)
    assert ch.indices == (1, 2, 4)
    assert ch.check_equivariance()
    for C in ch.covers:
        assert euler_characteristic(C) == 0
        assert homology_profile(C).betti[1] == 2


def test_free_group_chain_ranks():
    ch = subgroup_chain(free_group(2), 2)
    assert ch.indices == (1, 2, 4)
    assert [homology_profile(C).betti[1] for C in ch.covers] == [1 + d for d in ch.indices]


def test_chain_records_rebuild_the_covers(genus2):
    ch = subgroup_chain(genus2, 2)
    for r, C in zip(ch.records, ch.covers):
        r.check(ch.presentation)
        assert is_isomorphic(build_cover(genus2, r, ch.presentation).cover, C)


def test_pinned_chain_and_truncation(torus):
    ch = subgroup_chain(torus, 2, strategy="pinned", pins=[(3, 1), (2, 0)])
    assert ch.indices == (1, 3, 6)
    assert ch.check_equivariance()
    trivial = subgroup_chain(free_group(0), 2)
    assert trivial.indices == (1,) and trivial.truncated
    assert subgroup_chain(corpus.tetrahedron_boundary(), 1).depth == 0
    with pytest.raises(ValueError):
        subgroup_chain(torus, 7)


def test_presentation_complex_realizes_group():
    P = Presentation(2, ((1, 2, -1, -2),))
    K = presentation_complex(P)
    assert homology_profile(K).betti == (1, 2, 1)
    P2 = Presentation(1, ((1, 1, 1),))
    ab = abelianization(presentation(presentation_complex(P2)))
    assert (ab.free_rank, ab.divisors) == (0, (3,))
