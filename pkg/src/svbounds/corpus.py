"""Small named complexes used by tests, demos and the CLI."""
from __future__ import annotations

import itertools

from .dcomplex import ComplexError, DeltaComplex, from_facets, oriented_triangle


def _parse_word(word):
    if isinstance(word, str):
        letters = word.split() if " " in word else list(word)
        return [(c.lower(), 1 if c.islower() else -1) for c in letters]
    return [(str(x), int(e)) for x, e in word]


def surface_from_word(word) -> DeltaComplex:
    """Fan-triangulate a polygon whose sides are glued according to ``word``.

    ``word`` is a string such as ``"abAB"`` (upper case = inverse) in which
    every letter occurs exactly twice.  Diagonals are oriented by exhaustive
    search so every triangle admits a compatible vertex order; the fan root
    is moved around the polygon until that succeeds.
    """
    sides = _parse_word(word)
    for r in range(len(sides)):
        try:
            return _fan_surface(sides[r:] + sides[:r])
        except _NoOrientation:
            continue
    raise ComplexError("no compatible diagonal orientation for this word")


class _NoOrientation(ComplexError):
    pass


def _fan_surface(sides) -> DeltaComplex:
    L = len(sides)
    if L < 3:
        raise ComplexError("polygon needs at least three sides")
    letters = []
    for x, _ in sides:
        if x not in letters:
            letters.append(x)
    if any(sum(1 for y, _ in sides if y == x) != 2 for x in letters):
        raise ComplexError("every letter must occur exactly twice")

    parent = list(range(L))

    def find(c):
        while parent[c] != c:
            parent[c] = parent[parent[c]]
            c = parent[c]
        return c

    ends = {}
    for j, (x, e) in enumerate(sides):
        tail, head = (j, (j + 1) % L) if e > 0 else ((j + 1) % L, j)
        if x in ends:
            t0, h0 = ends[x]
            parent[find(tail)] = find(t0)
            parent[find(head)] = find(h0)
        else:
            ends[x] = (tail, head)
    roots = sorted({find(c) for c in range(L)})
    vid = {r: i for i, r in enumerate(roots)}

    def vertex(c):
        return vid[find(c)]

    letter_id = {x: i for i, x in enumerate(letters)}
    # side between corners a and b: (edge id, tail corner)
    base_sides = {}
    for j, (x, e) in enumerate(sides):
        a, b = j, (j + 1) % L
        base_sides[frozenset((a, b))] = (letter_id[x], a if e > 0 else b)
    diag_id = {i: len(letters) + i - 2 for i in range(2, L - 1)}

    def side(a, b, orient):
        key = frozenset((a, b))
        if key in base_sides:
            return base_sides[key]
        i = b if a == 0 else a
        return (diag_id[i], 0 if orient[i] else i)

    for bits in itertools.product((True, False), repeat=L - 3):
        orient = dict(zip(range(2, L - 1), bits))
        tris = []
        for i in range(1, L - 1):
            corners = (0, i, i + 1)
            sd = {frozenset((a, b)): side(a, b, orient)
                  for a, b in itertools.combinations(corners, 2)}
            t = oriented_triangle(sd)
            if t is None:
                break
            tris.append(t)
        else:
            edges = [None] * (len(letters) + len(diag_id))
            for x, (t, h) in ends.items():
                edges[letter_id[x]] = (vertex(t), vertex(h))
            for i, d in diag_id.items():
                edges[d] = (vertex(0), vertex(i)) if orient[i] else (vertex(i), vertex(0))
            return DeltaComplex(2, len(roots), edges, {2: tris})
    raise _NoOrientation("no compatible diagonal orientation for this fan")


def torus() -> DeltaComplex:
    """One-vertex torus: 1 vertex, 3 edges (a, b, diagonal c), 2 triangles."""
    return DeltaComplex(2, 1, [(0, 0)] * 3, {2: [(0, 2, 1), (1, 2, 0)]})


def projective_plane() -> DeltaComplex:
    """Two-triangle projective plane (square with sides aBaB, i.e. acac)."""
    return surface_from_word("aBaB")


def genus2() -> DeltaComplex:
    """One-vertex genus-2 surface: octagon abABcdCD, fan-triangulated (6 triangles)."""
    return surface_from_word("abABcdCD")


def surface(genus: int) -> DeltaComplex:
    if genus == 0:
        return tetrahedron_boundary()
    word = "".join(f"{a}{b}{a.upper()}{b.upper()}"
                   for a, b in zip("acegikmoqs"[:genus], "bdfhjlnprt"[:genus]))
    return surface_from_word(word)


def tetrahedron_boundary() -> DeltaComplex:
    return from_facets(itertools.combinations(range(4), 3))


def sphere3() -> DeltaComplex:
    """Boundary of the 4-simplex (5 tetrahedra)."""
    return from_facets(itertools.combinations(range(5), 4))


def s2_times_s1() -> DeltaComplex:
    """Staircase product of the tetrahedron boundary with a 3-cycle (36 tetrahedra)."""
    facets = []
    for tri in itertools.combinations(range(4), 3):
        for x, y in ((0, 1), (1, 2), (0, 2)):
            for step in range(3):
                path = [(tri[i], x) for i in range(step + 1)] + [(tri[i], y) for i in range(step, 3)]
                facets.append([a * 3 + b for a, b in path])
    return from_facets(facets)


CORPUS = {
    "torus": torus,
    "projective_plane": projective_plane,
    "genus2": genus2,
    "tetrahedron_boundary": tetrahedron_boundary,
    "sphere3": sphere3,
    "s2xs1": s2_times_s1,
}
