"""Delta-complex triangulations in face-map form.

A ``DeltaComplex`` of dimension ``n`` stores, for every ``k`` in ``1..n``, the
list of its ``k``-simplices.  Edges are given by ``(tail, head)`` vertex
pairs; a ``k``-simplex for ``k >= 2`` is the ordered tuple of the ids of its
``(k-1)``-faces, face ``j`` omitting vertex ``j``.  Vertices are a bare count.

The document format is JSON::

    {"dimension": 2, "vertex_count": 1,
     "edges": [[0, 0], [0, 0], [0, 0]],
     "simplices_2": [[0, 1, 2], [0, 1, 2]]}

or, for genuine simplicial complexes, ``{"facets": [[0, 1, 2], ...]}``.
"""
from __future__ import annotations

import itertools
import json
from collections import deque
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence


class ComplexError(ValueError):
    """Malformed or unsuitable complex."""


class DocumentSyntaxError(ComplexError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + where)


class DanglingFaceError(ComplexError):
    pass


class SimplicialIdentityError(ComplexError):
    pass


class DeltaComplex:
    """Immutable Delta-complex given by explicit face maps."""

    __slots__ = ("_n", "_nv", "_edges", "_simp", "_verts", "_hash")

    def __init__(
        self,
        dimension: int,
        vertex_count: int,
        edges: Iterable[Sequence[int]] = (),
        simplices: Mapping[int, Iterable[Sequence[int]]] | None = None,
    ):
        n = int(dimension)
        nv = int(vertex_count)
        if n < 0:
            raise ComplexError("dimension must be non-negative")
        if nv < 0 or (nv == 0 and n > 0):
            raise ComplexError("vertex_count must be positive")
        self._n = n
        self._nv = nv
        self._edges = tuple((int(a), int(b)) for a, b in edges)
        simplices = dict(simplices or {})
        extra = [k for k in simplices if not 2 <= k <= n]
        if extra:
            raise ComplexError(f"simplices given in unsupported degrees {sorted(extra)}")
        if n == 0 and self._edges:
            raise ComplexError("a 0-dimensional complex has no edges")
        self._simp: tuple[tuple[tuple[int, ...], ...], ...] = (
            (), self._edges,
            *(tuple(tuple(int(x) for x in s) for s in simplices.get(k, ())) for k in range(2, n + 1)),
        ) if n >= 1 else ((),)
        self._check_faces()
        self._verts = self._compute_vertices()
        self._check_identities()
        self._hash = None

    # -- construction checks -------------------------------------------------

    def _check_faces(self) -> None:
        for i, (a, b) in enumerate(self._edges):
            if not (0 <= a < self._nv and 0 <= b < self._nv):
                raise DanglingFaceError(f"edge {i} references a vertex outside 0..{self._nv - 1}")
        for k in range(2, self._n + 1):
            lower = len(self._simp[k - 1])
            for i, s in enumerate(self._simp[k]):
                if len(s) != k + 1:
                    raise ComplexError(f"{k}-simplex {i} has {len(s)} faces, expected {k + 1}")
                for f in s:
                    if not 0 <= f < lower:
                        raise DanglingFaceError(
                            f"{k}-simplex {i} references missing {k - 1}-simplex {f}")

    def _check_identities(self) -> None:
        # d_i d_j = d_{j-1} d_i for i < j
        for k in range(2, self._n + 1):
            for s_id, s in enumerate(self._simp[k]):
                for j in range(k + 1):
                    for i in range(j):
                        if self.face(k - 1, s[j], i) != self.face(k - 1, s[i], j - 1):
                            raise SimplicialIdentityError(
                                f"{k}-simplex {s_id}: faces {i} and {j} disagree on their common face")

    def _compute_vertices(self):
        verts = [tuple((v,) for v in range(self._nv))]
        if self._n >= 1:
            verts.append(self._edges)
        for k in range(2, self._n + 1):
            prev = verts[k - 1]
            verts.append(tuple(prev[s[k]] + (prev[s[0]][-1],) for s in self._simp[k]))
        return tuple(verts)

    # -- accessors -----------------------------------------------------------

    @property
    def dimension(self) -> int:
        return self._n

    @property
    def vertex_count(self) -> int:
        return self._nv

    @property
    def edges(self) -> tuple[tuple[int, int], ...]:
        return self._edges

    def simplices(self, k: int) -> tuple[tuple[int, ...], ...]:
        """Face tuples of the ``k``-simplices (``k >= 1``; edges give ``(tail, head)``)."""
        if not 1 <= k <= self._n:
            raise ComplexError(f"no face data in degree {k}")
        return self._simp[k]

    def count(self, k: int) -> int:
        if k == 0:
            return self._nv
        if 1 <= k <= self._n:
            return len(self._simp[k])
        return 0

    @property
    def top_count(self) -> int:
        return self.count(self._n)

    def f_vector(self) -> tuple[int, ...]:
        return tuple(self.count(k) for k in range(self._n + 1))

    def face(self, k: int, i: int, j: int) -> int:
        """Id of face ``j`` (omitting vertex ``j``) of the ``k``-simplex ``i``."""
        if k == 1:
            tail, head = self._edges[i]
            return head if j == 0 else tail
        return self._simp[k][i][j]

    def faces(self, k: int, i: int) -> tuple[int, ...]:
        if k == 1:
            tail, head = self._edges[i]
            return (head, tail)
        return self._simp[k][i]

    def vertices(self, k: int, i: int) -> tuple[int, ...]:
        """Ordered vertex ids of the ``k``-simplex ``i``."""
        return self._verts[k][i]

    def sub_face(self, k: int, i: int, positions: Iterable[int]) -> int:
        """Id of the face of ``(k, i)`` spanned by the given vertex positions."""
        keep = set(positions)
        if not keep or not keep <= set(range(k + 1)):
            raise ComplexError(f"bad vertex positions {sorted(keep)} for a {k}-simplex")
        cur_k, cur = k, i
        for p in range(k, -1, -1):
            if p not in keep:
                cur = self.face(cur_k, cur, p)
                cur_k -= 1
        return cur

    def is_simplicial(self) -> bool:
        """True if every simplex has distinct vertices and is determined by its vertex set."""
        for k in range(1, self._n + 1):
            seen = set()
            for vs in self._verts[k]:
                key = frozenset(vs)
                if len(key) != k + 1 or key in seen:
                    return False
                seen.add(key)
        return True

    def vertex_sets(self) -> frozenset[frozenset[int]]:
        """All simplices (vertices included) as vertex sets."""
        out = set()
        for k in range(self._n + 1):
            out.update(frozenset(vs) for vs in self._verts[k])
        return frozenset(out)

    # -- equality / serialization -------------------------------------------

    def _key(self):
        return (self._n, self._nv, self._simp)

    def __eq__(self, other):
        return isinstance(other, DeltaComplex) and self._key() == other._key()

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._key())
        return self._hash

    def __repr__(self):
        return f"DeltaComplex(dimension={self._n}, f_vector={self.f_vector()})"

    def to_document(self) -> dict:
        doc = {"dimension": self._n, "vertex_count": self._nv,
               "edges": [list(e) for e in self._edges]}
        for k in range(2, self._n + 1):
            doc[f"simplices_{k}"] = [list(s) for s in self._simp[k]]
        return doc

    def dumps(self) -> str:
        return json.dumps(self.to_document())


# ---------------------------------------------------------------------------
# parsing

def from_facets(facets: Iterable[Iterable[int]], vertex_count: int | None = None) -> DeltaComplex:
    """Down-close a list of vertex sets into a simplicial complex in face-map form."""
    tops = [tuple(sorted(set(int(v) for v in f))) for f in facets]
    if any(not t for t in tops):
        raise ComplexError("empty facet")
    used = sorted({v for t in tops for v in t})
    if vertex_count is None:
        vertex_count = used[-1] + 1 if used else 0
    if used and (used[0] < 0 or used[-1] >= vertex_count):
        raise DanglingFaceError("facet references a vertex outside the vertex range")
    n = max((len(t) - 1 for t in tops), default=0)
    levels: list[set] = [set() for _ in range(n + 1)]
    for t in tops:
        for r in range(1, len(t) + 1):
            levels[r - 1].update(itertools.combinations(t, r))
    return from_simplices(vertex_count, [sorted(levels[k]) for k in range(1, n + 1)])


def from_simplices(vertex_count: int, by_dim: Sequence[Sequence[tuple[int, ...]]]) -> DeltaComplex:
    """Build a complex from sorted vertex tuples per dimension (index 0 = edges).

    Every face of every listed simplex must itself be listed.
    """
    n = len(by_dim)
    index = [dict() for _ in range(n + 1)]
    index[0] = {(v,): v for v in range(vertex_count)}
    for k in range(1, n + 1):
        index[k] = {tuple(s): i for i, s in enumerate(by_dim[k - 1])}
    edges = [(s[0], s[1]) for s in by_dim[0]] if n >= 1 else []
    simplices = {}
    for k in range(2, n + 1):
        rows = []
        for s in by_dim[k - 1]:
            try:
                rows.append(tuple(index[k - 1][s[:j] + s[j + 1:]] for j in range(k + 1)))
            except KeyError as exc:
                raise DanglingFaceError(f"face {exc.args[0]} of {s} is not listed") from None
        simplices[k] = rows
    return DeltaComplex(n, vertex_count, edges, simplices)


def from_document(doc: Mapping) -> DeltaComplex:
    if not isinstance(doc, Mapping):
        raise ComplexError("document must be a JSON object")
    if "facets" in doc:
        return from_facets(doc["facets"], doc.get("vertex_count"))
    try:
        n = int(doc["dimension"])
        nv = int(doc["vertex_count"])
    except KeyError as exc:
        raise ComplexError(f"missing field {exc.args[0]!r}") from None
    allowed = {"dimension", "vertex_count", "edges", "name"} | {f"simplices_{k}" for k in range(2, n + 1)}
    unknown = sorted(set(doc) - allowed)
    if unknown:
        raise ComplexError(f"unknown document fields {unknown}")
    edges = doc.get("edges", [])
    for e in edges:
        if len(e) != 2:
            raise ComplexError(f"edge {e} is not a [tail, head] pair")
    simplices = {}
    for k in range(2, n + 1):
        simplices[k] = doc.get(f"simplices_{k}", [])
    return DeltaComplex(n, nv, edges, simplices)


def parse_complex(text: str | bytes) -> DeltaComplex:
    """Parse a Delta-complex document (JSON, UTF-8)."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentSyntaxError(exc.msg, exc.lineno, exc.colno) from None
    return from_document(doc)


def load_complex(path) -> DeltaComplex:
    with open(path, "rb") as fh:
        return parse_complex(fh.read())


# ---------------------------------------------------------------------------
# chains

class ChainVector:
    """Sparse integer chain of degree ``k`` with its l1 norm."""

    __slots__ = ("degree", "_c", "l1")

    def __init__(self, degree: int, coeffs: Mapping[int, int] | None = None):
        self.degree = int(degree)
        c = {int(s): int(a) for s, a in (coeffs or {}).items() if a}
        self._c = c
        self.l1 = sum(abs(a) for a in c.values())

    @property
    def coeffs(self) -> Mapping[int, int]:
        return MappingProxyType(self._c)

    def __getitem__(self, simplex: int) -> int:
        return self._c.get(simplex, 0)

    def items(self):
        return self._c.items()

    def __len__(self):
        return len(self._c)

    def is_zero(self) -> bool:
        return not self._c

    def _combine(self, other: "ChainVector", sign: int) -> "ChainVector":
        if self.degree != other.degree:
            raise ValueError("degree mismatch")
        out = dict(self._c)
        for s, a in other._c.items():
            out[s] = out.get(s, 0) + sign * a
        return ChainVector(self.degree, out)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return ChainVector(self.degree, {s: -a for s, a in self._c.items()})

    def __mul__(self, scalar: int):
        return ChainVector(self.degree, {s: scalar * a for s, a in self._c.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, ChainVector) and self.degree == other.degree and self._c == other._c

    def __hash__(self):
        return hash((self.degree, frozenset(self._c.items())))

    def __repr__(self):
        return f"ChainVector({self.degree}, {dict(sorted(self._c.items()))})"


def boundary(K: DeltaComplex, c: ChainVector) -> ChainVector:
    """Simplicial boundary with alternating signs over face slots."""
    k = c.degree
    if not 1 <= k <= K.dimension:
        raise ComplexError(f"boundary undefined in degree {k} for a {K.dimension}-complex")
    out: dict[int, int] = {}
    for s, a in c.items():
        for j, f in enumerate(K.faces(k, s)):
            out[f] = out.get(f, 0) + (a if j % 2 == 0 else -a)
    return ChainVector(k - 1, out)


# ---------------------------------------------------------------------------
# validation

@dataclass(frozen=True)
class Orientation:
    signs: tuple[int, ...]

    def __getitem__(self, i):
        return self.signs[i]

    def __neg__(self):
        return Orientation(tuple(-s for s in self.signs))


@dataclass(frozen=True)
class ValidationReport:
    is_pseudomanifold: bool
    is_connected: bool
    orientation: Orientation | None = None
    diagnostics: tuple[str, ...] = field(default=())

    @property
    def is_orientable(self) -> bool:
        return self.orientation is not None


def facet_slots(K: DeltaComplex) -> list[list[tuple[int, int]]]:
    """For each (n-1)-simplex, the (top simplex, face slot) pairs containing it."""
    n = K.dimension
    slots: list[list[tuple[int, int]]] = [[] for _ in range(K.count(n - 1))]
    for s in range(K.top_count):
        for j, f in enumerate(K.faces(n, s)):
            slots[f].append((s, j))
    return slots


def is_connected(K: DeltaComplex) -> bool:
    if K.vertex_count == 0:
        return True
    parent = list(range(K.vertex_count))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    comps = K.vertex_count
    for a, b in K.edges:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
            comps -= 1
    return comps == 1


def validate(K: DeltaComplex) -> ValidationReport:
    n = K.dimension
    notes = []
    connected = is_connected(K)
    if not connected:
        notes.append("underlying space is not connected")
    if n == 0 or K.top_count == 0:
        notes.append("no top-dimensional simplices")
        return ValidationReport(False, connected, None, tuple(notes))
    slots = facet_slots(K)
    bad = [f for f, sl in enumerate(slots) if len(sl) != 2]
    pseudo = not bad
    if bad:
        notes.append(f"{len(bad)} codimension-one simplices not in exactly two facet slots "
                     f"(first: {bad[0]} with {len(slots[bad[0]])})")
    orientation = None
    if pseudo and n == 2:
        pinched = [v for v, c in enumerate(surface_vertex_links(K)) if c != 1]
        if pinched:
            notes.append(f"vertex links are not circles at vertices {pinched}")
    if pseudo:
        orientation = _propagate_orientation(K, slots)
        if orientation is None:
            notes.append("no coherent orientation (sign conflict during propagation)")
    return ValidationReport(pseudo, connected, orientation, tuple(notes))


def _propagate_orientation(K: DeltaComplex, slots) -> Orientation | None:
    n = K.dimension
    sign = [0] * K.top_count
    for root in range(K.top_count):
        if sign[root]:
            continue
        sign[root] = 1
        queue = deque([root])
        while queue:
            s = queue.popleft()
            for j, f in enumerate(K.faces(n, s)):
                for t, jt in slots[f]:
                    if (t, jt) == (s, j):
                        continue
                    want = -sign[s] * (-1) ** (j + jt)
                    if sign[t] == 0:
                        sign[t] = want
                        queue.append(t)
                    elif sign[t] != want:
                        return None
    return Orientation(tuple(sign))


def surface_vertex_links(K: DeltaComplex) -> list[int]:
    """Number of link components at each vertex of a 2-dimensional pseudomanifold.

    Link nodes are edge ends at the vertex; each triangle corner joins the
    ends of its two sides meeting there.  The complex is a closed surface
    exactly when every entry is 1.
    """
    if K.dimension != 2:
        raise ComplexError("vertex links are only computed for 2-complexes")
    parent: dict = {}

    def find(x):
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in range(K.count(1)):
        find((e, 0))
        find((e, 1))
    # corner c of a triangle: sides are the faces not opposite c; end index 0 = tail
    ends_at = {0: ((2, 0), (1, 0)), 1: ((2, 1), (0, 0)), 2: ((0, 1), (1, 1))}
    for t in range(K.count(2)):
        fs = K.faces(2, t)
        for c in range(3):
            (sa, ea), (sb, eb) = ends_at[c]
            parent[find((fs[sa], ea))] = find((fs[sb], eb))
    comps = [0] * K.vertex_count
    for node in list(parent):
        if find(node) == node:
            e, end = node
            comps[K.edges[e][end]] += 1
    return comps


def fundamental_cycle(K: DeltaComplex, o: Orientation | None = None) -> ChainVector:
    """Signed sum of top simplices under a coherent orientation."""
    if o is None:
        report = validate(K)
        if not report.is_pseudomanifold:
            raise ComplexError("not a pseudomanifold: " + "; ".join(report.diagnostics))
        if report.orientation is None:
            raise ComplexError("complex is not orientable")
        o = report.orientation
    if len(o.signs) != K.top_count:
        raise ComplexError("orientation length does not match the top simplices")
    z = ChainVector(K.dimension, dict(enumerate(o.signs)))
    if not boundary(K, z).is_zero():
        raise ComplexError("orientation is not coherent")
    return z


def euler_characteristic(K: DeltaComplex) -> int:
    return sum((-1) ** k * K.count(k) for k in range(K.dimension + 1))


# ---------------------------------------------------------------------------
# constructions

def barycentric_subdivision(K: DeltaComplex) -> DeltaComplex:
    """First barycentric subdivision.

    New vertices are barycenters of all simplices; an ``m``-simplex of the
    subdivision lying in the interior of the ``k``-simplex ``s`` is a strict
    chain of vertex-position subsets of ``s`` ending in the full set, with
    vertices ordered by increasing dimension.  Every simplex of the result
    has pairwise distinct vertices; a second subdivision is simplicial.
    """
    n = K.dimension
    ids: list[dict] = [dict() for _ in range(n + 1)]
    for k in range(n + 1):
        full = tuple(range(k + 1))
        for s in range(K.count(k)):
            ids[0][(k, s, (full,))] = len(ids[0])
    for m in range(1, n + 1):
        for k in range(m, n + 1):
            full = tuple(range(k + 1))
            for chain in _subset_chains(full, m):
                for s in range(K.count(k)):
                    ids[m][(k, s, chain)] = len(ids[m])

    def face_key(key, j):
        k, s, chain = key
        m = len(chain) - 1
        if j < m:
            return (k, s, chain[:j] + chain[j + 1:])
        sub = chain[m - 1]
        rho = K.sub_face(k, s, sub)
        pos = {x: i for i, x in enumerate(sub)}
        return (len(sub) - 1, rho, tuple(tuple(pos[x] for x in S) for S in chain[:m]))

    edges = [None] * len(ids[1]) if n >= 1 else []
    for key, i in ids[1].items():
        edges[i] = (ids[0][face_key(key, 1)], ids[0][face_key(key, 0)])
    simplices = {}
    for m in range(2, n + 1):
        rows = [None] * len(ids[m])
        for key, i in ids[m].items():
            rows[i] = tuple(ids[m - 1][face_key(key, j)] for j in range(m + 1))
        simplices[m] = rows
    return DeltaComplex(n, len(ids[0]), edges, simplices)


def _subset_chains(full: tuple[int, ...], m: int):
    """Strict chains S_0 < ... < S_m = full of nonempty subsets, as sorted tuples."""
    if m == 0:
        yield (full,)
        return
    for r in range(m, len(full)):
        for sub in itertools.combinations(full, r):
            for chain in _subset_chains(sub, m - 1):
                yield chain + (full,)


def simplicial_subdivision(K: DeltaComplex) -> DeltaComplex:
    """Subdivide barycentrically until the result is a simplicial complex."""
    out = K
    while not out.is_simplicial():
        out = barycentric_subdivision(out)
    return out


def cone(K: DeltaComplex) -> DeltaComplex:
    """Cone with apex ``K.vertex_count``; ``K`` keeps its simplex ids as a subcomplex."""
    if not K.is_simplicial():
        raise ComplexError("cone requires a simplicial complex; subdivide first")
    n, nv = K.dimension, K.vertex_count
    if nv == 0:
        return DeltaComplex(0, 1)
    apex = nv
    edges = list(K.edges) + [(v, apex) for v in range(nv)]
    simplices = {}
    counts = [K.count(k) for k in range(n + 1)]

    def cone_id(k, i):
        # id of the cone over the (k-1)-simplex i, a k-simplex of the cone
        return counts[k] + i if k <= n else i

    for k in range(2, n + 2):
        rows = list(K.simplices(k)) if k <= n else []
        for i in range(counts[k - 1]):
            fs = K.faces(k - 1, i)
            rows.append(tuple(cone_id(k - 1, f) for f in fs) + (i,))
        simplices[k] = rows
    return DeltaComplex(n + 1, nv + 1, edges, simplices)


def disjoint_union(K: DeltaComplex, L: DeltaComplex) -> DeltaComplex:
    if K.dimension != L.dimension:
        raise ComplexError("dimensions differ")
    n = K.dimension
    edges = list(K.edges) + [(a + K.vertex_count, b + K.vertex_count) for a, b in L.edges]
    simplices = {}
    for k in range(2, n + 1):
        off = K.count(k - 1)
        simplices[k] = list(K.simplices(k)) + [tuple(f + off for f in s) for s in L.simplices(k)]
    return DeltaComplex(n, K.vertex_count + L.vertex_count, edges, simplices)


def oriented_triangle(sides: Mapping[frozenset, tuple[int, object]]) -> tuple[int, int, int] | None:
    """Face tuple of a triangle given its three sides, or None if they cycle.

    ``sides`` maps each pair of corner labels to ``(edge_id, tail_label)``.
    The vertex order is the unique one making every side run low to high.
    """
    labels = set().union(*sides)
    if len(labels) != 3 or len(sides) != 3:
        raise ComplexError("a triangle needs three corners and three sides")
    outdeg = {c: 0 for c in labels}
    for pair, (_, tail) in sides.items():
        if tail not in pair:
            raise ComplexError("side tail is not one of its corners")
        outdeg[tail] += 1
    order = sorted(labels, key=lambda c: -outdeg[c])
    if [outdeg[c] for c in order] != [2, 1, 0]:
        return None
    v0, v1, v2 = order
    return (sides[frozenset((v1, v2))][0], sides[frozenset((v0, v2))][0],
            sides[frozenset((v0, v1))][0])


# ---------------------------------------------------------------------------
# canonical relabeling

def _relabel_from(K: DeltaComplex, start: int):
    n = K.dimension
    slots = facet_slots(K)
    order: list[int] = []
    seen = [False] * K.top_count
    pending = [start] + [s for s in range(K.top_count) if s != start]
    for root in pending:
        if seen[root]:
            continue
        seen[root] = True
        queue = deque([root])
        while queue:
            s = queue.popleft()
            order.append(s)
            for f in K.faces(n, s):
                for t, _ in slots[f]:
                    if not seen[t]:
                        seen[t] = True
                        queue.append(t)
    new = {n: {old: i for i, old in enumerate(order)}}
    orders = {n: order}
    for k in range(n, 0, -1):
        lower: dict[int, int] = {}
        low_order = []
        for s in orders[k]:
            fs = K.edges[s] if k == 1 else K.faces(k, s)
            for f in fs:
                if f not in lower:
                    lower[f] = len(lower)
                    low_order.append(f)
        for f in range(K.count(k - 1)):
            if f not in lower:
                lower[f] = len(lower)
                low_order.append(f)
        new[k - 1] = lower
        orders[k - 1] = low_order
    parts = [n, K.vertex_count]
    for k in range(1, n + 1):
        if k == 1:
            rows = tuple((new[0][a], new[0][b]) for a, b in (K.edges[s] for s in orders[1]))
        else:
            rows = tuple(tuple(new[k - 1][f] for f in K.faces(k, s)) for s in orders[k])
        parts.append(rows)
    return tuple(parts)


def canonical_form(K: DeltaComplex) -> tuple:
    """Lexicographically minimal relabeling over all starting top simplices.

    Isomorphic connected pseudomanifolds get equal forms.
    """
    if K.dimension == 0 or K.top_count == 0:
        return _relabel_from_trivial(K)
    return min(_relabel_from(K, s) for s in range(K.top_count))


def _relabel_from_trivial(K):
    return (K.dimension, K.vertex_count) + tuple(K.simplices(k) for k in range(1, K.dimension + 1))


def canonical_complex(K: DeltaComplex) -> DeltaComplex:
    form = canonical_form(K)
    n, nv = form[0], form[1]
    simplices = {k: form[1 + k] for k in range(2, n + 1)}
    return DeltaComplex(n, nv, form[2] if n >= 1 else (), simplices)


def is_isomorphic(K: DeltaComplex, L: DeltaComplex) -> bool:
    if K.f_vector() != L.f_vector():
        return False
    return canonical_form(K) == canonical_form(L)
