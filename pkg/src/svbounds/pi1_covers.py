"""Fundamental groups of 2-skeleta, low-index subgroups, and finite covers.

A finite-index subgroup is stored as its transitive coset action: one
permutation of ``{0..d-1}`` per generator, sheet 0 being the base coset.
Words act on sheets from left to right, so a relator is satisfied when
reading it letter by letter returns every sheet to itself.
"""
from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

from .dcomplex import ChainVector, ComplexError, DeltaComplex, is_connected
from .homology import smith_normal_form

log = logging.getLogger(__name__)

INDEX_CEILING = 12
DEPTH_CEILING = 6


class CoverError(ValueError):
    pass


# ---------------------------------------------------------------------------
# presentations

@dataclass(frozen=True)
class Presentation:
    """Generators are ``1..g``; a relator letter ``-i`` is the inverse of ``i``."""
    generators: int
    relators: tuple[tuple[int, ...], ...] = ()
    generator_edges: tuple[int, ...] | None = None

    def __post_init__(self):
        for r in self.relators:
            if not r:
                raise ValueError("empty relator")
            for x in r:
                if x == 0 or abs(x) > self.generators:
                    raise ValueError(f"relator letter {x} outside 1..{self.generators}")

    def to_document(self) -> dict:
        return {"generators": self.generators, "relators": [list(r) for r in self.relators]}


def _reduce_word(word):
    out = []
    for x in word:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    while len(out) > 1 and out[0] == -out[-1]:
        out = out[1:-1]
    return tuple(out)


def free_group(rank: int) -> Presentation:
    return Presentation(rank, ())


def spanning_tree(K: DeltaComplex) -> tuple[list[int], list[int | None]]:
    """BFS spanning tree from vertex 0 over edges in id order.

    Returns the BFS vertex order and, per vertex, the tree edge to its parent.
    """
    adj: list[list[tuple[int, int]]] = [[] for _ in range(K.vertex_count)]
    for e, (a, b) in enumerate(K.edges):
        adj[a].append((e, b))
        adj[b].append((e, a))
    parent_edge: list[int | None] = [None] * K.vertex_count
    seen = [False] * K.vertex_count
    seen[0] = True
    order = [0]
    queue = deque([0])
    while queue:
        v = queue.popleft()
        for e, w in sorted(adj[v]):
            if not seen[w]:
                seen[w] = True
                parent_edge[w] = e
                order.append(w)
                queue.append(w)
    return order, parent_edge


def presentation(K: DeltaComplex) -> Presentation:
    """Edge-path presentation of the fundamental group of the 2-skeleton."""
    if not is_connected(K):
        raise ComplexError("presentation requires a connected complex")
    _, parent_edge = spanning_tree(K)
    tree = {e for e in parent_edge if e is not None}
    gens = tuple(e for e in range(K.count(1)) if e not in tree)
    gen_of = {e: i + 1 for i, e in enumerate(gens)}
    relators = []
    if K.dimension >= 2:
        for d0, d1, d2 in K.simplices(2):
            # loop v0 -> v1 -> v2 -> v0
            word = [x for x in (gen_of.get(d2), gen_of.get(d0),
                                -gen_of[d1] if d1 in gen_of else None) if x]
            word = _reduce_word(word)
            if word:
                relators.append(word)
    return Presentation(len(gens), tuple(relators), gens)


@dataclass(frozen=True)
class AbelianGroup:
    free_rank: int
    divisors: tuple[int, ...]

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.divisors

    def __str__(self):
        parts = ["Z"] * self.free_rank + [f"Z/{d}" for d in self.divisors]
        return " + ".join(parts) if parts else "0"


def abelianization(P: Presentation) -> AbelianGroup:
    if P.generators == 0:
        return AbelianGroup(0, ())
    rows = []
    for r in P.relators:
        row = [0] * P.generators
        for x in r:
            row[abs(x) - 1] += 1 if x > 0 else -1
        rows.append(row)
    if not rows:
        return AbelianGroup(P.generators, ())
    snf = smith_normal_form(rows)
    return AbelianGroup(P.generators - snf.rank, snf.divisors)


def presentation_complex(P: Presentation) -> DeltaComplex:
    """A 2-complex (1-complex if there are no relators) with fundamental group ``P``.

    One vertex carries a loop per generator; each relator disc is coned from
    its own center vertex.
    """
    edges = [(0, 0)] * P.generators
    if not P.relators:
        return DeltaComplex(1, 1, edges)
    nv = 1
    tris = []
    for r in P.relators:
        L = len(r)
        c = nv
        nv += 1
        spokes = list(range(len(edges), len(edges) + L))
        edges += [(0, c)] * L
        for i, x in enumerate(r):
            g = abs(x) - 1
            s_in, s_out = spokes[i], spokes[(i + 1) % L]
            tris.append((s_out, s_in, g) if x > 0 else (s_in, s_out, g))
    return DeltaComplex(2, nv, edges, {2: tris})


# ---------------------------------------------------------------------------
# subgroup records

def _letter(perms, inverses, x, c):
    return perms[x - 1][c] if x > 0 else inverses[-x - 1][c]


def _inverse(p):
    inv = [0] * len(p)
    for i, j in enumerate(p):
        inv[j] = i
    return tuple(inv)


@dataclass(frozen=True)
class SubgroupRecord:
    index: int
    images: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        for p in self.images:
            if len(p) != self.index or sorted(p) != list(range(self.index)):
                raise CoverError(f"{p} is not a permutation of 0..{self.index - 1}")

    @classmethod
    def trivial(cls, generators: int) -> "SubgroupRecord":
        return cls(1, ((0,),) * generators)

    def satisfies(self, P: Presentation) -> bool:
        if len(self.images) != P.generators:
            return False
        inv = [_inverse(p) for p in self.images]
        for r in P.relators:
            for c in range(self.index):
                cur = c
                for x in r:
                    cur = _letter(self.images, inv, x, cur)
                if cur != c:
                    return False
        return True

    def is_transitive(self) -> bool:
        seen = {0}
        stack = [0]
        while stack:
            c = stack.pop()
            for p in self.images:
                for nxt in (p[c], p.index(c)):
                    if nxt not in seen:
                        seen.add(nxt)
                        stack.append(nxt)
        return len(seen) == self.index

    def check(self, P: Presentation) -> None:
        if not self.satisfies(P):
            raise CoverError("permutations do not satisfy the relators")
        if not self.is_transitive():
            raise CoverError("action is not transitive")

    def to_document(self) -> dict:
        return {"index": self.index, "images": [list(p) for p in self.images]}

    @classmethod
    def from_document(cls, doc) -> "SubgroupRecord":
        return cls(int(doc["index"]), tuple(tuple(int(x) for x in p) for p in doc["images"]))


def canonical_record(s: SubgroupRecord) -> SubgroupRecord:
    """Relabel sheets by first appearance from sheet 0, scanning generators and inverses in order.

    Two records describe the same subgroup exactly when their canonical forms agree.
    """
    inv = [_inverse(p) for p in s.images]
    label = {0: 0}
    order = [0]
    i = 0
    while i < len(order):
        c = order[i]
        for x in range(len(s.images)):
            for nxt in (s.images[x][c], inv[x][c]):
                if nxt not in label:
                    label[nxt] = len(order)
                    order.append(nxt)
        i += 1
    if len(order) != s.index:
        raise CoverError("action is not transitive")
    images = []
    for p in s.images:
        q = [0] * s.index
        for c in range(s.index):
            q[label[c]] = label[p[c]]
        images.append(tuple(q))
    return SubgroupRecord(s.index, tuple(images))


def low_index_subgroups(P: Presentation, d: int, ceiling: int = INDEX_CEILING) -> list[SubgroupRecord]:
    """All subgroups of index exactly ``d``, as standardized coset tables."""
    return list(iter_low_index_subgroups(P, d, ceiling))


def iter_low_index_subgroups(P: Presentation, d: int, ceiling: int = INDEX_CEILING):
    """Lazily enumerate the subgroups of index ``d`` in the canonical order.

    Backtracking over coset tables filled in the canonical scan order, with
    relator scanning for conflicts and one-gap deductions.  New cosets only
    appear at the first undefined entry, so each subgroup is produced once.
    """
    if d < 1:
        raise ValueError("index must be positive")
    if d > ceiling:
        raise ValueError(f"index {d} exceeds the ceiling {ceiling}")
    g = P.generators
    if g == 0:
        if d == 1:
            yield SubgroupRecord(1, ())
        return
    rels = [tuple((abs(x) - 1, 1 if x > 0 else -1) for x in r) for r in P.relators]
    # fwd[x][c]: image of coset c under generator x; bwd[x][c]: under its inverse

    def act(fwd, bwd, c, letter):
        x, e = letter
        return fwd[x][c] if e > 0 else bwd[x][c]

    def define(fwd, bwd, c, letter, t):
        x, e = letter
        if e > 0:
            fwd[x][c] = t
            bwd[x][t] = c
        else:
            bwd[x][c] = t
            fwd[x][t] = c

    def propagate(fwd, bwd, m):
        changed = True
        while changed:
            changed = False
            for r in rels:
                L = len(r)
                for c in range(m):
                    i, cur = 0, c
                    while i < L:
                        nxt = act(fwd, bwd, cur, r[i])
                        if nxt < 0:
                            break
                        cur, i = nxt, i + 1
                    j, back = L, c
                    while j > i:
                        x, e = r[j - 1]
                        prv = act(fwd, bwd, back, (x, -e))
                        if prv < 0:
                            break
                        back, j = prv, j - 1
                    if i == j:
                        if cur != back:
                            return False
                    elif j == i + 1:
                        x, e = r[i]
                        # need cur --r[i]--> back
                        if act(fwd, bwd, back, (x, -e)) >= 0:
                            return False
                        define(fwd, bwd, cur, r[i], back)
                        changed = True
        return True

    def search(fwd, bwd, m):
        if not propagate(fwd, bwd, m):
            return
        for c in range(m):
            for x in range(g):
                for e in (1, -1):
                    if act(fwd, bwd, c, (x, e)) < 0:
                        targets = list(range(m)) + ([m] if m < d else [])
                        for t in targets:
                            if act(fwd, bwd, t, (x, -e)) >= 0:
                                continue
                            f2 = [row[:] for row in fwd]
                            b2 = [row[:] for row in bwd]
                            define(f2, b2, c, (x, e), t)
                            yield from search(f2, b2, m + 1 if t == m else m)
                        return
        if m == d:
            yield SubgroupRecord(d, tuple(tuple(row) for row in fwd))

    yield from search([[-1] * d for _ in range(g)], [[-1] * d for _ in range(g)], 1)


# ---------------------------------------------------------------------------
# covers

@dataclass(frozen=True)
class CoverResult:
    cover: DeltaComplex
    degree: int
    base: DeltaComplex

    def sheet_map(self, top: int) -> tuple[int, int]:
        """Top simplex of the cover -> (base top simplex, sheet)."""
        return divmod(top, self.degree)

    def project(self, k: int, i: int) -> int:
        return i // self.degree

    def lift_chain(self, c: ChainVector) -> ChainVector:
        """Transfer: copy every coefficient to all sheets."""
        d = self.degree
        return ChainVector(c.degree, {s * d + i: a for s, a in c.items() for i in range(d)})


def edge_permutations(K: DeltaComplex, s: SubgroupRecord, P: Presentation | None = None):
    P = presentation(K) if P is None else P
    s.check(P)
    ident = tuple(range(s.index))
    perms = [ident] * K.count(1)
    for i, e in enumerate(P.generator_edges or ()):
        perms[e] = s.images[i]
    return perms


def build_cover(K: DeltaComplex, s: SubgroupRecord, P: Presentation | None = None) -> CoverResult:
    """Covering complex for the coset action ``s`` of the presentation of ``K``.

    The lift ``(simplex, sheet)`` has id ``simplex * d + sheet`` and its
    vertex 0 on that sheet; face 0 moves along the lifted edge from vertex 0
    to vertex 1.
    """
    if P is None:
        P = presentation(K)
    if P.generator_edges is None:
        raise CoverError("presentation does not record its generator edges")
    perms = edge_permutations(K, s, P)
    d = s.index
    n = K.dimension
    edges = []
    for e, (a, b) in enumerate(K.edges):
        pe = perms[e]
        edges += [(a * d + i, b * d + pe[i]) for i in range(d)]
    simplices = {}
    for k in range(2, n + 1):
        rows = []
        for sid, fs in enumerate(K.simplices(k)):
            pe = perms[K.sub_face(k, sid, (0, 1))]
            for i in range(d):
                rows.append((fs[0] * d + pe[i],) + tuple(f * d + i for f in fs[1:]))
        simplices[k] = rows
    return CoverResult(DeltaComplex(n, K.vertex_count * d, edges, simplices), d, K)


# ---------------------------------------------------------------------------
# subgroup chains

@dataclass(frozen=True)
class SubgroupChain:
    """Nested finite-index subgroups of the fundamental group of ``base``.

    ``records[i]`` is the coset action at level ``i`` in terms of the base
    presentation; ``factor_maps[i]`` sends level-``i+1`` sheets onto
    level-``i`` sheets.  ``covers[i]`` is the covering complex at level ``i``.
    """
    base: DeltaComplex
    presentation: Presentation
    records: tuple[SubgroupRecord, ...]
    factor_maps: tuple[tuple[int, ...], ...]
    covers: tuple[DeltaComplex, ...]
    truncated: str | None = None

    @property
    def indices(self) -> tuple[int, ...]:
        return tuple(r.index for r in self.records)

    @property
    def depth(self) -> int:
        return len(self.records) - 1

    def check_equivariance(self) -> bool:
        for lvl, f in enumerate(self.factor_maps):
            lo, hi = self.records[lvl], self.records[lvl + 1]
            for p_hi, p_lo in zip(hi.images, lo.images):
                if any(f[p_hi[c]] != p_lo[f[c]] for c in range(hi.index)):
                    return False
        return True

    def to_document(self) -> dict:
        return {"levels": [r.to_document() for r in self.records],
                "factor_maps": [list(f) for f in self.factor_maps],
                "truncated": self.truncated}


def _monodromy_record(M: DeltaComplex, P: Presentation, C: DeltaComplex,
                      vproj: Sequence[int], eproj: Sequence[int],
                      root_fiber: Sequence[int]) -> SubgroupRecord:
    """Coset action of ``pi_1(M)`` on the fiber of ``C -> M`` over vertex 0, gauged by the tree."""
    d = len(root_fiber)
    lift = [dict() for _ in range(M.count(1))]
    for e2, (a, b) in enumerate(C.edges):
        lift[eproj[e2]][a] = b
    order, parent_edge = spanning_tree(M)
    T: list[list[int] | None] = [None] * M.vertex_count
    T[0] = list(root_fiber)
    for v in order[1:]:
        e = parent_edge[v]
        tail, head = M.edges[e]
        if head == v:
            T[v] = [lift[e][x] for x in T[tail]]
        else:
            back = {b: a for a, b in lift[e].items()}
            T[v] = [back[x] for x in T[head]]
    label = [dict((x, i) for i, x in enumerate(T[v])) for v in range(M.vertex_count)]
    images = []
    for e in P.generator_edges:
        tail, head = M.edges[e]
        images.append(tuple(label[head][lift[e][T[tail][i]]] for i in range(d)))
    return SubgroupRecord(d, tuple(images))


def subgroup_chain(K: DeltaComplex | Presentation, depth: int, strategy: str = "smallest",
                   pins: Sequence[tuple[int, int]] | None = None,
                   max_index: int = INDEX_CEILING, max_depth: int = DEPTH_CEILING) -> SubgroupChain:
    """Greedy chain of ``depth`` proper refinements starting at the whole group.

    At each level the presentation of the current cover is recomputed and its
    low-index subgroups are searched by increasing index.  ``strategy`` is
    ``"smallest"`` (first record of the smallest index) or ``"pinned"``, in
    which case ``pins[i] = (relative index, position)`` selects level ``i+1``.
    """
    if depth > max_depth:
        raise ValueError(f"depth {depth} exceeds the ceiling {max_depth}")
    if strategy not in ("smallest", "pinned"):
        raise ValueError(f"unknown strategy {strategy!r}")
    if strategy == "pinned" and (pins is None or len(pins) < depth):
        raise ValueError("pinned strategy needs one selection per level")
    M = presentation_complex(K) if isinstance(K, Presentation) else K
    P = presentation(M)
    records = [SubgroupRecord.trivial(P.generators)]
    covers = [M]
    factors = []
    vproj = list(range(M.vertex_count))
    eproj = list(range(M.count(1)))
    root_fiber = [0]
    truncated = None
    for level in range(depth):
        C = covers[-1]
        PC = presentation(C)
        choice = None
        if strategy == "pinned":
            rel, pos = pins[level]
            found = low_index_subgroups(PC, rel, max(max_index, rel))
            if pos < len(found):
                choice = found[pos]
        else:
            for rel in range(2, max_index + 1):
                found = low_index_subgroups(PC, rel, max_index)
                if found:
                    choice = found[0]
                    break
        if choice is None:
            truncated = f"no proper subgroup found at level {level + 1} within index {max_index}"
            log.info(truncated)
            break
        res = build_cover(C, choice, PC)
        dd = choice.index
        vproj = [vproj[v // dd] for v in range(res.cover.vertex_count)]
        eproj = [eproj[e // dd] for e in range(res.cover.count(1))]
        root_fiber = [u * dd + b for u in root_fiber for b in range(dd)]
        rec = _monodromy_record(M, P, res.cover, vproj, eproj, root_fiber)
        rec.check(P)
        factors.append(tuple(i // dd for i in range(rec.index)))
        records.append(rec)
        covers.append(res.cover)
    chain = SubgroupChain(M, P, tuple(records), tuple(factors), tuple(covers), truncated)
    if not chain.check_equivariance():
        raise CoverError("factor maps are not equivariant")
    return chain
