"""Local moves on 2- and 3-dimensional complexes and a seeded annealing search.

Surfaces are handled as general Delta-complexes: flips, 1-3 vertex
insertion, 3-1 vertex removal and edge contraction are tried on a copy and
kept only if the result is still a closed surface with the same Euler
characteristic and orientability, which pins down the homeomorphism type.
Three-dimensional moves (bistellar 1-4, 4-1, 2-3, 3-2 and link-condition
edge contraction) work on simplicial complexes through their vertex sets.
"""
from __future__ import annotations

import logging
import math
import random
from dataclasses import asdict, dataclass
from itertools import combinations

from .dcomplex import (ComplexError, DeltaComplex, euler_characteristic, facet_slots, from_facets,
                       oriented_triangle, surface_vertex_links, validate)
from .homology import homology_profile

log = logging.getLogger(__name__)

MOVES_2D = ("flip", "insert", "remove", "contract")
MOVES_3D = ("1-4", "4-1", "2-3", "3-2", "contract")
SIZE_DELTA = {2: {"flip": 0, "insert": 2, "remove": -2, "contract": -2},
              3: {"1-4": 3, "4-1": -3, "2-3": 1, "3-2": -1}}


class InadmissibleMove(ComplexError):
    pass


@dataclass(frozen=True)
class Move:
    """A move of the given kind at simplex ids of the complex it was proposed on.

    2D targets: an edge (flip, contract), a triangle (insert) or a vertex
    (remove).  3D targets are vertex labels: the tetrahedron for 1-4, the
    vertex for 4-1, the shared triangle plus both apexes for 2-3, the edge
    for 3-2 and contraction.
    """
    kind: str
    target: tuple[int, ...]

    def to_document(self) -> dict:
        return {"kind": self.kind, "target": list(self.target)}


# ---------------------------------------------------------------------------
# surfaces

def _rebuild_surface(nv, edges, tris, vmap=None) -> DeltaComplex:
    """Compact ``edges``/``tris`` (``None`` = deleted) into a new complex.

    ``vmap`` sends old vertex ids to surviving ones; unused vertices vanish.
    """
    vmap = vmap or {}
    used = sorted({vmap.get(x, x) for e in edges if e is not None for x in e})
    vid = {v: i for i, v in enumerate(used)}
    eid = {}
    new_edges = []
    for i, e in enumerate(edges):
        if e is not None:
            eid[i] = len(new_edges)
            new_edges.append((vid[vmap.get(e[0], e[0])], vid[vmap.get(e[1], e[1])]))
    new_tris = [tuple(eid[f] for f in t) for t in tris if t is not None]
    return DeltaComplex(2, len(used), new_edges, {2: new_tris})


def _corners(tri, j):
    """For the edge at face slot ``j`` of a triangle: (tail pos, head pos, opposite pos)."""
    a, b = [p for p in range(3) if p != j]
    return a, b, j


def _edge_between(tri, p, q):
    """Face id of the side joining corner positions ``p`` and ``q``."""
    return tri[3 - p - q]


def _surface_flip(K, e):
    slots = facet_slots(K)[e]
    if len(slots) != 2 or slots[0][0] == slots[1][0]:
        raise InadmissibleMove(f"edge {e} is not shared by two distinct triangles")
    tris = list(K.simplices(2))
    sides = {}
    for tag, (t, j) in zip("12", slots):
        tri = tris[t]
        pu, pv, pw = _corners(tri, j)
        w = "w" + tag
        sides[("u", w)] = (_edge_between(tri, pu, pw), "u" if pu < pw else w)
        sides[("v", w)] = (_edge_between(tri, pv, pw), "v" if pv < pw else w)
    new_e = K.count(1)
    wv = {tag: K.vertices(2, slots[i][0])[slots[i][1]] for i, tag in enumerate("12")}
    for tail in ("w1", "w2"):
        t_u = oriented_triangle({frozenset(("u", "w1")): sides[("u", "w1")],
                                 frozenset(("u", "w2")): sides[("u", "w2")],
                                 frozenset(("w1", "w2")): (new_e, tail)})
        t_v = oriented_triangle({frozenset(("v", "w1")): sides[("v", "w1")],
                                 frozenset(("v", "w2")): sides[("v", "w2")],
                                 frozenset(("w1", "w2")): (new_e, tail)})
        if t_u is None or t_v is None:
            continue
        edges = list(K.edges)
        head = "w2" if tail == "w1" else "w1"
        edges.append((wv[tail[1]], wv[head[1]]))
        edges[e] = None
        tris[slots[0][0]] = t_u
        tris[slots[1][0]] = t_v
        return _rebuild_surface(K.vertex_count, edges, tris)
    raise InadmissibleMove(f"no compatible orientation for the flipped diagonal of edge {e}")


def _surface_insert(K, t):
    if not 0 <= t < K.top_count:
        raise InadmissibleMove(f"no triangle {t}")
    d0, d1, d2 = K.simplices(2)[t]
    v0, v1, v2 = K.vertices(2, t)
    c = K.vertex_count
    m = K.count(1)
    edges = list(K.edges) + [(v0, c), (v1, c), (v2, c)]
    s0, s1, s2 = m, m + 1, m + 2
    tris = list(K.simplices(2))
    tris[t] = (s1, s0, d2)
    tris += [(s2, s0, d1), (s2, s1, d0)]
    return DeltaComplex(2, K.vertex_count + 1, edges, {2: tris})


def _surface_remove(K, c):
    ends = [e for e, (a, b) in enumerate(K.edges) if c in (a, b)]
    if len(ends) != 3 or any(K.edges[e][0] == K.edges[e][1] for e in ends):
        raise InadmissibleMove(f"vertex {c} does not have degree 3")
    around = [(t, p) for t in range(K.top_count) for p, v in enumerate(K.vertices(2, t)) if v == c]
    if len(around) != 3 or len({t for t, _ in around}) != 3:
        raise InadmissibleMove(f"vertex {c} is not surrounded by three distinct triangles")
    tris = list(K.simplices(2))
    sides = {}
    for t, pc in around:
        tri = tris[t]
        q, r = [p for p in range(3) if p != pc]
        lq, lr = _edge_between(tri, pc, q), _edge_between(tri, pc, r)
        sides[frozenset((lq, lr))] = (tri[pc], lq)
        tris[t] = None
    if len(sides) != 3 or set().union(*sides) != set(ends):
        raise InadmissibleMove(f"star of vertex {c} is not a triangulated disk")
    new = oriented_triangle(sides)
    if new is None:
        raise InadmissibleMove(f"outer sides at vertex {c} cannot be ordered")
    tris[around[0][0]] = new
    edges = list(K.edges)
    for e in ends:
        edges[e] = None
    return _rebuild_surface(K.vertex_count, edges, tris)


def _surface_contract(K, e):
    u, v = K.edges[e]
    if u == v:
        raise InadmissibleMove(f"edge {e} is a loop")
    slots = facet_slots(K)[e]
    if len(slots) != 2 or slots[0][0] == slots[1][0]:
        raise InadmissibleMove(f"edge {e} is not shared by two distinct triangles")
    tris = list(K.simplices(2))
    edges = list(K.edges)
    merge = {}
    for t, j in slots:
        tri = tris[t]
        pu, pv, pw = _corners(tri, j)
        a, b = _edge_between(tri, pu, pw), _edge_between(tri, pv, pw)
        if a == b or (pu < pw) != (pv < pw):
            raise InadmissibleMove(f"sides next to edge {e} cannot be merged coherently")
        merge[b] = a
        tris[t] = None
    if set(merge) & set(merge.values()) or len(merge) != 2:
        raise InadmissibleMove(f"contracting edge {e} folds its neighbourhood")
    for b in merge:
        edges[b] = None
    edges[e] = None
    tris = [None if t is None else tuple(merge.get(f, f) for f in t) for t in tris]
    return _rebuild_surface(K.vertex_count, edges, tris, {v: u})


_SURFACE_MOVES = {"flip": _surface_flip, "insert": _surface_insert,
                  "remove": _surface_remove, "contract": _surface_contract}


def _surface_signature(K):
    r = validate(K)
    return euler_characteristic(K), r.is_orientable


def _check_surface(L, sig):
    r = validate(L)
    if not (r.is_pseudomanifold and r.is_connected):
        raise InadmissibleMove("result is not a connected pseudomanifold")
    if any(c != 1 for c in surface_vertex_links(L)):
        raise InadmissibleMove("result has a singular vertex")
    if (euler_characteristic(L), r.is_orientable) != sig:
        raise InadmissibleMove("result changed the surface type")


# ---------------------------------------------------------------------------
# simplicial 3-manifolds

def _facets(K):
    return [frozenset(K.vertices(K.dimension, i)) for i in range(K.top_count)]


def _from_sets(facets) -> DeltaComplex:
    used = sorted(set().union(*facets))
    vid = {v: i for i, v in enumerate(used)}
    return from_facets([[vid[v] for v in f] for f in facets], len(used))


def _closure(facets):
    out = set()
    for f in facets:
        for r in range(1, len(f) + 1):
            out.update(frozenset(s) for s in combinations(sorted(f), r))
    return out


def _link(facets, s):
    return {f - s for f in facets if s <= f}


def _solid_move(K, m: Move):
    facets = _facets(K)
    fs = set(facets)
    nv = K.vertex_count
    t = tuple(m.target)
    if m.kind == "1-4":
        tet = frozenset(t)
        if tet not in fs:
            raise InadmissibleMove(f"{t} is not a tetrahedron")
        fs.remove(tet)
        fs.update((tet - {x}) | {nv} for x in tet)
    elif m.kind == "4-1":
        (x,) = t
        star = [f for f in facets if x in f]
        rim = frozenset().union(*star) - {x} if star else frozenset()
        if len(star) != 4 or len(rim) != 4 or rim in fs:
            raise InadmissibleMove(f"vertex {x} is not the center of a 1-4 star")
        fs.difference_update(star)
        fs.add(rim)
    elif m.kind == "2-3":
        a, b, c, d, e = t
        tri = frozenset((a, b, c))
        t1, t2 = tri | {d}, tri | {e}
        if d == e or t1 not in fs or t2 not in fs:
            raise InadmissibleMove(f"{t} does not describe two tetrahedra on a common triangle")
        if any({d, e} <= f for f in facets):
            raise InadmissibleMove(f"edge {(d, e)} already exists")
        fs -= {t1, t2}
        fs.update(frozenset(p) | {d, e} for p in combinations((a, b, c), 2))
    elif m.kind == "3-2":
        d, e = t
        star = [f for f in facets if {d, e} <= f]
        rim = frozenset().union(*star) - {d, e} if star else frozenset()
        if len(star) != 3 or len(rim) != 3:
            raise InadmissibleMove(f"edge {t} does not have degree 3")
        if any(rim <= f for f in facets):
            raise InadmissibleMove(f"triangle {tuple(sorted(rim))} already exists")
        fs.difference_update(star)
        fs.update((rim | {d}, rim | {e}))
    elif m.kind == "contract":
        u, v = t
        if not any({u, v} <= f for f in facets):
            raise InadmissibleMove(f"{t} is not an edge")
        lu, lv = _closure(_link(facets, frozenset((u,)))), _closure(_link(facets, frozenset((v,))))
        luv = _closure(_link(facets, frozenset((u, v))))
        if (lu & lv) != luv:
            raise InadmissibleMove(f"edge {t} fails the link condition")
        fs = {(f - {v}) | {u} if v in f else f for f in facets if not {u, v} <= f}
        if len(fs) < 5:
            raise InadmissibleMove("contraction would collapse the complex")
    else:
        raise InadmissibleMove(f"unknown 3D move {m.kind!r}")
    return _from_sets(sorted(fs, key=sorted))


# ---------------------------------------------------------------------------
# public move interface

def candidate_moves(K: DeltaComplex) -> list[Move]:
    """Syntactic candidates in deterministic order; admissibility is not checked."""
    n = K.dimension
    if n == 2:
        out = [Move("flip", (e,)) for e in range(K.count(1))]
        out += [Move("insert", (t,)) for t in range(K.top_count)]
        out += [Move("remove", (v,)) for v in range(K.vertex_count)]
        out += [Move("contract", (e,)) for e, (a, b) in enumerate(K.edges) if a != b]
        return out
    if n == 3:
        if not K.is_simplicial():
            return []
        facets = sorted(tuple(sorted(f)) for f in _facets(K))
        out = [Move("1-4", f) for f in facets]
        out += [Move("4-1", (v,)) for v in range(K.vertex_count)]
        tri_star: dict = {}
        for f in facets:
            for x in f:
                tri_star.setdefault(tuple(y for y in f if y != x), []).append(x)
        for tri, apexes in sorted(tri_star.items()):
            if len(apexes) == 2:
                out.append(Move("2-3", tri + tuple(sorted(apexes))))
        edges = sorted({p for f in facets for p in combinations(f, 2)})
        out += [Move("3-2", e) for e in edges]
        out += [Move("contract", e) for e in edges]
        return out
    return []


def apply_move(K: DeltaComplex, m: Move) -> DeltaComplex:
    """Apply ``m`` or raise ``InadmissibleMove``; the result is homeomorphic to ``K``."""
    if K.dimension == 2:
        fn = _SURFACE_MOVES.get(m.kind)
        if fn is None:
            raise InadmissibleMove(f"unknown surface move {m.kind!r}")
        L = fn(K, *m.target)
        _check_surface(L, _surface_signature(K))
        return L
    if K.dimension == 3:
        if not K.is_simplicial():
            raise InadmissibleMove("3D moves need a simplicial complex")
        return _solid_move(K, m)
    raise InadmissibleMove(f"no moves in dimension {K.dimension}")


def _try(K, m, sig=None):
    try:
        if K.dimension == 2:
            L = _SURFACE_MOVES[m.kind](K, *m.target)
            _check_surface(L, sig or _surface_signature(K))
            return L
        return _solid_move(K, m)
    except (ComplexError, ValueError):
        return None


def applicable_moves(K: DeltaComplex) -> list[Move]:
    """Every admissible move of the catalog, in deterministic order.

    Dimensions other than 2 and 3 give an empty list and a logged warning.
    """
    if K.dimension not in (2, 3):
        log.warning("no move catalog in dimension %d", K.dimension)
        return []
    sig = _surface_signature(K) if K.dimension == 2 else None
    return [m for m in candidate_moves(K) if _try(K, m, sig) is not None]


# ---------------------------------------------------------------------------
# search

@dataclass(frozen=True)
class SearchConfig:
    seed: int = 0
    max_steps: int = 20000
    t0: float = 2.0
    cooling: float = 0.995
    neutral_accept_floor: float = 0.05
    guard: str = "sampled"          # full | sampled | off
    guard_every: int = 50
    patience: int = 4000
    reheat: int = 1000

    def __post_init__(self):
        if self.guard not in ("full", "sampled", "off"):
            raise ValueError(f"unknown guard mode {self.guard!r}")
        if not (self.t0 > 0 and 0 < self.cooling <= 1 and self.max_steps >= 0):
            raise ValueError("invalid annealing schedule")

    @classmethod
    def from_document(cls, doc) -> "SearchConfig":
        known = {k: doc[k] for k in cls.__dataclass_fields__ if k in doc}
        return cls(**known)

    def to_document(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class SimplifyResult:
    best: DeltaComplex
    initial_size: int
    trace: tuple[int, ...]
    moves: tuple[Move, ...]
    seed: int
    config: SearchConfig
    warnings: tuple[str, ...] = ()

    @property
    def best_size(self) -> int:
        return self.best.top_count

    def to_document(self) -> dict:
        return {"initial_size": self.initial_size, "best_size": self.best_size,
                "trace": list(self.trace), "moves": [m.to_document() for m in self.moves],
                "seed": self.seed, "config": self.config.to_document(),
                "warnings": list(self.warnings)}


def size_floor(K: DeltaComplex) -> int:
    """Fewest top simplices a complex homeomorphic to ``K`` can have, for surfaces.

    A closed surface with V vertices has F = 2V - 2chi triangles.  Other
    dimensions return 1.
    """
    if K.dimension == 2:
        return max(2, 2 - 2 * euler_characteristic(K))
    return 1


def _size_delta(K, m):
    if m.kind == "contract" and K.dimension == 3:
        u, v = m.target
        return -sum(1 for i in range(K.top_count) if {u, v} <= set(K.vertices(3, i)))
    return SIZE_DELTA[K.dimension][m.kind]


def simplify(K: DeltaComplex, config: SearchConfig | None = None) -> SimplifyResult:
    """Seeded annealing over the move catalog, minimizing the number of top simplices.

    Each step picks a move kind and then a candidate uniformly.  Decreasing
    moves are always taken, size-neutral ones with probability at least
    ``neutral_accept_floor`` and increasing ones with ``exp(-delta/T)``.
    Surfaces stop as soon as the triangle floor is reached.  After
    ``reheat`` steps without improvement the walk restarts hot from the best
    complex; solids give up after ``patience`` such steps.
    """
    cfg = config or SearchConfig()
    if K.dimension not in (2, 3) or (K.dimension == 3 and not K.is_simplicial()):
        msg = f"no simplification in this setting (dimension {K.dimension})"
        log.warning(msg)
        return SimplifyResult(K, K.top_count, (K.top_count,), (), cfg.seed, cfg, (msg,))
    rng = random.Random(cfg.seed)
    ref = homology_profile(K) if cfg.guard != "off" else None
    sig = _surface_signature(K) if K.dimension == 2 else None
    floor = size_floor(K)
    cur = best = K
    trace = [K.top_count]
    moves: list[Move] = []
    T = cfg.t0
    stale = 0
    for _ in range(cfg.max_steps):
        if best.top_count <= floor:
            break
        if K.dimension == 3 and stale > cfg.patience:
            break
        if cfg.reheat and stale and stale % cfg.reheat == 0:
            cur, T = best, cfg.t0
        cands = candidate_moves(cur)
        by_kind: dict = {}
        for m in cands:
            by_kind.setdefault(m.kind, []).append(m)
        kinds = sorted(by_kind)
        m = rng.choice(by_kind[rng.choice(kinds)])
        delta = _size_delta(cur, m)
        u = rng.random()
        T *= cfg.cooling
        stale += 1
        if delta > 0 and u >= math.exp(-delta / max(T, 1e-12)):
            continue
        if delta == 0 and u >= max(cfg.neutral_accept_floor, min(1.0, T / cfg.t0)):
            continue
        nxt = _try(cur, m, sig)
        if nxt is None:
            continue
        cur = nxt
        moves.append(m)
        trace.append(cur.top_count)
        if cfg.guard == "full" or (cfg.guard == "sampled" and len(moves) % cfg.guard_every == 0):
            _guard(cur, ref)
        if cur.top_count < best.top_count:
            best = cur
            stale = 0
    if ref is not None:
        _guard(best, ref)
    return SimplifyResult(best, K.top_count, tuple(trace), tuple(moves), cfg.seed, cfg)


def _guard(L, ref):
    if homology_profile(L) != ref:
        raise AssertionError("a move changed the homology profile")


def simplify_best_of(K: DeltaComplex, seeds, config: SearchConfig | None = None) -> SimplifyResult:
    """Run independent seeded searches and keep the smallest result (ties: first seed)."""
    base = config or SearchConfig()
    results = [simplify(K, SearchConfig(**{**asdict(base), "seed": s})) for s in seeds]
    return min(results, key=lambda r: r.best_size)


def random_walk(K: DeltaComplex, steps: int, seed: int = 0, max_size: int | None = None):
    """Apply ``steps`` uniformly proposed admissible moves; yields each new complex with its move.

    Above ``max_size`` top simplices only non-increasing moves are proposed,
    which keeps long walks at desk scale.
    """
    rng = random.Random(seed)
    sig = _surface_signature(K) if K.dimension == 2 else None
    cur = K
    done = 0
    misses = 0
    while done < steps:
        cands = candidate_moves(cur)
        if not cands:
            return
        if max_size is not None and cur.top_count >= max_size:
            cands = [m for m in cands if _size_delta(cur, m) <= 0]
        m = rng.choice(cands)
        nxt = _try(cur, m, sig)
        if nxt is None:
            misses += 1
            if misses > 100 * (steps + 1):
                raise RuntimeError("no admissible move found")
            continue
        cur = nxt
        done += 1
        yield m, cur
