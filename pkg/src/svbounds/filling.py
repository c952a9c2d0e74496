"""Ordered chains on cones: the straight-line prism homotopy and norm-controlled fillings.

Chains here are sums of ordered vertex tuples (repeats allowed) whose vertex
sets span simplices of a simplicial host.  Degenerate tuples are kept and
counted in the l1 norm.
"""
from __future__ import annotations

from dataclasses import dataclass
from types import MappingProxyType
from typing import Mapping

from .dcomplex import ComplexError, DeltaComplex, cone


class OrderedChain:
    __slots__ = ("degree", "_c", "l1")

    def __init__(self, degree: int, coeffs: Mapping[tuple[int, ...], int] | None = None):
        self.degree = int(degree)
        c = {}
        for t, a in (coeffs or {}).items():
            t = tuple(int(v) for v in t)
            if len(t) != self.degree + 1:
                raise ValueError(f"tuple {t} does not have {self.degree + 1} entries")
            if a:
                c[t] = int(a)
        self._c = c
        self.l1 = sum(abs(a) for a in c.values())

    @property
    def coeffs(self):
        return MappingProxyType(self._c)

    def items(self):
        return self._c.items()

    def __getitem__(self, t):
        return self._c.get(tuple(t), 0)

    def is_zero(self) -> bool:
        return not self._c

    def __add__(self, other: "OrderedChain") -> "OrderedChain":
        if self.degree != other.degree:
            raise ValueError("degree mismatch")
        out = dict(self._c)
        for t, a in other._c.items():
            out[t] = out.get(t, 0) + a
        return OrderedChain(self.degree, out)

    def __neg__(self):
        return OrderedChain(self.degree, {t: -a for t, a in self._c.items()})

    def __sub__(self, other):
        return self + (-other)

    def __eq__(self, other):
        return isinstance(other, OrderedChain) and self.degree == other.degree and self._c == other._c

    def __hash__(self):
        return hash((self.degree, frozenset(self._c.items())))

    def __repr__(self):
        return f"OrderedChain({self.degree}, {dict(sorted(self._c.items()))})"


def ordered_boundary(c: OrderedChain) -> OrderedChain:
    if c.degree == 0:
        return OrderedChain(-1, {})
    out: dict[tuple, int] = {}
    for t, a in c.items():
        for i in range(len(t)):
            f = t[:i] + t[i + 1:]
            out[f] = out.get(f, 0) + (a if i % 2 == 0 else -a)
    return OrderedChain(c.degree - 1, out)


@dataclass(frozen=True)
class ConeHost:
    """A simplicial cone with its apex and the vertex sets of its simplices."""
    complex: DeltaComplex
    apex: int
    base: DeltaComplex
    spans: frozenset

    @classmethod
    def over(cls, K: DeltaComplex) -> "ConeHost":
        C = cone(K)
        return cls(C, K.vertex_count, K, C.vertex_sets())

    def supports(self, t) -> bool:
        return frozenset(t) in self.spans

    def on_base(self, t) -> bool:
        return self.apex not in t and self.supports(t)


def _check_base(host: ConeHost, c: OrderedChain) -> None:
    for t, _ in c.items():
        if not host.on_base(t):
            raise ComplexError(f"tuple {t} is not supported on the cone base")


def apex_collapse(host: ConeHost, c: OrderedChain) -> OrderedChain:
    """Push forward along the constant map to the apex."""
    total = sum(a for _, a in c.items())
    return OrderedChain(c.degree, {(host.apex,) * (c.degree + 1): total})


def prism_homotopy(host: ConeHost, c: OrderedChain) -> OrderedChain:
    """Chain homotopy ``h`` from the identity to the apex collapse.

    The prism over ``(v_0..v_k)`` is cut into the pieces
    ``[v_0..v_i, p..p]``; with signs ``(-1)^(i+1)`` this gives
    ``d h + h d = id - p_#`` and ``l1(h c) <= (k+1) l1(c)``.
    """
    _check_base(host, c)
    p = host.apex
    k = c.degree
    out: dict[tuple, int] = {}
    for t, a in c.items():
        for i in range(k + 1):
            piece = t[:i + 1] + (p,) * (k - i + 1)
            out[piece] = out.get(piece, 0) + (a if i % 2 else -a)
    return OrderedChain(k + 1, out)


def efficient_fill(host: ConeHost, z: OrderedChain) -> OrderedChain:
    """A chain with boundary ``z`` and l1 norm at most ``(n+1) l1(z)``, ``n = deg z + 1``.

    Built as the prism over ``z`` plus a filling of the collapsed cycle
    ``p_# z`` by constant apex tuples, whose norm is at most ``l1(z)``.
    """
    n = z.degree + 1
    if n < 2:
        raise ValueError("filling needs a cycle of degree at least 1")
    if not ordered_boundary(z).is_zero():
        raise ValueError("input chain is not a cycle")
    _check_base(host, z)
    fill = prism_homotopy(host, z)
    total = sum(a for _, a in z.items())
    # the constant n-tuple is a boundary only when n is even: d(p^(n+1)) = p^n
    if total:
        if n % 2:
            raise ArithmeticError("collapsed cycle is nonzero in odd degree")
        fill = fill + OrderedChain(n, {(host.apex,) * (n + 1): total})
    return fill
