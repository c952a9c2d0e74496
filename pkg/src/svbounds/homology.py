"""Exact integer homology, Smith normal form, and the cap-product duality map."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm, prod
from typing import Iterable, Mapping, Sequence

import mpmath

from .dcomplex import ChainVector, ComplexError, DeltaComplex, euler_characteristic

DEFAULT_PRIMES = (2, 3, 5)
LOG_DIGITS = 60


# ---------------------------------------------------------------------------
# integer matrices and Smith normal form

@dataclass(frozen=True)
class IntegerMatrix:
    rows: int
    cols: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ValueError("entries do not match the declared shape")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> "IntegerMatrix":
        rows = [tuple(int(x) for x in r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        return cls(len(rows), cols, tuple(rows))

    @classmethod
    def identity(cls, n: int) -> "IntegerMatrix":
        return cls.from_rows([[int(i == j) for j in range(n)] for i in range(n)], n)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntegerMatrix":
        return cls.from_rows([[0] * cols for _ in range(rows)], cols)

    def __matmul__(self, other: "IntegerMatrix") -> "IntegerMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        cols = list(zip(*other.entries)) if other.rows else [()] * other.cols
        return IntegerMatrix.from_rows(
            [[sum(a * b for a, b in zip(r, c)) for c in cols] for r in self.entries], other.cols)

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.entries]


@dataclass(frozen=True)
class SmithForm:
    diagonal: tuple[int, ...]
    left: IntegerMatrix
    right: IntegerMatrix
    shape: tuple[int, int]

    @property
    def rank(self) -> int:
        return len(self.diagonal)

    @property
    def divisors(self) -> tuple[int, ...]:
        """Elementary divisors greater than one."""
        return tuple(d for d in self.diagonal if d > 1)

    def matrix(self) -> IntegerMatrix:
        m, n = self.shape
        return IntegerMatrix.from_rows(
            [[self.diagonal[i] if i == j and i < len(self.diagonal) else 0 for j in range(n)]
             for i in range(m)], n)


def smith_normal_form(A: IntegerMatrix | Sequence[Sequence[int]]) -> SmithForm:
    """Smith normal form with unimodular transforms, ``U @ A @ V == S``.

    Pivots are the entries of least absolute value in the remaining block;
    everything is exact integer arithmetic.
    """
    if not isinstance(A, IntegerMatrix):
        A = IntegerMatrix.from_rows(A)
    m, n = A.rows, A.cols
    S = [list(r) for r in A.entries]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        S[i], S[j] = S[j], S[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in S:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row_dst += q * row_src
        if q:
            S[dst] = [a + q * b for a, b in zip(S[dst], S[src])]
            U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, q):  # col_dst += q * col_src
        if q:
            for row in S:
                row[dst] += q * row[src]
            for row in V:
                row[dst] += q * row[src]

    diag = []
    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                a = S[i][j]
                if a and (best is None or abs(a) < best[0]):
                    best = (abs(a), i, j)
                    if best[0] == 1:
                        break
            if best and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            p = S[t][t]
            dirty = False
            for i in range(t + 1, m):
                if S[i][t]:
                    add_row(i, t, -(S[i][t] // p))
                    dirty = dirty or S[i][t] != 0
            for j in range(t + 1, n):
                if S[t][j]:
                    add_col(j, t, -(S[t][j] // p))
                    dirty = dirty or S[t][j] != 0
            if dirty:
                # bring the smallest leftover of row/column t into the pivot
                cand = [(abs(S[i][t]), i, t) for i in range(t + 1, m) if S[i][t]]
                cand += [(abs(S[t][j]), t, j) for j in range(t + 1, n) if S[t][j]]
                _, i, j = min(cand)
                if i != t:
                    swap_rows(t, i)
                else:
                    swap_cols(t, j)
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if S[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if S[t][t] < 0:
            S[t] = [-a for a in S[t]]
            U[t] = [-a for a in U[t]]
        diag.append(S[t][t])
        t += 1
    return SmithForm(tuple(diag), IntegerMatrix.from_rows(U, m), IntegerMatrix.from_rows(V, n), (m, n))


def determinant(A: IntegerMatrix) -> int:
    """Bareiss fraction-free determinant."""
    n = A.rows
    if n != A.cols:
        raise ValueError("square matrix required")
    M = [list(r) for r in A.entries]
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if M[i][k]), None)
            if swap is None:
                return 0
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1] if n else 1


def _diagonal_only(rows: list[list[int]]) -> list[int]:
    if not rows or not rows[0]:
        return []
    return list(smith_normal_form(rows).diagonal)


def elementary_diagonal(rows: Iterable[Mapping[int, int]]) -> list[int]:
    """Nonzero Smith diagonal of a sparse matrix given as row dicts.

    Unit pivots are eliminated sparsely first (each contributes a 1); the
    remaining block goes through the dense routine without transforms.
    """
    rows = [dict(r) for r in rows if r]
    rows = [{c: a for c, a in r.items() if a} for r in rows]
    rows = [r for r in rows if r]
    col_rows: dict[int, set[int]] = {}
    for i, r in enumerate(rows):
        for c in r:
            col_rows.setdefault(c, set()).add(i)
    alive = set(range(len(rows)))
    ones = 0
    while True:
        pivot = None
        for i in sorted(alive, key=lambda i: len(rows[i])):
            for c, a in rows[i].items():
                if a in (1, -1):
                    pivot = (i, c, a)
                    break
            if pivot:
                break
        if pivot is None:
            break
        i, c, a = pivot
        prow = rows[i]
        alive.discard(i)
        for c2 in prow:
            col_rows[c2].discard(i)
        for r in list(col_rows[c]):
            row = rows[r]
            q = row[c] * a  # a is its own inverse
            for c2, b in prow.items():
                v = row.get(c2, 0) - q * b
                if v:
                    if c2 not in row:
                        col_rows[c2].add(r)
                    row[c2] = v
                else:
                    row.pop(c2, None)
                    col_rows[c2].discard(r)
            if not row:
                alive.discard(r)
        ones += 1
    rest = [rows[i] for i in sorted(alive) if rows[i]]
    if not rest:
        return [1] * ones
    cols = sorted({c for r in rest for c in r})
    pos = {c: j for j, c in enumerate(cols)}
    dense = [[0] * len(cols) for _ in rest]
    for i, r in enumerate(rest):
        for c, a in r.items():
            dense[i][pos[c]] = a
    return [1] * ones + _diagonal_only(dense)


def rank_mod_p(rows: Iterable[Mapping[int, int]], p: int) -> int:
    """Rank over F_p of a sparse integer matrix given as row dicts."""
    pivots: dict[int, dict[int, int]] = {}
    rank = 0
    for r in rows:
        row = {c: a % p for c, a in r.items() if a % p}
        while row:
            c = min(row)
            if c not in pivots:
                inv = pow(row[c], -1, p)
                pivots[c] = {k: v * inv % p for k, v in row.items()}
                rank += 1
                break
            q = row[c]
            for k, v in pivots[c].items():
                nv = (row.get(k, 0) - q * v) % p
                if nv:
                    row[k] = nv
                else:
                    row.pop(k, None)
    return rank


def _reduce(rows: list[dict], p: int | None):
    """Reduced row echelon form over Q (p None) or F_p; returns (pivot rows by column)."""
    one = Fraction(1) if p is None else 1
    pivots: dict[int, dict[int, object]] = {}
    for r in rows:
        row = {c: (Fraction(a) if p is None else a % p) for c, a in r.items()}
        row = {c: a for c, a in row.items() if a}
        for c in sorted(pivots):
            if c in row:
                q = row[c]
                for k, v in pivots[c].items():
                    nv = row.get(k, 0) - q * v
                    if p is not None:
                        nv %= p
                    if nv:
                        row[k] = nv
                    else:
                        row.pop(k, None)
        if not row:
            continue
        c = min(row)
        inv = one / row[c] if p is None else pow(row[c], -1, p)
        row = {k: (v * inv if p is None else v * inv % p) for k, v in row.items()}
        for c2, prow in pivots.items():
            if c in prow:
                q = prow[c]
                for k, v in row.items():
                    nv = prow.get(k, 0) - q * v
                    if p is not None:
                        nv %= p
                    if nv:
                        prow[k] = nv
                    else:
                        prow.pop(k, None)
        pivots[c] = row
    return pivots


def field_rank(rows: Iterable[Mapping[int, int]], p: int | None = None) -> int:
    """Rank over Q (``p=None``) or F_p."""
    if p is not None:
        return rank_mod_p(rows, p)
    return len(elementary_diagonal(rows))


def nullspace(rows: Sequence[Mapping[int, int]], ncols: int, p: int | None = None) -> list[dict[int, int]]:
    """Integer vectors spanning the kernel over Q (``p=None``) or F_p."""
    pivots = _reduce(list(rows), p)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fcol in free:
        vec = {fcol: Fraction(1) if p is None else 1}
        for c, prow in pivots.items():
            v = prow.get(fcol, 0)
            if v:
                vec[c] = -v if p is None else (-v) % p
        if p is None:
            den = lcm(*(x.denominator for x in vec.values()))
            vec = {c: int(x * den) for c, x in vec.items()}
        basis.append(vec)
    return basis


# ---------------------------------------------------------------------------
# chain complexes of Delta-complexes

def boundary_columns(K: DeltaComplex, k: int) -> list[dict[int, int]]:
    """Column ``s`` of the ``k``-th boundary matrix as a dict (k-1 simplex -> coeff)."""
    cols = []
    for s in range(K.count(k)):
        col: dict[int, int] = {}
        for j, f in enumerate(K.faces(k, s)):
            col[f] = col.get(f, 0) + (1 if j % 2 == 0 else -1)
        cols.append({f: a for f, a in col.items() if a})
    return cols


def boundary_matrix(K: DeltaComplex, k: int) -> IntegerMatrix:
    rows, cols = K.count(k - 1), K.count(k)
    M = [[0] * cols for _ in range(rows)]
    for s, col in enumerate(boundary_columns(K, k)):
        for f, a in col.items():
            M[f][s] = a
    return IntegerMatrix.from_rows(M, cols)


@dataclass(frozen=True)
class DegreeHomology:
    k: int
    betti_Q: int
    ranks: Mapping[int, int]
    divisors: tuple[int, ...]
    tors_size: int
    log_tors: mpmath.mpf

    def rank(self, p: int | None = None) -> int:
        return self.betti_Q if p is None or p == 0 else self.ranks[p]

    def to_document(self) -> dict:
        return {"k": self.k, "betti_Q": self.betti_Q,
                "ranks": {str(p): r for p, r in sorted(self.ranks.items())},
                "divisors": list(self.divisors), "tors_size": str(self.tors_size),
                "log_tors": mpmath.nstr(self.log_tors, 30)}


@dataclass(frozen=True)
class HomologyProfile:
    dimension: int
    degrees: tuple[DegreeHomology, ...]
    primes: tuple[int, ...] = DEFAULT_PRIMES
    euler_characteristic: int = field(default=0)

    def __getitem__(self, k: int) -> DegreeHomology:
        return self.degrees[k]

    @property
    def betti(self) -> tuple[int, ...]:
        return tuple(d.betti_Q for d in self.degrees)

    def signature(self) -> tuple:
        """Everything except the log reals; used for equality checks."""
        return tuple((d.betti_Q, tuple(sorted(d.ranks.items())), d.divisors) for d in self.degrees)

    def __eq__(self, other):
        return isinstance(other, HomologyProfile) and self.signature() == other.signature()

    def __hash__(self):
        return hash(self.signature())

    def to_document(self) -> list[dict]:
        return [d.to_document() for d in self.degrees]


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % q for q in range(2, int(p ** 0.5) + 1))


def homology_profile(K: DeltaComplex, primes: Sequence[int] = DEFAULT_PRIMES) -> HomologyProfile:
    """Betti numbers over Q and F_p, and the torsion of integral homology."""
    primes = tuple(primes)
    bad = [p for p in primes if not _is_prime(p)]
    if bad:
        raise ValueError(f"not prime: {bad}")
    n = K.dimension
    cols = [None] + [boundary_columns(K, k) for k in range(1, n + 1)]
    diag = [[]] + [elementary_diagonal(cols[k]) for k in range(1, n + 1)] + [[]]
    rank_p = {p: [0] + [rank_mod_p(cols[k], p) for k in range(1, n + 1)] + [0] for p in primes}
    out = []
    with mpmath.workdps(LOG_DIGITS):
        for k in range(n + 1):
            ck = K.count(k)
            betti = ck - len(diag[k]) - len(diag[k + 1])
            divisors = tuple(sorted(d for d in diag[k + 1] if d > 1))
            tors = prod(divisors)
            ranks = {p: ck - rank_p[p][k] - rank_p[p][k + 1] for p in primes}
            out.append(DegreeHomology(k, betti, ranks, divisors, tors, mpmath.log(tors)))
    chi = euler_characteristic(K)
    if sum((-1) ** d.k * d.betti_Q for d in out) != chi:
        raise ArithmeticError("Euler characteristic cross-check failed")
    return HomologyProfile(n, tuple(out), primes, chi)


# ---------------------------------------------------------------------------
# cochains and the cap product with a fundamental cycle

def coboundary(K: DeltaComplex, f: ChainVector) -> ChainVector:
    """``(delta f)(s) = sum_j (-1)^j f(face_j s)`` on (deg+1)-simplices."""
    d = f.degree + 1
    if d > K.dimension:
        return ChainVector(d, {})
    out = {}
    for s in range(K.count(d)):
        v = 0
        for j, face in enumerate(K.faces(d, s)):
            a = f[face]
            if a:
                v += a if j % 2 == 0 else -a
        if v:
            out[s] = v
    return ChainVector(d, out)


def cap_with_fundamental_cycle(K: DeltaComplex, z: ChainVector, f: ChainVector) -> ChainVector:
    """Cap a top-degree chain with a cochain of degree ``n-k``.

    Each top simplex contributes ``z(s) * f(front face) * back face`` where the
    front face spans vertices ``0..n-k`` and the back face ``n-k..n``; the sum
    carries the global sign ``(-1)^(k(n-k))``.
    """
    n = K.dimension
    if z.degree != n:
        raise ComplexError(f"expected a degree-{n} chain, got degree {z.degree}")
    q = f.degree
    if not 0 <= q <= n:
        raise ComplexError(f"cochain degree {q} outside 0..{n}")
    k = n - q
    sign = -1 if (k * q) % 2 else 1
    front = tuple(range(q + 1))
    back = tuple(range(q, n + 1))
    out: dict[int, int] = {}
    for s, a in z.items():
        fv = f[K.sub_face(n, s, front)]
        if fv:
            b = K.sub_face(n, s, back)
            out[b] = out.get(b, 0) + sign * a * fv
    return ChainVector(k, out)


def cocycle_basis(K: DeltaComplex, q: int, p: int | None = None) -> list[ChainVector]:
    """Integer cochains spanning the degree-``q`` cocycles over Q or F_p."""
    if q >= K.dimension:
        return [ChainVector(q, {s: 1}) for s in range(K.count(q))]
    rows = boundary_columns(K, q + 1)  # row tau of delta_q is the boundary of tau
    return [ChainVector(q, v) for v in nullspace(rows, K.count(q), p)]


def pd_surjectivity_rank(K: DeltaComplex, z: ChainVector, k: int, p: int | None = None) -> int:
    """Rank over Q (``p=None``) or F_p of ``[f] -> [f cap z]`` from H^(n-k) to H_k."""
    n = K.dimension
    if not 0 <= k <= n:
        raise ComplexError(f"degree {k} outside 0..{n}")
    if p == 0:
        p = None
    images = [dict(cap_with_fundamental_cycle(K, z, f).items())
              for f in cocycle_basis(K, n - k, p)]
    bnd = boundary_columns(K, k + 1) if k < n else []
    return field_rank(bnd + images, p) - field_rank(bnd, p)
