"""Provenance-tagged bounds on simplicial volume and its integral and stable variants.

Three ledgers are kept: ``sv`` (the real simplicial volume), ``isv`` (the
integral one) and ``stisv`` (the stable integral one).  Every insertion is
checked against the bounds already present, so a lower bound above an upper
bound raises at once.  Ratios are exact fractions; logarithmic torsion
bounds are computed with mpmath at ``LOG_DIGITS`` digits.
"""
from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

import mpmath

from .dcomplex import DeltaComplex, boundary, fundamental_cycle, validate
from .homology import DEFAULT_PRIMES, HomologyProfile, homology_profile
from .pi1_covers import SubgroupChain, build_cover
from .simplify import SearchConfig, simplify

log = logging.getLogger(__name__)

LOG_DIGITS = 60
SCHEMA_VERSION = "1"
TARGETS = ("sv", "isv", "stisv")
SNAP_TOLERANCE = 1e-9


class Provenance(str, enum.Enum):
    BETTI = "betti"
    TORSION = "torsion"
    SV_SANDWICH = "sv_sandwich"
    TRIANGULATION = "triangulation"
    TRANSFER = "transfer"
    STABLE_RATIO = "stable_ratio"
    USER_INPUT = "user_input"


class LedgerInconsistency(ArithmeticError):
    """A lower bound exceeded an upper bound: some bound was computed wrongly."""


def _mpf(x):
    with mpmath.workdps(LOG_DIGITS):
        if isinstance(x, Fraction):
            return mpmath.mpf(x.numerator) / x.denominator
        return mpmath.mpf(x)


def format_value(x) -> str:
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, int):
        return str(x)
    return mpmath.nstr(_mpf(x), 50)


# ---------------------------------------------------------------------------
# witnesses

@dataclass(frozen=True)
class BettiWitness:
    complex: DeltaComplex
    k: int
    ring: int | None        # None = Q, otherwise a prime
    rank: int

    def verify(self) -> bool:
        primes = () if self.ring is None else (self.ring,)
        return homology_profile(self.complex, primes)[self.k].rank(self.ring) == self.rank


@dataclass(frozen=True)
class CycleWitness:
    complex: DeltaComplex
    size: int

    def verify(self) -> bool:
        z = fundamental_cycle(self.complex)
        return boundary(self.complex, z).is_zero() and z.l1 == self.size


@dataclass(frozen=True)
class BoundEntry:
    kind: str                 # "lower" | "upper"
    value: Any                # Fraction, int or mpf
    provenance: Provenance
    certificate: dict = field(default_factory=dict)
    witness: Any = None

    def __post_init__(self):
        if self.kind not in ("lower", "upper"):
            raise ValueError(f"bound kind must be lower or upper, not {self.kind!r}")
        if _mpf(self.value) < 0:
            raise ValueError("bounds are non-negative")

    @property
    def checkable(self) -> bool:
        return self.witness is not None

    def to_document(self) -> dict:
        return {"kind": self.kind, "value": format_value(self.value),
                "provenance": self.provenance.value, "certificate": self.certificate}


class BoundLedger:
    """Bounds on one invariant; single writer, consistency asserted on insert."""

    def __init__(self, target: str):
        if target not in TARGETS:
            raise ValueError(f"unknown target {target!r}")
        self.target = target
        self.entries: list[BoundEntry] = []

    def lower(self):
        vals = [e.value for e in self.entries if e.kind == "lower"]
        return max(vals, key=_mpf) if vals else None

    def upper(self):
        vals = [e.value for e in self.entries if e.kind == "upper"]
        return min(vals, key=_mpf) if vals else None

    def interval(self):
        return self.lower(), self.upper()

    def add(self, entry: BoundEntry) -> BoundEntry:
        lo, hi = self.lower(), self.upper()
        if entry.kind == "lower" and hi is not None and _mpf(entry.value) > _mpf(hi):
            raise LedgerInconsistency(
                f"{self.target}: lower bound {format_value(entry.value)} ({entry.provenance.value}) "
                f"exceeds upper bound {format_value(hi)}")
        if entry.kind == "upper" and lo is not None and _mpf(entry.value) < _mpf(lo):
            raise LedgerInconsistency(
                f"{self.target}: upper bound {format_value(entry.value)} ({entry.provenance.value}) "
                f"is below lower bound {format_value(lo)}")
        self.entries.append(entry)
        return entry

    def to_document(self) -> dict:
        lo, hi = self.interval()
        return {"lower": None if lo is None else format_value(lo),
                "upper": None if hi is None else format_value(hi),
                "entries": [e.to_document() for e in self.entries]}


class LedgerSet(dict):
    def __init__(self):
        super().__init__((t, BoundLedger(t)) for t in TARGETS)

    def to_document(self) -> dict:
        return {t: self[t].to_document() for t in TARGETS}


# ---------------------------------------------------------------------------
# single-manifold bounds

def lower_bound_betti(profile: HomologyProfile, K: DeltaComplex | None = None) -> BoundEntry:
    """Largest rank of ``H_k(M; R)`` over degrees and over Q and the profile's primes.

    Passing the source complex makes the entry re-checkable.
    """
    best = (-1, 0, None)
    for d in profile.degrees:
        for ring in (None,) + tuple(profile.primes):
            r = d.rank(ring)
            if r > best[0]:
                best = (r, d.k, ring)
    r, k, ring = best
    cert = {"degree": k, "ring": "Q" if ring is None else f"F_{ring}", "rank": r}
    wit = BettiWitness(K, k, ring, r) if K is not None else None
    return BoundEntry("lower", Fraction(r), Provenance.BETTI, cert, wit)


def torsion_bound_value(tors_sizes: dict[int, int], n: int):
    """``max_k log|tors H_k| / (log(n+1) C(n+1, k+1))`` as a high-precision real."""
    with mpmath.workdps(LOG_DIGITS):
        best = mpmath.mpf(0)
        for k, t in tors_sizes.items():
            if t > 1:
                best = max(best, mpmath.log(t) / (mpmath.log(n + 1) * math.comb(n + 1, k + 1)))
        return best


def lower_bound_torsion(profile: HomologyProfile, n: int | None = None) -> BoundEntry | None:
    """Torsion lower bound rounded up to an integer; ``None`` for torsion-free profiles."""
    n = profile.dimension if n is None else n
    sizes = {d.k: d.tors_size for d in profile.degrees}
    raw = torsion_bound_value(sizes, n)
    if raw <= 0:
        return None
    k = max(sizes, key=lambda j: torsion_bound_value({j: sizes[j]}, n))
    cert = {"degree": k, "tors_size": str(sizes[k]), "raw": mpmath.nstr(raw, 50)}
    return BoundEntry("lower", Fraction(int(mpmath.ceil(raw))), Provenance.TORSION, cert)


def upper_bound_triangulation(K: DeltaComplex) -> BoundEntry:
    """Number of top simplices, witnessed by the coherently oriented fundamental cycle."""
    rep = validate(K)
    if not rep.is_orientable:
        raise ValueError("triangulation bound needs an orientable pseudomanifold")
    z = fundamental_cycle(K, rep.orientation)
    if not boundary(K, z).is_zero():
        raise ArithmeticError("fundamental cycle has nonzero boundary")
    return BoundEntry("upper", Fraction(K.top_count), Provenance.TRIANGULATION,
                      {"top_simplices": K.top_count, "f_vector": list(K.f_vector())},
                      CycleWitness(K, K.top_count))


def _integer_ceiling(value):
    if isinstance(value, (int, Fraction)):
        return math.ceil(value)
    v = _mpf(value)
    near = mpmath.nint(v)
    # values such as vol / v_3 carry rounding noise from the input volume;
    # snapping to a nearby integer can only weaken the resulting lower bound
    if abs(v - near) < SNAP_TOLERANCE:
        return int(near)
    return int(mpmath.ceil(v))


def register_sv(ledgers: LedgerSet, value, source: str = "user_input") -> list[BoundEntry]:
    """Post a known simplicial volume and what the sandwich inequalities give.

    ``sv`` gets the value on both sides, ``stisv`` and ``isv`` get it (the
    latter rounded up) as lower bounds.  Zero adds nothing.
    """
    if source not in ("user_input", "gromov_thurston"):
        raise ValueError(f"unknown source {source!r}")
    if _mpf(value) < 0:
        raise ValueError("simplicial volume is non-negative")
    if _mpf(value) == 0:
        return []
    cert = {"source": source}
    out = [ledgers["sv"].add(BoundEntry("lower", value, Provenance.USER_INPUT, cert)),
           ledgers["sv"].add(BoundEntry("upper", value, Provenance.USER_INPUT, cert)),
           ledgers["stisv"].add(BoundEntry("lower", value, Provenance.SV_SANDWICH, cert)),
           ledgers["isv"].add(BoundEntry("lower", Fraction(_integer_ceiling(value)),
                                         Provenance.SV_SANDWICH, cert))]
    return out


@dataclass(frozen=True)
class Certificate:
    target: str
    value: Any
    lower: BoundEntry
    upper: BoundEntry

    def to_document(self) -> dict:
        return {"target": self.target, "value": format_value(self.value),
                "lower": self.lower.to_document(), "upper": self.upper.to_document()}


def certify(ledger: BoundLedger) -> Certificate | None:
    """The exact value when the best bounds meet and both sides have re-checked witnesses."""
    lo, hi = ledger.interval()
    if lo is None or hi is None or _mpf(lo) != _mpf(hi):
        return None
    lows = [e for e in ledger.entries if e.kind == "lower" and e.checkable and _mpf(e.value) == _mpf(lo)]
    ups = [e for e in ledger.entries if e.kind == "upper" and e.checkable and _mpf(e.value) == _mpf(hi)]
    lw = next((e for e in lows if e.witness.verify()), None)
    uw = next((e for e in ups if e.witness.verify()), None)
    if lw is None or uw is None:
        return None
    return Certificate(ledger.target, hi, lw, uw)


def manifold_ledgers(K: DeltaComplex, primes: Sequence[int] = DEFAULT_PRIMES,
                     cfg: SearchConfig | None = None, sv: Any = None,
                     sv_source: str = "user_input") -> tuple[LedgerSet, HomologyProfile, Any]:
    """All single-manifold bounds for ``K``; ``cfg`` adds a simplified triangulation."""
    ledgers = LedgerSet()
    prof = homology_profile(K, primes)
    ledgers["isv"].add(lower_bound_betti(prof, K))
    t = lower_bound_torsion(prof)
    if t is not None:
        ledgers["isv"].add(t)
    for target in ("isv", "stisv", "sv"):
        ledgers[target].add(upper_bound_triangulation(K))
    simp = None
    if cfg is not None:
        simp = simplify(K, cfg)
        if simp.best_size < K.top_count:
            for target in ("isv", "stisv", "sv"):
                ledgers[target].add(upper_bound_triangulation(simp.best))
    if sv is not None:
        register_sv(ledgers, sv, sv_source)
    return ledgers, prof, simp


# ---------------------------------------------------------------------------
# stable ratios and homology growth

@dataclass(frozen=True)
class StableLevel:
    index: int
    upper: int
    ratio: Fraction
    provenance: Provenance
    simplified_size: int

    def to_document(self) -> dict:
        return {"d": self.index, "U": self.upper, "ratio": format_value(self.ratio),
                "provenance": self.provenance.value, "simplified_size": self.simplified_size}


@dataclass(frozen=True)
class StableSequence:
    """Per-level upper bounds ``U_i`` on the integral simplicial volume of the covers.

    ``best_ratio`` bounds the stable integral simplicial volume from above;
    it is an upper bound only, never the value itself.
    """
    levels: tuple[StableLevel, ...]
    chain: SubgroupChain

    @property
    def ratios(self) -> tuple[Fraction, ...]:
        return tuple(l.ratio for l in self.levels)

    @property
    def best_ratio(self) -> Fraction:
        return min(self.ratios)

    def running_best(self) -> list[Fraction]:
        out, cur = [], None
        for r in self.ratios:
            cur = r if cur is None else min(cur, r)
            out.append(cur)
        return out

    def to_document(self) -> list[dict]:
        return [l.to_document() for l in self.levels]


def _chain_covers(K, chain):
    if chain.base == K:
        return chain.covers
    return tuple(build_cover(K, r, chain.presentation).cover for r in chain.records)


def stable_sequence(K: DeltaComplex, chain: SubgroupChain, cfg: SearchConfig | None = None,
                    ledgers: LedgerSet | None = None, simplifier=None) -> StableSequence:
    """Simplify every cover of the chain and record ``U_i / d_i``.

    ``U_i`` is the smaller of the simplified cover size and the transfer
    bound ``d_i U_0``.  The best ratio goes to the ``stisv`` ledger when one
    is given.  ``simplifier(complex, cfg)`` may replace the default search
    (the CLI passes a cached one); it returns the simplified complex.
    """
    cfg = cfg or SearchConfig()
    simplifier = simplifier or (lambda C, c: simplify(C, c).best)
    if not validate(K).is_orientable:
        raise ValueError("stable ratios need an orientable manifold")
    levels = []
    u0 = None
    for rec, cover in zip(chain.records, _chain_covers(K, chain)):
        d = rec.index
        size = simplifier(cover, cfg).top_count
        if u0 is None:
            u, prov = size, Provenance.TRIANGULATION
            u0 = u
        elif size <= d * u0:
            u, prov = size, Provenance.TRIANGULATION
        else:
            u, prov = d * u0, Provenance.TRANSFER
        if u > d * u0:
            raise LedgerInconsistency("transfer inequality violated")
        levels.append(StableLevel(d, u, Fraction(u, d), prov, size))
    seq = StableSequence(tuple(levels), chain)
    if ledgers is not None:
        best = min(seq.levels, key=lambda l: l.ratio)
        ledgers["stisv"].add(BoundEntry("upper", best.ratio, Provenance.STABLE_RATIO,
                                        {"d": best.index, "U": best.upper,
                                         "label": "upper bound on stable integral simplicial volume"}))
    return seq


@dataclass(frozen=True)
class GrowthRow:
    level: int
    index: int
    k: int
    ring: str
    quantity: str                  # "torsion" | "rank"
    ratio: Any
    bound: Any
    limit_bound: Any

    @property
    def ok(self) -> bool:
        return _mpf(self.ratio) <= _mpf(self.bound)

    @property
    def below_limit_bound(self) -> bool:
        return _mpf(self.ratio) <= _mpf(self.limit_bound)

    def to_document(self) -> dict:
        return {"level": self.level, "d": self.index, "k": self.k, "ring": self.ring,
                "quantity": self.quantity, "ratio": format_value(self.ratio),
                "bound": format_value(self.bound), "ok": self.ok,
                "limit_bound": format_value(self.limit_bound),
                "below_limit_bound": self.below_limit_bound}


@dataclass(frozen=True)
class GrowthReport:
    """Homology growth of the covers against the stable upper bounds.

    At level ``i`` the ratios are compared with the best ``U_j/d_j`` over
    ``j <= i``, which bounds the normalized integral simplicial volume of
    the level-``i`` cover by transfer.  The comparison with the overall best
    ratio is reported separately: the growth inequality only constrains the
    limit, so finite levels may exceed it.
    """
    rows: tuple[GrowthRow, ...]
    stable: StableSequence

    @property
    def violations(self) -> list[GrowthRow]:
        return [r for r in self.rows if not r.ok]

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_document(self) -> dict:
        return {"rows": [r.to_document() for r in self.rows], "violations": len(self.violations)}


def homology_growth_report(K: DeltaComplex, chain: SubgroupChain, cfg: SearchConfig | None = None,
                           primes: Sequence[int] = DEFAULT_PRIMES,
                           stable: StableSequence | None = None, simplifier=None) -> GrowthReport:
    stable = stable or stable_sequence(K, chain, cfg, simplifier=simplifier)
    n = K.dimension
    running = stable.running_best()
    final = stable.best_ratio
    with mpmath.workdps(LOG_DIGITS):
        tors_factor = mpmath.log(n + 1) * 2 ** (n + 1)
        rows = []
        for lvl, (rec, cover) in enumerate(zip(chain.records, _chain_covers(K, chain))):
            d = rec.index
            prof = homology_profile(cover, primes)
            for deg in prof.degrees:
                rows.append(GrowthRow(lvl, d, deg.k, "Z", "torsion", deg.log_tors / d,
                                      tors_factor * _mpf(running[lvl]), tors_factor * _mpf(final)))
                for ring in (None,) + tuple(primes):
                    rows.append(GrowthRow(lvl, d, deg.k, "Q" if ring is None else f"F_{ring}",
                                          "rank", Fraction(deg.rank(ring), d), running[lvl], final))
    return GrowthReport(tuple(rows), stable)


def bounds_report(manifold_id: str, K: DeltaComplex, ledgers: LedgerSet,
                  stable: StableSequence | None = None, growth: GrowthReport | None = None) -> dict:
    certs = [c.to_document() for c in (certify(ledgers[t]) for t in TARGETS) if c is not None]
    return {"schema_version": SCHEMA_VERSION, "manifold": manifold_id, "dimension": K.dimension,
            "ledgers": ledgers.to_document(),
            "stable": stable.to_document() if stable else [],
            "growth": growth.to_document() if growth else None,
            "certificates": certs}
