"""Command-line front end for simplicial volume bounds on small triangulations.

Every command reads a complex (a JSON document, or ``@name`` for a built-in
example such as ``@torus``), runs one operation and writes a JSON report.
Exit status 1 means bad input; argparse exits with 2 on usage errors.
"""
from __future__ import annotations

import argparse
import datetime as _dt
import json
import logging
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import __version__
from .bounds import (SCHEMA_VERSION, LedgerInconsistency, LedgerSet, bounds_report,
                     homology_growth_report, manifold_ledgers, register_sv, stable_sequence,
                     upper_bound_triangulation)
from .cache import Cache, cache_key
from .corpus import CORPUS
from .dcomplex import (ComplexError, DeltaComplex, canonical_complex, euler_characteristic,
                       from_document, load_complex, validate)
from .homology import homology_profile
from .hypconst import HypError, HypParams, hyp_report
from .pi1_covers import (DEPTH_CEILING, INDEX_CEILING, CoverError, abelianization, build_cover,
                         low_index_subgroups, presentation, subgroup_chain)
from .simplify import SearchConfig, simplify

log = logging.getLogger(__name__)

COMMANDS = ("validate", "homology", "pi1", "subgroups", "cover", "simplify",
            "bounds", "stable", "growth", "hyp")
COMMAND_HELP = {
    "validate": "check face maps, manifold conditions and orientability",
    "homology": "integer homology, Betti numbers over Q and F_p",
    "pi1": "fundamental group presentation and its abelianization",
    "subgroups": "enumerate subgroups of a given index up to conjugacy",
    "cover": "build the cover of one enumerated subgroup",
    "simplify": "reduce the number of top simplices by local moves",
    "bounds": "lower and upper bounds on the simplicial volumes",
    "stable": "simplified cover sizes along a subgroup chain",
    "growth": "homology growth ratios along a subgroup chain",
    "hyp": "constants of regular ideal hyperbolic simplices",
}
HARD_INDEX_LIMIT = 16
HARD_DEPTH_LIMIT = 8


class InputError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    inputs: list[str] = field(default_factory=list)
    primes: tuple[int, ...] = (2, 3, 5)
    max_index: int = INDEX_CEILING
    depth: int = 0
    search: SearchConfig = field(default_factory=SearchConfig)
    precision: int = 50
    cache_dir: str | None = None
    use_cache: bool = True
    out: str | None = None
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        if not 1 <= self.max_index <= HARD_INDEX_LIMIT:
            raise InputError(f"--max-index must lie in 1..{HARD_INDEX_LIMIT}")
        if not 0 <= self.depth <= HARD_DEPTH_LIMIT:
            raise InputError(f"--depth must lie in 0..{HARD_DEPTH_LIMIT}")
        for p in self.primes:
            if p < 2 or any(p % q == 0 for q in range(2, int(p ** 0.5) + 1)):
                raise InputError(f"{p} is not prime")


def read_complex(spec: str) -> DeltaComplex:
    if spec.startswith("@"):
        name = spec[1:]
        if name not in CORPUS:
            raise InputError(f"unknown built-in complex {name!r}; known: {', '.join(sorted(CORPUS))}")
        return CORPUS[name]()
    try:
        return load_complex(spec)
    except FileNotFoundError as exc:
        raise InputError(f"no such file: {spec}") from exc


def _describe(K: DeltaComplex) -> dict:
    return {"dimension": K.dimension, "f_vector": list(K.f_vector())}


# ---------------------------------------------------------------------------
# cached operations

def cached_simplify(K: DeltaComplex, cfg: SearchConfig, cache: Cache | None):
    """Simplify the canonical relabeling of ``K`` so cached and fresh runs agree."""
    C = canonical_complex(K)
    key = cache_key(C, "simplify", cfg.to_document()) if cache else None
    if cache:
        hit = cache.get(key)
        if hit is not None:
            doc = json.loads(hit)
            return from_document(doc["best"]), doc["result"]
    res = simplify(C, cfg)
    doc = {"best": res.best.to_document(), "result": res.to_document()}
    if cache:
        cache.put(key, json.dumps(doc, sort_keys=True).encode())
    return res.best, doc["result"]


# ---------------------------------------------------------------------------
# commands

def _cmd_validate(cfg, K, cache):
    r = validate(K)
    return {"pseudomanifold": r.is_pseudomanifold, "connected": r.is_connected,
            "orientable": r.is_orientable, "euler_characteristic": euler_characteristic(K),
            "diagnostics": list(r.diagnostics)}


def _cmd_homology(cfg, K, cache):
    p = homology_profile(K, cfg.primes)
    return {"betti": list(p.betti), "degrees": p.to_document(),
            "euler_characteristic": p.euler_characteristic}


def _cmd_pi1(cfg, K, cache):
    P = presentation(K)
    ab = abelianization(P)
    return {"presentation": P.to_document(),
            "abelianization": {"free_rank": ab.free_rank, "divisors": list(ab.divisors),
                               "text": str(ab)}}


def _cmd_subgroups(cfg, K, cache):
    d = cfg.options.get("index") or 2
    recs = low_index_subgroups(presentation(K), d, cfg.max_index)
    return {"index": d, "count": len(recs), "records": [r.to_document() for r in recs]}


def _cmd_cover(cfg, K, cache):
    d = cfg.options.get("index") or 2
    choice = cfg.options.get("choice") or 0
    P = presentation(K)
    recs = low_index_subgroups(P, d, cfg.max_index)
    if choice >= len(recs):
        raise InputError(f"only {len(recs)} subgroups of index {d}")
    res = build_cover(K, recs[choice], P)
    out = {"record": recs[choice].to_document(), "cover": _describe(res.cover),
           "euler_characteristic": euler_characteristic(res.cover),
           "betti": list(homology_profile(res.cover, cfg.primes).betti)}
    if cfg.options.get("write"):
        Path(cfg.options["write"]).write_text(res.cover.dumps())
    return out


def _cmd_simplify(cfg, K, cache):
    best, doc = cached_simplify(K, cfg.search, cache)
    if cfg.options.get("write"):
        Path(cfg.options["write"]).write_text(best.dumps())
    return {"best": _describe(best), "search": doc}


def _cmd_bounds(cfg, K, cache):
    ledgers, prof, _ = manifold_ledgers(K, cfg.primes)
    best, _ = cached_simplify(K, cfg.search, cache)
    if best.top_count < K.top_count:
        for target in ("isv", "stisv", "sv"):
            ledgers[target].add(upper_bound_triangulation(best))
    sv = cfg.options.get("sv")
    if sv is not None:
        register_sv(ledgers, Fraction(sv), cfg.options.get("sv_source") or "user_input")
    return bounds_report(cfg.inputs[0], K, ledgers)


def _chain(cfg, K):
    pins = cfg.options.get("pins")
    strategy = "pinned" if pins else "smallest"
    return subgroup_chain(K, cfg.depth, strategy, pins, cfg.max_index, max(cfg.depth, DEPTH_CEILING))


def _stable(cfg, K, cache, ledgers):
    chain = _chain(cfg, K)
    seq = stable_sequence(K, chain, cfg.search, ledgers,
                          simplifier=lambda C, c: cached_simplify(C, c, cache)[0])
    return chain, seq


def _cmd_stable(cfg, K, cache):
    ledgers = LedgerSet()
    ledgers_pre, _, _ = manifold_ledgers(K, cfg.primes)
    for t in ledgers_pre:
        for e in ledgers_pre[t].entries:
            ledgers[t].add(e)
    chain, seq = _stable(cfg, K, cache, ledgers)
    rep = bounds_report(cfg.inputs[0], K, ledgers, seq)
    rep["chain"] = chain.to_document()
    rep["best_ratio_is"] = "upper bound on stable integral simplicial volume"
    return rep


def _cmd_growth(cfg, K, cache):
    ledgers = LedgerSet()
    chain, seq = _stable(cfg, K, cache, ledgers)
    g = homology_growth_report(K, chain, cfg.search, cfg.primes, seq)
    rep = bounds_report(cfg.inputs[0], K, ledgers, seq, g)
    rep["chain"] = chain.to_document()
    return rep


def _cmd_hyp(cfg, K, cache):
    o = cfg.options
    if o.get("n") is None:
        raise InputError("hyp needs --n")
    p = HypParams(o["n"], o.get("eps"), o.get("a"), o.get("delta"), o.get("eta"), cfg.precision)
    return hyp_report(p).to_document()


_HANDLERS = {"validate": _cmd_validate, "homology": _cmd_homology, "pi1": _cmd_pi1,
             "subgroups": _cmd_subgroups, "cover": _cmd_cover, "simplify": _cmd_simplify,
             "bounds": _cmd_bounds, "stable": _cmd_stable, "growth": _cmd_growth, "hyp": _cmd_hyp}


def run(cfg: RunConfig) -> tuple[int, dict]:
    """Run one command; returns (exit status, report document)."""
    if cfg.command not in _HANDLERS:
        return 2, {"error": f"unknown command {cfg.command!r}"}
    cache = Cache(cfg.cache_dir) if cfg.use_cache else None
    report = {"schema_version": SCHEMA_VERSION, "tool_version": __version__,
              "command": cfg.command, "warnings": [], "generated_at": None}
    try:
        K = None
        if cfg.command != "hyp":
            if not cfg.inputs:
                raise InputError(f"{cfg.command} needs an input complex")
            K = read_complex(cfg.inputs[0])
            report["input"] = {"source": cfg.inputs[0], **_describe(K)}
        report["result"] = _HANDLERS[cfg.command](cfg, K, cache)
        status = 0
    except (InputError, ComplexError, CoverError, HypError, ValueError, LedgerInconsistency) as exc:
        report["error"] = f"{type(exc).__name__}: {exc}"
        status = 1
    if cache is not None:
        report["warnings"] += cache.warnings
    report["generated_at"] = _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")
    return status, report


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="svbounds", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True, metavar="command")

    def common(p, needs_input=True):
        if needs_input:
            p.add_argument("input", help="complex document, or @name for a built-in example")
        p.add_argument("--primes", default="2,3,5", help="comma-separated primes")
        p.add_argument("--max-index", type=int, default=INDEX_CEILING)
        p.add_argument("--depth", type=int, default=0)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--max-steps", type=int, default=SearchConfig.max_steps)
        p.add_argument("--t0", type=float, default=SearchConfig.t0)
        p.add_argument("--cooling", type=float, default=SearchConfig.cooling)
        p.add_argument("--neutral-accept-floor", type=float, default=SearchConfig.neutral_accept_floor)
        p.add_argument("--precision", type=int, default=50)
        p.add_argument("--cache-dir", default=None)
        p.add_argument("--no-cache", action="store_true")
        p.add_argument("--out", default=None, help="write the report here instead of stdout")

    for name in COMMANDS:
        p = sub.add_parser(name, help=COMMAND_HELP[name], description=COMMAND_HELP[name])
        common(p, needs_input=name != "hyp")
        if name in ("subgroups", "cover"):
            p.add_argument("--index", type=int, default=2)
        if name == "cover":
            p.add_argument("--choice", type=int, default=0)
        if name in ("cover", "simplify"):
            p.add_argument("--write", default=None, help="also write the resulting complex")
        if name == "bounds":
            p.add_argument("--sv", default=None, help="known simplicial volume (exact, e.g. 4 or 7/2)")
            p.add_argument("--sv-source", default="user_input", choices=("user_input", "gromov_thurston"))
        if name in ("stable", "growth"):
            p.add_argument("--pins", default=None,
                           help="per-level selections 'index:position,...' instead of smallest-first")
        if name == "hyp":
            p.add_argument("--n", type=int, required=True)
            for flag in ("eps", "a", "delta", "eta"):
                p.add_argument(f"--{flag}", type=float, default=None)
    return ap


def config_from_args(ns) -> RunConfig:
    try:
        primes = tuple(int(x) for x in ns.primes.split(",") if x.strip())
    except ValueError as exc:
        raise InputError(f"bad --primes: {ns.primes}") from exc
    search = SearchConfig(seed=ns.seed, max_steps=ns.max_steps, t0=ns.t0, cooling=ns.cooling,
                          neutral_accept_floor=ns.neutral_accept_floor)
    opts = {k: getattr(ns, k, None) for k in ("index", "choice", "write", "sv", "sv_source",
                                              "n", "eps", "a", "delta", "eta")}
    if getattr(ns, "pins", None):
        try:
            opts["pins"] = [tuple(int(x) for x in item.split(":")) for item in ns.pins.split(",")]
        except ValueError as exc:
            raise InputError(f"bad --pins: {ns.pins}") from exc
    if opts.get("sv") is not None:
        try:
            opts["sv"] = Fraction(opts["sv"])
        except ValueError as exc:
            raise InputError(f"bad --sv: {ns.sv}") from exc
    return RunConfig(ns.command, [ns.input] if hasattr(ns, "input") else [], primes,
                     ns.max_index, ns.depth, search, ns.precision, ns.cache_dir,
                     not ns.no_cache, ns.out, opts)


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    ns = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(ns)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    status, report = run(cfg)
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if cfg.out:
        Path(cfg.out).write_text(text)
    else:
        sys.stdout.write(text)
    if status:
        print(report.get("error", "failed"), file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
