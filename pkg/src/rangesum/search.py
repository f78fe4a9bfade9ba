"""Exhaustive classification and the minimum-degree census."""

from __future__ import annotations

import itertools
import json
import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import comb
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from . import structure
from ._kernel import scan_prefix
from .fpcore import FieldCtx, make_field
from .poly import (
    CanonicalForm,
    FpPoly,
    canonical_form,
    eval_array,
    from_roots,
    interpolate_coeffs,
    roots_with_multiplicity,
)

log = logging.getLogger(__name__)

CLASSIFY_CAP = 23
CLASSIFY_STRETCH_CAP = 31
CENSUS_CAP = 13
CHECKPOINT_SCHEMA = 1
DEFAULT_CHECKPOINT_EVERY = 10**7

Hit = tuple[int, tuple[int, ...]]


class InfeasiblePrime(ValueError):
    pass


class SearchInterrupted(RuntimeError):
    """Raised after a deliberate stop; the checkpoint on disk is resumable."""


@dataclass(frozen=True)
class Orbit:
    form: CanonicalForm
    representative: FpPoly
    c_values: tuple[int, ...]
    raw_count: int
    residual_valid: bool
    leading_class_ok: bool
    hits: tuple[Hit, ...] = field(repr=False)

    def to_dict(self) -> dict:
        return {
            "canonical_values": list(self.form.canonical_values),
            "representative_coeffs": list(self.representative.coeffs),
            "c_values": list(self.c_values),
            "raw_count": self.raw_count,
            "residual_valid": self.residual_valid,
            "leading_class_ok": self.leading_class_ok,
        }


@dataclass
class ClassificationResult:
    p: int
    orbits: list[Orbit]
    raw_solutions: list[Hit]
    nodes_visited: int
    elapsed_ms: int
    normalized: bool

    @property
    def orbit_reps(self) -> list[CanonicalForm]:
        return [o.form for o in self.orbits]

    @property
    def orbit_count(self) -> int:
        return len(self.orbits)

    @property
    def raw_solution_count(self) -> int:
        return len(self.raw_solutions)

    def to_dict(self, include_time: bool = True) -> dict:
        d = {
            "p": self.p,
            "orbit_count": self.orbit_count,
            "raw_solution_count": self.raw_solution_count,
            "orbits": [o.to_dict() for o in self.orbits],
            "nodes_visited": self.nodes_visited,
            "translation_normalized": self.normalized,
        }
        if include_time:
            d["elapsed_ms"] = self.elapsed_ms
        return d


@dataclass
class MinDegreeReport:
    p: int
    census: dict[int, int]
    min_nonconstant_degree: int | None

    @property
    def total(self) -> int:
        return sum(self.census.values())

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "census": [[d, n] for d, n in sorted(self.census.items())],
            "min_nonconstant_degree": self.min_nonconstant_degree,
            "total": self.total,
        }


# -- enumeration ------------------------------------------------------------


def leaf_count(p: int, normalize: bool = True) -> int:
    """Number of root multisets the engine visits."""
    k = (p - 1) // 2
    return comb(p + k - 2, k - 1) if normalize else comb(p + k - 1, k)


def _unit_length(k: int, normalize: bool) -> int:
    return min(k, 3 if normalize else 2)


def work_units(p: int, normalize: bool = True) -> list[tuple[int, ...]]:
    """Enumeration prefixes, in lexicographic order.

    With ``normalize`` every prefix starts at root 0: any completely
    reducible polynomial of positive degree has a root, and translating
    that root to 0 stays inside the affine orbit.
    """
    k = (p - 1) // 2
    length = _unit_length(k, normalize)
    if normalize:
        tails = itertools.combinations_with_replacement(range(p), length - 1)
        return [(0,) + t for t in tails]
    return list(itertools.combinations_with_replacement(range(p), length))


def unit_leaves(p: int, prefix: Sequence[int]) -> int:
    k = (p - 1) // 2
    j = k - len(prefix)
    return comb(p - prefix[-1] + j - 1, j)


def scan_unit(p: int, prefix: tuple[int, ...]) -> tuple[int, list[Hit]]:
    k = (p - 1) // 2
    room = 256
    pre = np.asarray(prefix, dtype=np.int64)
    while True:
        out = np.zeros((room, k + 1), dtype=np.int64)
        leaves, nhits = scan_prefix(p, k, pre, out)
        if nhits <= room:
            break
        room = nhits
    hits = [(int(r[0]), tuple(int(x) for x in r[1:])) for r in out[:nhits]]
    return int(leaves), hits


def _scan_unit_task(args):
    p, prefix = args
    return prefix, *scan_unit(p, prefix)


def expand_translations(p: int, hits: Iterable[Hit]) -> list[Hit]:
    out = set()
    for c, roots in hits:
        for b in range(p):
            out.add((c, tuple(sorted((r + b) % p for r in roots))))
    return sorted(out)


# -- checkpoints ------------------------------------------------------------


def _write_checkpoint(path: Path, p: int, normalize: bool, done: set, hits: set, nodes: int) -> None:
    payload = {
        "schema": CHECKPOINT_SCHEMA,
        "kind": "rangesum-classify-checkpoint",
        "p": p,
        "translation_normalized": normalize,
        "completed_prefixes": sorted(list(u) for u in done),
        "hits": [[c, *roots] for c, roots in sorted(hits)],
        "nodes_visited": nodes,
    }
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(json.dumps(payload))
    os.replace(tmp, path)


def load_checkpoint(path: Path, p: int, normalize: bool) -> tuple[set, set, int]:
    data = json.loads(Path(path).read_text())
    if data.get("schema") != CHECKPOINT_SCHEMA or data.get("kind") != "rangesum-classify-checkpoint":
        raise ValueError(f"{path} is not a classify checkpoint of schema {CHECKPOINT_SCHEMA}")
    if data["p"] != p or data["translation_normalized"] != normalize:
        raise ValueError(f"checkpoint {path} was written for a different run")
    done = {tuple(u) for u in data["completed_prefixes"]}
    hits = {(h[0], tuple(h[1:])) for h in data["hits"]}
    return done, hits, int(data["nodes_visited"])


# -- classification ---------------------------------------------------------


def raw_search(
    ctx: FieldCtx,
    threads: int = 1,
    normalize: bool = True,
    checkpoint_path: str | os.PathLike | None = None,
    resume: bool = False,
    checkpoint_every: int = DEFAULT_CHECKPOINT_EVERY,
    stop_after_units: int | None = None,
) -> tuple[list[Hit], int]:
    """Run the enumeration and return (sorted engine hits, leaves visited)."""
    p = ctx.p
    units = work_units(p, normalize)
    ckpt = Path(checkpoint_path) if checkpoint_path else None
    done: set = set()
    hits: set = set()
    nodes = 0
    if resume:
        if ckpt is None or not ckpt.exists():
            raise FileNotFoundError(f"no checkpoint to resume from at {ckpt}")
        done, hits, nodes = load_checkpoint(ckpt, p, normalize)
    todo = [u for u in units if u not in done]
    # largest units first so the pool drains evenly
    todo.sort(key=lambda u: (-unit_leaves(p, u), u))

    since_write = 0
    finished = 0

    def absorb(prefix, leaves, unit_hits):
        nonlocal nodes, since_write, finished
        done.add(prefix)
        hits.update(unit_hits)
        nodes += leaves
        since_write += leaves
        finished += 1
        if ckpt is not None and since_write >= checkpoint_every:
            _write_checkpoint(ckpt, p, normalize, done, hits, nodes)
            since_write = 0
        if stop_after_units is not None and finished >= stop_after_units:
            if ckpt is not None:
                _write_checkpoint(ckpt, p, normalize, done, hits, nodes)
            raise SearchInterrupted(f"stopped after {finished} units")

    if threads <= 1 or len(todo) < 2:
        for u in todo:
            absorb(u, *scan_unit(p, u))
    else:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            for prefix, leaves, unit_hits in pool.map(
                _scan_unit_task, [(p, u) for u in todo], chunksize=max(1, len(todo) // (8 * threads))
            ):
                absorb(prefix, leaves, unit_hits)
    if ckpt is not None:
        _write_checkpoint(ckpt, p, normalize, done, hits, nodes)
    return sorted(hits), nodes


def hit_poly(ctx: FieldCtx, hit: Hit) -> FpPoly:
    c, roots = hit
    return from_roots(ctx, roots, c)


def orbit_partition(solutions: Sequence[FpPoly], ctx: FieldCtx) -> list[list[FpPoly]]:
    """Group polynomials by canonical form; groups ordered by canonical values."""
    groups: dict[tuple[int, ...], list[FpPoly]] = {}
    for f in solutions:
        groups.setdefault(canonical_form(ctx, f).canonical_values, []).append(f)
    return [groups[key] for key in sorted(groups)]


def classify_all(
    ctx: FieldCtx,
    threads: int = 1,
    checkpoint_path: str | os.PathLike | None = None,
    resume: bool = False,
    normalize: bool = True,
    allow_above_cap: bool = False,
    only_c: Iterable[int] | None = None,
    checkpoint_every: int = DEFAULT_CHECKPOINT_EVERY,
    stop_after_units: int | None = None,
) -> ClassificationResult:
    p = ctx.p
    cap = CLASSIFY_STRETCH_CAP if allow_above_cap else CLASSIFY_CAP
    if p > cap:
        raise InfeasiblePrime(f"p={p} is above the classification cap {cap}")
    start = time.perf_counter()
    engine_hits, nodes = raw_search(
        ctx,
        threads=threads,
        normalize=normalize,
        checkpoint_path=checkpoint_path,
        resume=resume,
        checkpoint_every=checkpoint_every,
        stop_after_units=stop_after_units,
    )
    raw = expand_translations(p, engine_hits) if normalize else engine_hits
    if only_c is not None:
        keep = set(only_c)
        raw = [h for h in raw if h[0] in keep]

    by_form: dict[tuple[int, ...], list[Hit]] = {}
    for h in raw:
        form = canonical_form(ctx, hit_poly(ctx, h))
        by_form.setdefault(form.canonical_values, []).append(h)

    orbits = []
    for key in sorted(by_form):
        members = by_form[key]
        valid = True
        lc_ok = True
        for h in members:
            d = structure.decompose(ctx, hit_poly(ctx, h))
            valid &= structure.residual_report(ctx, d).valid
            lc_ok &= structure.leading_coeff_class(ctx, d)
        rep = min((hit_poly(ctx, h) for h in members), key=lambda f: (sum(1 for c in f.coeffs if c), f.coeffs))
        orbits.append(
            Orbit(
                form=canonical_form(ctx, rep),
                representative=rep,
                c_values=tuple(sorted({c for c, _ in members})),
                raw_count=len(members),
                residual_valid=valid,
                leading_class_ok=lc_ok,
                hits=tuple(members),
            )
        )
    elapsed = int((time.perf_counter() - start) * 1000)
    log.info("p=%d: %d orbits, %d raw solutions, %d leaves in %d ms", p, len(orbits), len(raw), nodes, elapsed)
    return ClassificationResult(p, orbits, raw, nodes, elapsed, normalize)


# -- known families ---------------------------------------------------------


def family_polys(ctx: FieldCtx) -> tuple[FpPoly, FpPoly]:
    """x^k + 1 and ((p+1)/2)(x^k + 1) with k = (p-1)/2."""
    k = ctx.half
    f1 = FpPoly(ctx.p, (1,) + (0,) * (k - 1) + (1,))
    return f1, f1 * ((ctx.p + 1) // 2)


def family_checks(ctx: FieldCtx) -> dict[str, bool]:
    f1, f2 = family_polys(ctx)
    checks = {}
    for name, f in (("f1", f1), ("f2", f2)):
        vals = eval_array(ctx, f)
        checks[f"{name}.degree"] = f.degree == ctx.half
        checks[f"{name}.range_sum"] = int(vals.sum()) == ctx.p
        checks[f"{name}.complete"] = roots_with_multiplicity(ctx, f).complete
        try:
            d = structure.decompose(ctx, f)
        except structure.DecompositionError:
            checks[f"{name}.residual_valid"] = False
            checks[f"{name}.leading_class"] = False
            continue
        checks[f"{name}.residual_valid"] = structure.residual_report(ctx, d).valid
        checks[f"{name}.leading_class"] = structure.leading_coeff_class(ctx, d)
    checks["inequivalent"] = canonical_form(ctx, f1).canonical_values != canonical_form(ctx, f2).canonical_values
    return checks


def verify_known_families(ctx: FieldCtx) -> bool:
    return all(family_checks(ctx).values())


# -- minimum degree census --------------------------------------------------


def _census_chunk(args) -> dict[int, int]:
    p, first = args
    n = 2 * p - 1
    rest = itertools.combinations(range(first + 1, n), p - 2)
    ctx = make_field(p)
    tally: dict[int, int] = {}
    block = 1 << 18
    while True:
        chunk = np.fromiter(itertools.islice(rest, block), dtype=np.dtype((np.int64, p - 2)))
        if chunk.size == 0 and p > 2:
            break
        bars = np.empty((chunk.shape[0], p + 1), dtype=np.int64)
        bars[:, 0] = -1
        bars[:, 1] = first
        bars[:, 2:p] = chunk
        bars[:, p] = n
        values = np.diff(bars, axis=1) - 1
        values = values[(values < p).all(axis=1)]
        coeffs = interpolate_coeffs(ctx, values)
        nonzero = coeffs != 0
        deg = p - 1 - np.argmax(nonzero[:, ::-1], axis=1)
        for d, cnt in zip(*np.unique(deg, return_counts=True)):
            tally[int(d)] = tally.get(int(d), 0) + int(cnt)
        if chunk.shape[0] < block:
            break
    return tally


def census_vector_count(p: int) -> int:
    """Vectors in {0..p-1}^p summing to p: compositions minus the p one-hot vectors of value p."""
    return comb(2 * p - 1, p - 1) - p


def min_degree_census(ctx: FieldCtx, threads: int = 1) -> MinDegreeReport:
    p = ctx.p
    if p > CENSUS_CAP:
        raise InfeasiblePrime(f"p={p} is above the census cap {CENSUS_CAP}")
    # stars and bars: p-1 bars among 2p-1 slots, split by the first bar position
    tasks = [(p, first) for first in range(p + 1)]
    census: dict[int, int] = {}
    if threads <= 1:
        parts = map(_census_chunk, tasks)
        parts = list(parts)
    else:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(_census_chunk, tasks))
    for part in parts:
        for d, n in part.items():
            census[d] = census.get(d, 0) + n
    nonconstant = [d for d in census if d > 0]
    return MinDegreeReport(p, dict(sorted(census.items())), min(nonconstant) if nonconstant else None)
