"""Verification suites shared by the command line and the acceptance tests.

Each suite appends :class:`~rangesum.report.Check` records to a report.
Randomized suites draw from generators seeded by ``(seed, p, tag, chunk)``
with a fixed chunk size, so results do not depend on the worker count.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from typing import Callable

import numpy as np

from . import charsum, directions, search, structure
from .fpcore import FieldCtx, make_field
from .poly import FpPoly, canonical_form
from .report import Report

CHUNK = 2000
EXHAUSTIVE_MAX_P = 17


def _map(fn: Callable, tasks: list, threads: int) -> list:
    if threads <= 1 or len(tasks) < 2:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, tasks))


def _rng(seed: int, p: int, tag: int, chunk: int) -> np.random.Generator:
    return np.random.default_rng([seed, p, tag, chunk])


def _chunks(total: int) -> list[tuple[int, int]]:
    return [(i, min(CHUNK, total - i * CHUNK)) for i in range((total + CHUNK - 1) // CHUNK)]


# -- pair identity and the intersection table --------------------------------


def pair_identity(ctx: FieldCtx, report: Report) -> bool:
    L = charsum.char_matrix(ctx)
    gram = L @ L.T
    off = gram[~np.eye(ctx.p, dtype=bool)]
    values = sorted(int(v) for v in np.unique(off))
    passed = values == [-1]
    report.add(
        "pair_identity",
        passed,
        p=ctx.p,
        pairs=int(off.size),
        distinct_values=values,
        violations=int(np.count_nonzero(off != -1)),
    )
    return passed


def paley_cell_arrays(ctx: FieldCtx) -> dict[tuple[int, int], np.ndarray]:
    """All-pairs cell counts: entry [a1, a2] is |A_{e1,e2}| for that pair."""
    L = charsum.char_matrix(ctx)
    Q = (L == 1).astype(np.int64)
    N = (L == -1).astype(np.int64)
    sides = {1: Q, -1: N}
    return {(e1, e2): sides[e1] @ sides[e2].T for e1, e2 in charsum.SIGN_PAIRS}


def table1(ctx: FieldCtx, report: Report) -> bool:
    p = ctx.p
    cells = paley_cell_arrays(ctx)
    leg = ctx.legendre_table
    off = ~np.eye(p, dtype=bool)
    sign = leg[(np.arange(p)[:, None] - np.arange(p)[None, :]) % p]
    total = sum(cells.values())
    signed = cells[1, 1] - cells[1, -1] - cells[-1, 1] + cells[-1, -1]
    stacked = np.sort(np.stack([cells[k] for k in charsum.SIGN_PAIRS], axis=-1), axis=-1)
    multiset_ok = True
    labelled = transposed = 0
    for s in (1, -1):
        pred = charsum.table1_prediction(p, s)
        mask = off & (sign == s)
        multiset_ok &= bool((stacked[mask] == np.array(sorted(pred.values()))).all())
        lab = np.ones(mask.sum(), dtype=bool)
        tra = np.ones(mask.sum(), dtype=bool)
        for (e1, e2), v in pred.items():
            lab &= cells[e1, e2][mask] == v
            tra &= cells[e2, e1][mask] == v
        labelled += int(lab.sum())
        transposed += int(tra.sum())
    pairs = int(off.sum())
    sum_ok = bool((total[off] == p - 2).all())
    signed_ok = bool((signed[off] == -1).all())
    passed = sum_ok and signed_ok and multiset_ok
    report.add(
        "table1",
        passed,
        p=p,
        pairs=pairs,
        cell_sum_ok=sum_ok,
        signed_combination_ok=signed_ok,
        multiset_ok=multiset_ok,
    )
    report.note(
        "table1_orientation",
        p=p,
        pairs=pairs,
        labelled_matches=labelled,
        transposed_matches=transposed,
    )
    return passed


# -- bounds ------------------------------------------------------------------


def _theorem31_task(args) -> dict:
    p, kind, seed, chunk, n = args
    ctx = make_field(p)
    if kind == "exhaustive":
        ints = np.arange(chunk * CHUNK, chunk * CHUNK + n, dtype=np.int64)
        masks = (ints[:, None] >> np.arange(p)) & 1
    else:
        masks = _rng(seed, p, 31, chunk).integers(0, 2, size=(n, p))
    r = charsum.theorem31_batch(ctx, masks)
    return {
        "count": n,
        "violations": int(np.count_nonzero(r["L"] > r["R"])),
        "weak_violations": int(np.count_nonzero(4 * r["L"] > p**3)),
        "identity_failures": int(np.count_nonzero(r["square_sum"] != r["square_sum_expected"])),
        "equalities": int(np.count_nonzero(r["L"] == r["R"])),
        "min_slack": int((r["R"] - r["L"]).min()),
    }


def _prop_subset_task(args) -> dict:
    p, seed, chunk, n = args
    ctx = make_field(p)
    rng = _rng(seed, p, 32, chunk)
    masks = rng.integers(0, 2, size=(n, p))
    gammas = rng.integers(0, 2, size=(n, p))
    r = charsum.prop_subset_batch(ctx, masks, gammas)
    return {
        "count": n,
        "violations": int(np.count_nonzero(r["L"] > r["R"])),
        "weak_violations": int(np.count_nonzero(16 * r["lhs"] ** 2 > p**3)),
        "complement_failures": int(np.count_nonzero(~r["complement"])),
        "min_slack": int((r["R"] - r["L"]).min()),
    }


def _merge(parts: list[dict]) -> dict:
    out: dict = {}
    for part in parts:
        for k, v in part.items():
            if k == "min_slack":
                out[k] = min(out.get(k, v), v)
            else:
                out[k] = out.get(k, 0) + v
    return out


def theorem31(ctx: FieldCtx, report: Report, *, exhaustive: bool = False, trials: int = 10_000,
              seed: int = 0, threads: int = 1) -> bool:
    p = ctx.p
    if exhaustive:
        if p > EXHAUSTIVE_MAX_P:
            raise ValueError(f"exhaustive subsets are limited to p <= {EXHAUSTIVE_MAX_P}")
        kind, total = "exhaustive", 2**p
    else:
        kind, total = "random", trials
    tasks = [(p, kind, seed, c, n) for c, n in _chunks(total)]
    agg = _merge(_map(_theorem31_task, tasks, threads))
    passed = agg["violations"] == 0 and agg["weak_violations"] == 0 and agg["identity_failures"] == 0
    report.add("theorem31", passed, p=p, mode=kind, seed=seed, **agg)
    return passed


def prop_subset(ctx: FieldCtx, report: Report, *, trials: int = 10_000, seed: int = 0,
                threads: int = 1) -> bool:
    p = ctx.p
    tasks = [(p, seed, c, n) for c, n in _chunks(trials)]
    agg = _merge(_map(_prop_subset_task, tasks, threads))
    passed = agg["violations"] == 0 and agg["weak_violations"] == 0 and agg["complement_failures"] == 0
    report.add("prop_subset", passed, p=p, seed=seed, **agg)
    return passed


def prop_multiset_families(ctx: FieldCtx, report: Report) -> bool:
    ok = True
    for name, f in zip(("f1", "f2"), search.family_polys(ctx)):
        d = structure.decompose(ctx, f)
        chk = charsum.check_prop_multiset(ctx, d.B)
        ok &= chk.ok
        report.add(f"prop_multiset.{name}", chk.ok, p=ctx.p, poly=f.to_text(), L=chk.L, R=chk.R, slack=chk.slack)
    return ok


# -- structure ---------------------------------------------------------------


def residual_families(ctx: FieldCtx, report: Report) -> bool:
    ok = True
    for name, f in zip(("f1", "f2"), search.family_polys(ctx)):
        ok &= verify_poly(ctx, f, report, label=name)
    return ok


def verify_poly(ctx: FieldCtx, f: FpPoly, report: Report, label: str = "poly") -> bool:
    """Decompose ``f`` and check every structural claim that applies to it."""
    try:
        d = structure.decompose(ctx, f)
    except structure.NotCompletelyReducible as exc:
        report.add(f"{label}.complete_reducibility", False, p=ctx.p, poly=f.to_text(), error=str(exc))
        return False
    except structure.DecompositionError as exc:
        report.note(f"{label}.hypotheses_not_met", p=ctx.p, poly=f.to_text(),
                    error=type(exc).__name__, detail=str(exc))
        return True
    rr = structure.residual_report(ctx, d)
    extremal = structure.extremal_gamma_count(ctx, d.A.roots)
    distinct = len(d.A.distinct)
    report.add(f"{label}.complete_reducibility", True, p=ctx.p, poly=f.to_text())
    report.add(f"{label}.residual", rr.valid, p=ctx.p, c=d.c, count_c=rr.count_c,
               count_c_minus_p=rr.count_c_minus_p, congruent=rr.congruent,
               decomposition=structure.to_json(ctx, d, rr))
    report.add(f"{label}.extremal_gamma", extremal <= 1 or ctx.p <= 23, p=ctx.p, count=extremal)
    if extremal > 1:
        report.note(f"{label}.extremal_gamma_exceeds_one", p=ctx.p, count=extremal)
    report.add(f"{label}.excess_total", d.B.total == distinct, p=ctx.p, excess_total=d.B.total,
               distinct_roots=distinct)
    lc = structure.leading_coeff_class(ctx, d)
    if lc or ctx.p <= 23:
        report.add(f"{label}.leading_coeff_class", True, p=ctx.p, c=d.c, in_class=lc)
        if not lc:
            report.note(f"{label}.leading_coeff_outside_class", p=ctx.p, c=d.c)
    else:
        report.add(f"{label}.leading_coeff_class", False, p=ctx.p, c=d.c, in_class=lc)
    return rr.valid and (extremal <= 1 or ctx.p <= 23) and d.B.total == distinct and (lc or ctx.p <= 23)


def families(ctx: FieldCtx, report: Report) -> bool:
    checks = search.family_checks(ctx)
    passed = all(checks.values())
    report.add("families", passed, p=ctx.p, **checks)
    return passed


# -- search ------------------------------------------------------------------


def classify(ctx: FieldCtx, report: Report, *, threads: int = 1, checkpoint=None, resume: bool = False,
             allow_above_cap: bool = False, stop_after_units: int | None = None) -> search.ClassificationResult:
    res = search.classify_all(ctx, threads=threads, checkpoint_path=checkpoint, resume=resume,
                              allow_above_cap=allow_above_cap, stop_after_units=stop_after_units)
    report.runtime["classify_ms"] = res.elapsed_ms
    forms = {o.form.canonical_values for o in res.orbits}
    f1, f2 = (canonical_form(ctx, f).canonical_values for f in search.family_polys(ctx))
    report.add("classify.families_present", f1 in forms and f2 in forms and f1 != f2, p=ctx.p)
    report.add("classify.residual_valid", all(o.residual_valid for o in res.orbits), p=ctx.p)
    report.add("classify.nodes_visited", res.nodes_visited == search.leaf_count(ctx.p, res.normalized),
               p=ctx.p, nodes_visited=res.nodes_visited, expected=search.leaf_count(ctx.p, res.normalized))
    lc_ok = all(o.leading_class_ok for o in res.orbits)
    if ctx.p > 23:
        report.add("classify.leading_coeff_class", lc_ok, p=ctx.p)
    elif not lc_ok:
        report.note("classify.leading_coeff_outside_class", p=ctx.p)
    extremal = max(structure.extremal_gamma_count(ctx, roots) for o in res.orbits for _, roots in o.hits)
    if ctx.p > 23:
        report.add("classify.extremal_gamma", extremal <= 1, p=ctx.p, max_count=extremal)
    elif extremal > 1:
        report.note("classify.extremal_gamma_exceeds_one", p=ctx.p, max_count=extremal)
    extra = [o.to_dict() for o in res.orbits if o.form.canonical_values not in (f1, f2)]
    if extra:
        report.note("classify.extra_orbits", p=ctx.p, orbits=extra)
    report.add("classify.result", True, **res.to_dict(include_time=False))
    return res


def min_degree(ctx: FieldCtx, report: Report, *, threads: int = 1) -> bool:
    rep = search.min_degree_census(ctx, threads=threads)
    checks = {
        "min_degree_is_half": rep.min_nonconstant_degree == ctx.half,
        "only_constant_is_one": rep.census.get(0, 0) == 1,
        "total_matches": rep.total == search.census_vector_count(ctx.p),
    }
    passed = all(checks.values())
    report.add("min_degree", passed, **checks, **rep.to_dict())
    return passed


# -- directions ----------------------------------------------------------------


def directions_for(ctx: FieldCtx, S: directions.PointSet, report: Report) -> bool:
    ds = directions.direction_set(ctx, S)
    data = {"p": ctx.p, "size": len(S), "directions": ds.sorted(), "direction_count": len(ds)}
    if len(S) == ctx.p:
        verdict = directions.check_redei_megyesi(ctx, S)
        report.add("directions.redei_megyesi", verdict is not directions.Verdict.VIOLATION,
                   verdict=verdict.value, **data)
        return verdict is not directions.Verdict.VIOLATION
    report.add("directions.set", True, **data)
    return True


def extremal_graph(ctx: FieldCtx, report: Report) -> bool:
    f = FpPoly.monomial(ctx, (ctx.p + 1) // 2)
    n = len(directions.direction_set(ctx, directions.graph(ctx, f)))
    passed = 2 * n == ctx.p + 3
    report.add("directions.extremal_graph", passed, p=ctx.p, poly=f.to_text(), direction_count=n,
               expected=(ctx.p + 3) // 2)
    return passed


def _redei_task(args) -> dict:
    p, seed, chunk, n = args
    ctx = make_field(p)
    rng = _rng(seed, p, 81, chunk)
    tally = {v.value: 0 for v in directions.Verdict}
    for _ in range(n):
        S = directions.random_point_set(ctx, rng)
        tally[directions.classify_direction_count(p, directions.direction_count_fast(ctx, S)).value] += 1
    return tally


def redei_random(ctx: FieldCtx, report: Report, *, trials: int = 1000, seed: int = 0, threads: int = 1) -> bool:
    tasks = [(ctx.p, seed, c, n) for c, n in _chunks(trials)]
    agg = _merge(_map(_redei_task, tasks, threads))
    passed = agg["Violation"] == 0
    report.add("directions.redei_random", passed, p=ctx.p, seed=seed, trials=trials, verdicts=agg)
    return passed
