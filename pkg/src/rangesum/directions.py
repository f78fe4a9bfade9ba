"""Directions determined by point sets of the affine plane AG(2, p)."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

import numpy as np

from .fpcore import FieldCtx, check_elem, inv
from .poly import FpPoly, eval_array
from .search import InfeasiblePrime, classify_all, family_polys

INF = "inf"
EXTREMAL_CAP = 31


class TooFewPoints(ValueError):
    pass


class WrongSize(ValueError):
    pass


class Verdict(enum.Enum):
    LINE = "Line"
    AT_LEAST_BOUND = "AtLeastBound"
    VIOLATION = "Violation"


@dataclass(frozen=True)
class PointSet:
    points: frozenset[tuple[int, int]]

    @classmethod
    def of(cls, ctx: FieldCtx, points: Iterable[tuple[int, int]]) -> "PointSet":
        pts = [(check_elem(ctx, x), check_elem(ctx, y)) for x, y in points]
        if len(set(pts)) != len(pts):
            raise ValueError("points must be distinct")
        return cls(frozenset(pts))

    def __len__(self) -> int:
        return len(self.points)


@dataclass(frozen=True)
class DirectionSet:
    """Slopes in ``{0..p-1}``; vertical direction is the string ``"inf"``."""

    slopes: frozenset

    def __len__(self) -> int:
        return len(self.slopes)

    def sorted(self) -> list:
        finite = sorted(s for s in self.slopes if s != INF)
        return finite + ([INF] if INF in self.slopes else [])


def graph(ctx: FieldCtx, f: FpPoly) -> PointSet:
    return PointSet(frozenset((x, int(y)) for x, y in enumerate(eval_array(ctx, f))))


def parse_points(ctx: FieldCtx, text: str) -> PointSet:
    pts = []
    for n, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            x, y = (int(t) for t in line.split(","))
        except ValueError:
            raise ValueError(f"line {n}: expected 'x,y', got {line!r}") from None
        pts.append((x, y))
    return PointSet.of(ctx, pts)


def read_points(ctx: FieldCtx, path: str | Path) -> PointSet:
    return parse_points(ctx, Path(path).read_text())


def direction_set(ctx: FieldCtx, S: PointSet) -> DirectionSet:
    if len(S) < 2:
        raise TooFewPoints("need at least two points")
    p = ctx.p
    pts = sorted(S.points)
    inverses = [0] + [inv(ctx, d) for d in range(1, p)]
    slopes = set()
    for i, (x1, y1) in enumerate(pts):
        for x2, y2 in pts[i + 1 :]:
            dx = (x2 - x1) % p
            slopes.add(INF if dx == 0 else (y2 - y1) * inverses[dx] % p)
    return DirectionSet(frozenset(slopes))


def direction_count_fast(ctx: FieldCtx, S: PointSet) -> int:
    """Vectorized count used by the randomized suites."""
    p = ctx.p
    pts = np.array(sorted(S.points), dtype=np.int64)
    i, j = np.triu_indices(len(pts), k=1)
    dx = (pts[j, 0] - pts[i, 0]) % p
    dy = (pts[j, 1] - pts[i, 1]) % p
    inverses = np.array([0] + [inv(ctx, d) for d in range(1, p)], dtype=np.int64)
    slope = np.where(dx == 0, p, dy * inverses[dx] % p)
    return int(np.unique(slope).size)


def is_line(ctx: FieldCtx, S: PointSet) -> bool:
    return len(S) >= 2 and len(direction_set(ctx, S)) == 1


def check_redei_megyesi(ctx: FieldCtx, S: PointSet) -> Verdict:
    if len(S) != ctx.p:
        raise WrongSize(f"expected {ctx.p} points, got {len(S)}")
    n = len(direction_set(ctx, S))
    return classify_direction_count(ctx.p, n)


def classify_direction_count(p: int, n: int) -> Verdict:
    if n == 1:
        return Verdict.LINE
    if 2 * n >= p + 3:
        return Verdict.AT_LEAST_BOUND
    return Verdict.VIOLATION


def random_point_set(ctx: FieldCtx, rng: np.random.Generator, size: int | None = None) -> PointSet:
    p = ctx.p
    size = p if size is None else size
    cells = rng.choice(p * p, size=size, replace=False)
    return PointSet(frozenset((int(c) // p, int(c) % p) for c in cells))


def apply_plane_affine(ctx: FieldCtx, S: PointSet, matrix, shift) -> PointSet:
    (a, b), (c, d) = matrix
    if (a * d - b * c) % ctx.p == 0:
        raise ValueError("singular linear part")
    p = ctx.p
    return PointSet(
        frozenset(((a * x + b * y + shift[0]) % p, (c * x + d * y + shift[1]) % p) for x, y in S.points)
    )


def extremal_graph_search(ctx: FieldCtx, classify: bool = False) -> list[FpPoly]:
    """Candidate graphs that determine exactly (p+3)/2 directions.

    Candidates are x^((p+1)/2), the two known range-sum families and, with
    ``classify``, every classified orbit representative.
    """
    p = ctx.p
    if p > EXTREMAL_CAP:
        raise InfeasiblePrime(f"p={p} is above the directions cap {EXTREMAL_CAP}")
    candidates = [FpPoly.monomial(ctx, (p + 1) // 2), *family_polys(ctx)]
    if classify:
        candidates += [o.representative for o in classify_all(ctx, allow_above_cap=True).orbits]
    target = (p + 3) // 2
    found = []
    for f in candidates:
        if f not in found and len(direction_set(ctx, graph(ctx, f))) == target:
            found.append(f)
    return found
