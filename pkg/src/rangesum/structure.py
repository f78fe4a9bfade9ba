"""Root/excess decomposition of a degree-(p-1)/2 polynomial with range sum p."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np

from .charsum import sums_array, weights
from .fpcore import FieldCtx
from .poly import FpPoly, RootMultiset, eval_array, roots_with_multiplicity


class DecompositionError(ValueError):
    pass


class WrongDegree(DecompositionError):
    pass


class WrongRangeSum(DecompositionError):
    pass


class NotCompletelyReducible(DecompositionError):
    pass


class EmptyMultiset(ValueError):
    pass


@dataclass(frozen=True)
class ExcessMultiset:
    """Homogeneous parts ``(b_j, k_j)`` sorted by ``b_j``."""

    parts: tuple[tuple[int, int], ...]

    def __post_init__(self):
        bs = [b for b, _ in self.parts]
        if len(set(bs)) != len(bs):
            raise ValueError("parts must have distinct values")
        if any(k < 1 for _, k in self.parts):
            raise ValueError("multiplicities must be positive")
        object.__setattr__(self, "parts", tuple(sorted((int(b), int(k)) for b, k in self.parts)))

    @classmethod
    def from_elements(cls, elements) -> "ExcessMultiset":
        return cls(tuple(Counter(elements).items()))

    @property
    def n(self) -> int:
        return len(self.parts)

    @property
    def total(self) -> int:
        return sum(k for _, k in self.parts)

    def elements(self) -> list[int]:
        return [b for b, k in self.parts for _ in range(k)]


@dataclass(frozen=True)
class StructureDecomposition:
    A: RootMultiset
    B: ExcessMultiset
    c: int
    f: FpPoly

    @property
    def p(self) -> int:
        return self.f.p


@dataclass(frozen=True)
class ResidualReport:
    residuals: tuple[int, ...]
    c: int
    count_c: int
    count_c_minus_p: int
    congruent: bool

    @property
    def p(self) -> int:
        return len(self.residuals)

    @property
    def valid(self) -> bool:
        p, c = self.p, self.c
        return (
            self.congruent
            and all(r in (c, c - p) for r in self.residuals)
            and self.count_c == p - c
            and self.count_c_minus_p == c
        )


def decompose(ctx: FieldCtx, f: FpPoly) -> StructureDecomposition:
    if f.degree != ctx.half:
        raise WrongDegree(f"degree {f.degree}, expected {ctx.half}")
    vals = eval_array(ctx, f)
    total = int(vals.sum())
    if total != ctx.p:
        raise WrongRangeSum(f"range sum {total}, expected {ctx.p}")
    A = roots_with_multiplicity(ctx, f)
    if not A.complete:
        raise NotCompletelyReducible(f"{f} does not split over F_{ctx.p}")
    B = ExcessMultiset(tuple((int(x), int(v) - 1) for x, v in enumerate(vals) if v > 1))
    return StructureDecomposition(A, B, f.leading, f)


def residual_report(ctx: FieldCtx, d: StructureDecomposition) -> ResidualReport:
    p, c = ctx.p, d.c
    r = sums_array(ctx, d.A.roots) - sums_array(ctx, d.B)
    residuals = tuple(int(x) for x in r)
    return ResidualReport(
        residuals=residuals,
        c=c,
        count_c=sum(1 for x in residuals if x == c),
        count_c_minus_p=sum(1 for x in residuals if x == c - p),
        congruent=all((x - c) % p == 0 for x in residuals),
    )


def extremal_gamma_count(ctx: FieldCtx, A) -> int:
    """Number of gamma with S_A(gamma) <= -(p-1)/4."""
    s = sums_array(ctx, weights(ctx, A))
    return int(np.count_nonzero(4 * s <= -(ctx.p - 1)))


def allowed_leading_coeffs(p: int) -> frozenset[int]:
    return frozenset({1, (p - 1) // 2, (p + 1) // 2, p - 1})


def leading_coeff_class(ctx: FieldCtx, d: StructureDecomposition) -> bool:
    return d.c in allowed_leading_coeffs(ctx.p)


def max_multiplicity_element(B: ExcessMultiset) -> tuple[int, int]:
    if not B.parts:
        raise EmptyMultiset("B is empty")
    # parts are sorted by value, so max() keeps the smallest b_j among ties
    return max(B.parts, key=lambda part: (part[1], -part[0]))


def to_json(ctx: FieldCtx, d: StructureDecomposition, report: ResidualReport | None = None) -> dict:
    report = report or residual_report(ctx, d)
    return {
        "p": ctx.p,
        "c": d.c,
        "roots": list(d.A.roots),
        "excess": [[b, k] for b, k in d.B.parts],
        "residual_counts": [report.count_c, report.count_c_minus_p],
        "valid": report.valid,
    }
