"""Quadratic-character sums over translates, and the inequalities they satisfy.

Every bound involving square roots is compared in squared integer form, so
a :class:`BoundCheck` never touches floating point.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping

import numpy as np

from .fpcore import FieldCtx, check_elem


class EqualPoints(ValueError):
    pass


@dataclass(frozen=True)
class CharSumVector:
    sums: tuple[int, ...]

    def __getitem__(self, gamma: int) -> int:
        return self.sums[gamma]


@dataclass(frozen=True)
class BoundCheck:
    """The claim ``L <= R`` for exact integers, plus any attached side checks."""

    name: str
    lhs: int
    L: int
    R: int
    secondary: tuple["BoundCheck", ...] = ()
    identities: Mapping[str, bool] = field(default_factory=dict)

    @property
    def rhs_squared_form(self) -> tuple[int, int]:
        return (self.L, self.R)

    @property
    def holds(self) -> bool:
        return self.L <= self.R

    @property
    def slack(self) -> int:
        return self.R - self.L

    @property
    def ok(self) -> bool:
        return self.holds and all(s.ok for s in self.secondary) and all(self.identities.values())

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "lhs": self.lhs,
            "L": self.L,
            "R": self.R,
            "holds": self.holds,
            "slack": self.slack,
            "secondary": [s.to_dict() for s in self.secondary],
            "identities": dict(self.identities),
        }


@dataclass(frozen=True)
class PaleyCells:
    counts: Mapping[tuple[int, int], int]
    context: tuple[int, int]
    predicted: Mapping[tuple[int, int], int]

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    @property
    def signed(self) -> int:
        c = self.counts
        return c[1, 1] - c[1, -1] - c[-1, 1] + c[-1, -1]

    @property
    def matches_multiset(self) -> bool:
        return sorted(self.counts.values()) == sorted(self.predicted.values())

    @property
    def matches_labelled(self) -> bool:
        return dict(self.counts) == dict(self.predicted)

    @property
    def matches_transposed(self) -> bool:
        """Agreement after swapping the two mixed-sign cells."""
        swap = {(1, -1): (-1, 1), (-1, 1): (1, -1)}
        return all(self.counts[swap.get(k, k)] == v for k, v in self.predicted.items())


SIGN_PAIRS = ((1, 1), (1, -1), (-1, 1), (-1, -1))


def weights(ctx: FieldCtx, M) -> np.ndarray:
    """Multiplicity vector of a multiset.

    Accepts an iterable of residues (repeats count), a ``{value: count}``
    mapping, or anything exposing ``parts`` as ``(value, count)`` pairs.
    """
    w = np.zeros(ctx.p, dtype=np.int64)
    if hasattr(M, "parts"):
        items: Iterable[tuple[int, int]] = M.parts
    elif isinstance(M, Mapping):
        items = M.items()
    else:
        items = Counter(int(a) for a in M).items()
    for a, k in items:
        w[check_elem(ctx, a)] += int(k)
    return w


@lru_cache(maxsize=64)
def _char_matrix(p: int, table_bytes: bytes) -> np.ndarray:
    table = np.frombuffer(table_bytes, dtype=np.int64)
    idx = (np.arange(p)[:, None] - np.arange(p)[None, :]) % p
    m = table[idx]
    m.setflags(write=False)
    return m


def char_matrix(ctx: FieldCtx) -> np.ndarray:
    """``m[alpha, gamma] = legendre(alpha - gamma)``."""
    return _char_matrix(ctx.p, ctx.legendre_table.tobytes())


def sums_array(ctx: FieldCtx, M) -> np.ndarray:
    w = M if isinstance(M, np.ndarray) else weights(ctx, M)
    return w @ char_matrix(ctx)


def char_sum_vector(ctx: FieldCtx, M) -> CharSumVector:
    return CharSumVector(tuple(int(s) for s in sums_array(ctx, M)))


def pair_product_sum(ctx: FieldCtx, a1: int, a2: int) -> int:
    a1, a2 = check_elem(ctx, a1), check_elem(ctx, a2)
    if a1 == a2:
        raise EqualPoints(f"points coincide: {a1}")
    leg = ctx.legendre_table
    p = ctx.p
    return sum(int(leg[(a1 - g) % p]) * int(leg[(a2 - g) % p]) for g in range(p))


def table1_prediction(p: int, sign: int) -> dict[tuple[int, int], int]:
    """Cell sizes exactly as printed in the intersection table, by label."""
    if p % 4 == 1:
        big, small = (p - 1) // 4, (p - 5) // 4
        if sign == 1:
            return {(1, 1): small, (1, -1): big, (-1, 1): big, (-1, -1): big}
        return {(1, 1): big, (1, -1): big, (-1, 1): big, (-1, -1): small}
    small, big = (p - 3) // 4, (p + 1) // 4
    if sign == 1:
        return {(1, 1): small, (1, -1): big, (-1, 1): small, (-1, -1): small}
    return {(1, 1): small, (1, -1): small, (-1, 1): big, (-1, -1): small}


def paley_cell_counts(ctx: FieldCtx, a1: int, a2: int) -> PaleyCells:
    a1, a2 = check_elem(ctx, a1), check_elem(ctx, a2)
    if a1 == a2:
        raise EqualPoints(f"points coincide: {a1}")
    p = ctx.p
    leg = ctx.legendre_table
    counts = dict.fromkeys(SIGN_PAIRS, 0)
    for g in range(p):
        e = (int(leg[(a1 - g) % p]), int(leg[(a2 - g) % p]))
        if 0 not in e:
            counts[e] += 1
    sign = int(leg[(a1 - a2) % p])
    return PaleyCells(counts, (p % 4, sign), table1_prediction(p, sign))


def abs_char_sum_total(ctx: FieldCtx, M) -> int:
    return int(np.abs(sums_array(ctx, M)).sum())


def _as_set(ctx: FieldCtx, A) -> np.ndarray:
    w = weights(ctx, A)
    if w.max(initial=0) > 1:
        raise ValueError("expected a plain set, got repeated elements")
    return w


def check_theorem31(ctx: FieldCtx, A) -> BoundCheck:
    """Sum over gamma of |S_A(gamma)| against sqrt(p |A| (p - |A|))."""
    w = _as_set(ctx, A)
    p, n = ctx.p, int(w.sum())
    s = sums_array(ctx, w)
    total = int(np.abs(s).sum())
    square_sum = int((s * s).sum())
    weak = BoundCheck("theorem31_weak", total, 4 * total * total, p**3)
    return BoundCheck(
        "theorem31",
        total,
        total * total,
        p * n * (p - n),
        secondary=(weak,),
        identities={"square_sum_exact": square_sum == p * n - n * n},
    )


def check_prop_subset(ctx: FieldCtx, A, Gamma) -> BoundCheck:
    """|sum over Gamma of S_A| against half of sqrt(p |A| (p - |A|))."""
    w = _as_set(ctx, A)
    g = _as_set(ctx, Gamma)
    p, n = ctx.p, int(w.sum())
    s = sums_array(ctx, w)
    inside = int(s @ g)
    outside = int(s @ (1 - g))
    lhs = abs(inside)
    weak = BoundCheck("prop_subset_weak", lhs, 16 * lhs * lhs, p**3)
    return BoundCheck(
        "prop_subset",
        lhs,
        4 * lhs * lhs,
        p * n * (p - n),
        secondary=(weak,),
        identities={"complement": abs(inside) == abs(outside), "full_sum_zero": inside + outside == 0},
    )


def check_prop_multiset(ctx: FieldCtx, B) -> BoundCheck:
    """Sum over gamma of |S_B(gamma)| against p * sqrt(sum of k_j^2)."""
    w = weights(ctx, B)
    total = abs_char_sum_total(ctx, w)
    return BoundCheck("prop_multiset", total, total * total, ctx.p**2 * int((w * w).sum()))


# Batched forms used by the randomized and exhaustive suites. Rows of
# ``masks`` are 0/1 indicator vectors of plain sets.


def theorem31_batch(ctx: FieldCtx, masks: np.ndarray) -> dict[str, np.ndarray]:
    p = ctx.p
    masks = np.asarray(masks, dtype=np.int64)
    # float64 matmul is exact here: every entry is bounded by p in absolute value
    s = np.rint(masks.astype(np.float64) @ char_matrix(ctx).astype(np.float64)).astype(np.int64)
    n = masks.sum(axis=1)
    total = np.abs(s).sum(axis=1)
    return {
        "size": n,
        "lhs": total,
        "L": total * total,
        "R": p * n * (p - n),
        "square_sum": (s * s).sum(axis=1),
        "square_sum_expected": p * n - n * n,
    }


def prop_subset_batch(ctx: FieldCtx, masks: np.ndarray, gammas: np.ndarray) -> dict[str, np.ndarray]:
    p = ctx.p
    masks = np.asarray(masks, dtype=np.int64)
    gammas = np.asarray(gammas, dtype=np.int64)
    s = np.rint(masks.astype(np.float64) @ char_matrix(ctx).astype(np.float64)).astype(np.int64)
    n = masks.sum(axis=1)
    inside = (s * gammas).sum(axis=1)
    outside = (s * (1 - gammas)).sum(axis=1)
    lhs = np.abs(inside)
    return {
        "lhs": lhs,
        "L": 4 * lhs * lhs,
        "R": p * n * (p - n),
        "complement": np.abs(inside) == np.abs(outside),
    }
