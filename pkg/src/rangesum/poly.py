"""Polynomials over F_p viewed as functions F_p -> {0..p-1}."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .fpcore import FieldCtx, check_elem


class SingularMap(ValueError):
    pass


@dataclass(frozen=True)
class FpPoly:
    """Coefficient form, constant term first. Trailing zeros are stripped."""

    p: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        cs = [int(c) % self.p for c in self.coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        if len(cs) > self.p:
            raise ValueError(f"polynomial has {len(cs)} coefficients, at most p={self.p} allowed")
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def from_coeffs(cls, ctx: FieldCtx, coeffs: Iterable[int]) -> "FpPoly":
        return cls(ctx.p, tuple(coeffs))

    @classmethod
    def monomial(cls, ctx: FieldCtx, degree: int, coeff: int = 1) -> "FpPoly":
        return cls(ctx.p, (0,) * degree + (coeff,))

    @property
    def degree(self) -> int | None:
        """``None`` for the zero polynomial."""
        return len(self.coeffs) - 1 if self.coeffs else None

    @property
    def leading(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, x: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc * x + c) % self.p
        return acc

    def __add__(self, other: "FpPoly") -> "FpPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return FpPoly(self.p, tuple(x + y for x, y in zip(a, b)))

    def __mul__(self, other: "FpPoly | int") -> "FpPoly":
        if isinstance(other, int):
            return FpPoly(self.p, tuple(c * other for c in self.coeffs))
        out = [0] * max(len(self.coeffs) + len(other.coeffs) - 1, 0)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] = (out[i + j] + a * b) % self.p
        return FpPoly(self.p, tuple(out))

    __rmul__ = __mul__

    def to_text(self) -> str:
        return ",".join(str(c) for c in self.coeffs) or "0"

    def __str__(self) -> str:
        terms = []
        for i, c in reversed(list(enumerate(self.coeffs))):
            if c == 0:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if not mono:
                terms.append(str(c))
            else:
                terms.append(mono if c == 1 else f"{c}{mono}")
        return " + ".join(terms) or "0"


@dataclass(frozen=True)
class RangeProfile:
    values: tuple[int, ...]

    @property
    def range_sum(self) -> int:
        return sum(self.values)


@dataclass(frozen=True)
class RootMultiset:
    roots: tuple[int, ...]
    complete: bool

    @property
    def distinct(self) -> tuple[int, ...]:
        return tuple(sorted(set(self.roots)))

    def counts(self) -> Counter:
        return Counter(self.roots)


@dataclass(frozen=True)
class CanonicalForm:
    canonical_values: tuple[int, ...]
    witness: tuple[int, int]


def parse_poly(ctx: FieldCtx, text: str) -> FpPoly:
    """Parse ``"c0,c1,...,cn"``; every coefficient must already be a residue."""
    parts = [s.strip() for s in text.split(",")]
    if not parts or any(s == "" for s in parts):
        raise ValueError(f"malformed polynomial {text!r}")
    coeffs = []
    for s in parts:
        try:
            v = int(s, 10)
        except ValueError:
            raise ValueError(f"malformed coefficient {s!r}") from None
        coeffs.append(check_elem(ctx, v))
    return FpPoly.from_coeffs(ctx, coeffs)


def _as_array(ctx: FieldCtx, values: RangeProfile | Sequence[int]) -> np.ndarray:
    vals = values.values if isinstance(values, RangeProfile) else values
    arr = np.asarray(vals, dtype=np.int64)
    if arr.shape != (ctx.p,):
        raise ValueError(f"expected {ctx.p} values, got shape {arr.shape}")
    if arr.min(initial=0) < 0 or arr.max(initial=0) >= ctx.p:
        raise ValueError("values must be residues")
    return arr


def eval_array(ctx: FieldCtx, f: FpPoly) -> np.ndarray:
    xs = np.arange(ctx.p, dtype=np.int64)
    acc = np.zeros(ctx.p, dtype=np.int64)
    for c in reversed(f.coeffs):
        acc = (acc * xs + c) % ctx.p
    return acc


def eval_all(ctx: FieldCtx, f: FpPoly) -> RangeProfile:
    return RangeProfile(tuple(int(v) for v in eval_array(ctx, f)))


def range_sum(profile: RangeProfile) -> int:
    return profile.range_sum


@lru_cache(maxsize=None)
def interpolation_matrix(p: int) -> np.ndarray:
    """Row j maps a value vector to the coefficient of x^j.

    Over the full field, 1 - (x-a)^(p-1) is the indicator of a, which gives
    coeff_0 = v(0) and coeff_j = -sum_a v(a) a^(p-1-j) for j >= 1 (0^0 = 1).
    """
    m = np.zeros((p, p), dtype=np.int64)
    m[0, 0] = 1
    for j in range(1, p):
        e = p - 1 - j
        for a in range(p):
            m[j, a] = (-pow(a, e, p)) % p
    m.setflags(write=False)
    return m


def interpolate_coeffs(ctx: FieldCtx, values: np.ndarray) -> np.ndarray:
    """Batch interpolation: rows of ``values`` -> rows of coefficients."""
    return (np.asarray(values, dtype=np.int64) @ interpolation_matrix(ctx.p).T) % ctx.p


def interpolate(ctx: FieldCtx, profile: RangeProfile | Sequence[int]) -> FpPoly:
    arr = _as_array(ctx, profile)
    coeffs = interpolate_coeffs(ctx, arr)
    return FpPoly.from_coeffs(ctx, (int(c) for c in coeffs))


def _divide_linear(p: int, coeffs: list[int], root: int) -> list[int]:
    """Quotient of f by (x - root), assuming f(root) = 0."""
    n = len(coeffs) - 1
    q = [0] * n
    carry = 0
    for i in range(n, 0, -1):
        carry = (carry * root + coeffs[i]) % p
        q[i - 1] = carry
    return q


def roots_with_multiplicity(ctx: FieldCtx, f: FpPoly) -> RootMultiset:
    if f.is_zero():
        raise ValueError("the zero polynomial has no finite root multiset")
    p = ctx.p
    coeffs = list(f.coeffs)
    roots: list[int] = []
    for a in range(p):
        while len(coeffs) > 1 and FpPoly(p, tuple(coeffs))(a) == 0:
            coeffs = _divide_linear(p, coeffs, a)
            roots.append(a)
    return RootMultiset(tuple(roots), complete=len(coeffs) == 1)


def _substitute(ctx: FieldCtx, f: FpPoly, a: int, b: int) -> FpPoly:
    lin = FpPoly(ctx.p, (b, a))
    g = FpPoly(ctx.p, ())
    for c in reversed(f.coeffs):
        g = g * lin + FpPoly(ctx.p, (c,))
    return g


def apply_affine(ctx: FieldCtx, f: FpPoly, a: int, b: int) -> FpPoly:
    """Return g with g(x) = f(a*x + b)."""
    a %= ctx.p
    b %= ctx.p
    if a == 0:
        raise SingularMap("a must be nonzero")
    g = _substitute(ctx, f, a, b)
    vals = eval_array(ctx, f)
    permuted = vals[(a * np.arange(ctx.p) + b) % ctx.p]
    if g != interpolate(ctx, permuted):
        raise AssertionError("affine substitution disagrees with permuted interpolation")
    return g


@lru_cache(maxsize=64)
def _affine_index(p: int) -> np.ndarray:
    xs = np.arange(p, dtype=np.int64)
    a = np.arange(1, p, dtype=np.int64)[:, None, None]
    b = np.arange(p, dtype=np.int64)[None, :, None]
    idx = ((a * xs + b) % p).reshape((p - 1) * p, p)
    idx.setflags(write=False)
    return idx


def canonical_values(ctx: FieldCtx, values: RangeProfile | Sequence[int]) -> CanonicalForm:
    arr = _as_array(ctx, values)
    orbit = arr[_affine_index(ctx.p)]
    # lexsort is stable, so among equal rows the smallest (a, b) comes first
    order = np.lexsort(orbit.T[::-1])
    best = int(order[0])
    a, b = divmod(best, ctx.p)
    return CanonicalForm(tuple(int(v) for v in orbit[best]), (a + 1, b))


def canonical_form(ctx: FieldCtx, f: FpPoly) -> CanonicalForm:
    return canonical_values(ctx, eval_array(ctx, f))


def affinely_equivalent(ctx: FieldCtx, f: FpPoly, g: FpPoly) -> bool:
    return canonical_form(ctx, f).canonical_values == canonical_form(ctx, g).canonical_values


def from_roots(ctx: FieldCtx, roots: Iterable[int], c: int = 1) -> FpPoly:
    f = FpPoly(ctx.p, (c,))
    for r in roots:
        f = f * FpPoly(ctx.p, (-r, 1))
    return f

