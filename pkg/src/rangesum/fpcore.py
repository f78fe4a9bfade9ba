"""Prime-field context and quadratic-character tables."""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

DEFAULT_CAP = 10_000


class FieldError(ValueError):
    pass


class NotPrime(FieldError):
    pass


class UnsupportedPrime(FieldError):
    pass


class ZeroInverse(ZeroDivisionError):
    pass


def prime_cap() -> int:
    """Largest admissible prime; ``RANGESUM_CAP`` overrides the default."""
    raw = os.environ.get("RANGESUM_CAP")
    if raw is None:
        return DEFAULT_CAP
    try:
        return int(raw)
    except ValueError:
        raise FieldError(f"RANGESUM_CAP must be an integer, got {raw!r}") from None


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def primes_between(lo: int, hi: int) -> list[int]:
    """Odd primes in the closed interval [lo, hi]."""
    return [n for n in range(max(lo, 3), hi + 1) if is_prime(n)]


def _euler_table(p: int) -> np.ndarray:
    half = (p - 1) // 2
    table = np.zeros(p, dtype=np.int64)
    for a in range(1, p):
        table[a] = 1 if pow(a, half, p) == 1 else -1
    return table


def _squares_table(p: int) -> np.ndarray:
    table = np.full(p, -1, dtype=np.int64)
    table[0] = 0
    for x in range(1, p):
        table[x * x % p] = 1
    return table


@dataclass(frozen=True, eq=False)
class FieldCtx:
    """An odd prime with its Legendre table.

    ``legendre_table`` is read-only; ``qr_set`` and ``nqr_set`` partition
    the nonzero residues.
    """

    p: int
    legendre_table: np.ndarray = field(repr=False)
    qr_set: frozenset[int] = field(repr=False)
    nqr_set: frozenset[int] = field(repr=False)

    @property
    def half(self) -> int:
        return (self.p - 1) // 2

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FieldCtx) and other.p == self.p

    def __hash__(self) -> int:
        return hash(("FieldCtx", self.p))

    def __reduce__(self):
        return (make_field, (self.p,))


def make_field(p: int, cap: int | None = None) -> FieldCtx:
    if isinstance(p, bool) or not isinstance(p, (int, np.integer)):
        raise FieldError(f"prime must be an integer, got {p!r}")
    p = int(p)
    cap = prime_cap() if cap is None else cap
    if p == 2:
        raise UnsupportedPrime("p = 2 is not supported")
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if p > cap:
        raise UnsupportedPrime(f"{p} exceeds the prime cap {cap}")
    table = _euler_table(p)
    if not np.array_equal(table, _squares_table(p)):
        raise AssertionError(f"Legendre table self-check failed for p={p}")
    table.setflags(write=False)
    qr = frozenset(int(a) for a in np.flatnonzero(table == 1))
    nqr = frozenset(int(a) for a in np.flatnonzero(table == -1))
    return FieldCtx(p, table, qr, nqr)


def legendre(ctx: FieldCtx, a: int) -> int:
    return int(ctx.legendre_table[a % ctx.p])


def inv(ctx: FieldCtx, a: int) -> int:
    a %= ctx.p
    if a == 0:
        raise ZeroInverse("0 has no inverse")
    return pow(a, ctx.p - 2, ctx.p)


def check_elem(ctx: FieldCtx, a: int) -> int:
    """Validate that ``a`` is a residue in ``{0..p-1}``."""
    a = int(a)
    if not 0 <= a < ctx.p:
        raise ValueError(f"{a} is not a residue mod {ctx.p}")
    return a
