"""Slow, obviously-correct reference computations.

Nothing here imports the package; each function recomputes its answer from
the definitions with plain Python integers.
"""

from __future__ import annotations

import itertools


def legendre_euler(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def squares(p: int) -> set[int]:
    return {x * x % p for x in range(1, p)}


def evaluate(coeffs, x: int, p: int) -> int:
    return sum(c * pow(x, i, p) for i, c in enumerate(coeffs)) % p


def solve_vandermonde(values, p: int) -> list[int]:
    """Gaussian elimination on the p x p Vandermonde system over F_p."""
    rows = [[pow(x, j, p) for j in range(p)] + [values[x] % p] for x in range(p)]
    for col in range(p):
        piv = next(r for r in range(col, p) if rows[r][col] % p)
        rows[col], rows[piv] = rows[piv], rows[col]
        iv = pow(rows[col][col], p - 2, p)
        rows[col] = [v * iv % p for v in rows[col]]
        for r in range(p):
            if r != col and rows[r][col]:
                f = rows[r][col]
                rows[r] = [(a - f * b) % p for a, b in zip(rows[r], rows[col])]
    coeffs = [rows[j][p] for j in range(p)]
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def char_sums(multiset, p: int) -> list[int]:
    return [sum(legendre_euler(a - g, p) for a in multiset) for g in range(p)]


def poly_from_roots(roots, c: int, p: int) -> list[int]:
    coeffs = [c % p]
    for r in roots:
        nxt = [0] * (len(coeffs) + 1)
        for i, a in enumerate(coeffs):
            nxt[i + 1] = (nxt[i + 1] + a) % p
            nxt[i] = (nxt[i] - r * a) % p
        coeffs = nxt
    return coeffs


def brute_force_solutions(p: int) -> list[tuple[int, tuple[int, ...]]]:
    """Every (c, root multiset) whose product polynomial has range sum p.

    No symmetry reduction and no incremental evaluation.
    """
    k = (p - 1) // 2
    out = []
    for roots in itertools.combinations_with_replacement(range(p), k):
        for c in range(1, p):
            coeffs = poly_from_roots(roots, c, p)
            if sum(evaluate(coeffs, x, p) for x in range(p)) == p:
                out.append((c, roots))
    return sorted(out)


def slopes(points, p: int) -> set:
    out = set()
    pts = list(points)
    for (x1, y1), (x2, y2) in itertools.combinations(pts, 2):
        if x1 == x2:
            out.add("inf")
        else:
            out.add((y2 - y1) * pow(x2 - x1, p - 2, p) % p)
    return out


def affine_orbit_values(values, p: int) -> list[tuple[int, ...]]:
    return [tuple(values[(a * x + b) % p] for x in range(p)) for a in range(1, p) for b in range(p)]

