"""Closed-form lower bounds for cube boundaries and path counts.

``e`` bounds the edge boundary of a family of a given size, ``b`` its vertex
boundary and ``s`` its surface.  ``b`` and ``s`` are piecewise linear between
the sizes of Hamming balls and are kept exact as :class:`Fraction`; ``e`` is
transcendental and returned as a float.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .cube import check_dim


@dataclass(frozen=True, slots=True)
class LevelDecomposition:
    """x = sum(C(n, i) for i <= k) + alpha * C(n, k+1), with 0 <= alpha < 1."""

    n: int
    k: int
    alpha: Fraction

    @property
    def value(self) -> Fraction:
        base = sum(math.comb(self.n, i) for i in range(self.k + 1))
        return base + self.alpha * math.comb(self.n, self.k + 1)


def _check_x(n: int, x: int, lo: int) -> None:
    check_dim(n, cap=64)
    if not isinstance(x, int) or not lo <= x <= (1 << n):
        raise ValueError(f"x must be an integer in [{lo}, {1 << n}], got {x!r}")


def ball_size(n: int, k: int) -> int:
    """Number of vertices of weight at most k."""
    return sum(math.comb(n, i) for i in range(k + 1))


def level_decompose(n: int, x: int) -> LevelDecomposition:
    _check_x(n, x, 1)
    k, total = 0, 1
    while k < n and total + math.comb(n, k + 1) <= x:
        k += 1
        total += math.comb(n, k)
    rest = x - total
    alpha = Fraction(rest, math.comb(n, k + 1)) if rest else Fraction(0)
    return LevelDecomposition(n, k, alpha)


def func_e(n: int, x: int) -> float:
    """x(n - log2 x) below the midpoint, mirrored above it; 0 at both ends."""
    _check_x(n, x, 0)
    y = x if 2 * x <= (1 << n) else (1 << n) - x
    if y == 0:
        return 0.0
    return y * (n - math.log2(y))


def func_b(n: int, x: int) -> Fraction:
    d = level_decompose(n, x)
    k, a = d.k, d.alpha
    return (1 - a) * math.comb(n, k + 1) + a * math.comb(n, k + 2)


def func_s(n: int, x: int) -> Fraction:
    d = level_decompose(n, x)
    k, a = d.k, d.alpha
    return (1 - a) * math.comb(n, k) + a * math.comb(n, k + 1)


def fractional_binomial(x: float, r: int) -> float:
    """x(x-1)...(x-r+1)/r! for real x."""
    if r < 0:
        raise ValueError("r must be non-negative")
    prod = 1.0
    for j in range(r):
        prod *= x - j
    return prod / math.factorial(r)


def solve_kk_threshold(m: int, r: int, tol: float = 1e-12) -> float:
    """The unique x > r-1 with C(x, r) = m."""
    if r < 1 or m < 1:
        raise ValueError(f"need r >= 1 and m >= 1, got m={m}, r={r}")
    lo = float(r - 1)
    hi = float(r)
    while fractional_binomial(hi, r) < m:
        hi = lo + 2 * (hi - lo)
        if hi > 1e300:
            raise ArithmeticError("could not bracket the threshold")
    while hi - lo > tol * max(1.0, hi):
        mid = 0.5 * (lo + hi)
        if fractional_binomial(mid, r) < m:
            lo = mid
        else:
            hi = mid
    x = 0.5 * (lo + hi)
    near = round(x)
    if near > r - 1 and abs(near - x) < 1e-9 and math.comb(near, r) == m:
        return float(near)
    return x


def bl_edge_bound(n: int, a: int, b: int) -> float:
    """Lower bound on edge-disjoint paths between disjoint sets of sizes a and b."""
    _check_pair(n, a, b)
    return min(func_e(n, a), func_e(n, b), float(1 << (n - 1)))


def bl_vertex_bound(n: int, a: int, b: int) -> Fraction:
    """Lower bound on interior-disjoint paths between disjoint sets of sizes a and b."""
    _check_pair(n, a, b)
    return min(func_b(n, a), func_b(n, b))


def _check_pair(n: int, a: int, b: int) -> None:
    check_dim(n, cap=64)
    if a < 1 or b < 1 or a + b > (1 << n):
        raise ValueError(f"need a, b >= 1 and a + b <= 2**n, got a={a}, b={b}")
