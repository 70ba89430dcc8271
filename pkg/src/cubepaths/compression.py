"""The C_i / D_i compressions and the descent to a down-set.

``C_i`` drops every top vertex x∪i whose bottom x is missing; ``D_i`` fills
in every missing bottom under a present top.  Neither alone always shrinks
the directed boundary, but for every S and i one of them does not grow it,
which is what :func:`compress_to_down_set` relies on.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

from .boundary import edge_boundary_size_bits, vertex_boundary_bits
from .cube import CubeSet, DimensionError, avoid_mask, check_coord, full_bits

Mode = Literal["edge", "vertex"]


class PreconditionError(ValueError):
    """Input sets violate a precondition; ``witness`` names an offending vertex mask."""

    def __init__(self, message: str, witness: int | None = None):
        super().__init__(message)
        self.witness = witness


@dataclass(frozen=True, slots=True)
class CompressionStep:
    i: int
    choice: Literal["C", "D"]
    boundary_before: int
    boundary_after: int
    mode: Mode

    def __post_init__(self) -> None:
        if self.boundary_after > self.boundary_before:
            raise ValueError("compression step increased the boundary")

    def to_json(self) -> dict:
        return {
            "i": self.i,
            "choice": self.choice,
            "before": self.boundary_before,
            "after": self.boundary_after,
        }


def compress_C_bits(n: int, bits: int, b: int) -> int:
    h = 1 << b
    col = avoid_mask(n, b)
    v = (bits >> h) & col & ~bits
    return bits & ~(v << h)


def compress_D_bits(n: int, bits: int, b: int) -> int:
    h = 1 << b
    return bits | ((bits >> h) & avoid_mask(n, b))


def compress_C(S: CubeSet, i: int) -> CubeSet:
    """{x ∈ S : x∖i ∈ S}."""
    return CubeSet(S.dim, compress_C_bits(S.dim, S.bits, check_coord(S.dim, i)))


def compress_D(S: CubeSet, i: int) -> CubeSet:
    """S ∪ {x : x∪i ∈ S}."""
    return CubeSet(S.dim, compress_D_bits(S.dim, S.bits, check_coord(S.dim, i)))


def directed_size_bits(n: int, bits: int, mode: Mode) -> int:
    if mode == "edge":
        return edge_boundary_size_bits(n, bits, directed=True)
    if mode == "vertex":
        return vertex_boundary_bits(n, bits, directed=True).bit_count()
    raise ValueError(f"mode must be 'edge' or 'vertex', got {mode!r}")


def _gaps(n: int, bits: int, b: int, mode: Mode) -> tuple[int, int, int, int, int]:
    here = directed_size_bits(n, bits, mode)
    d_bits = compress_D_bits(n, bits, b)
    c_bits = compress_C_bits(n, bits, b)
    return (
        here,
        here - directed_size_bits(n, d_bits, mode),
        here - directed_size_bits(n, c_bits, mode),
        d_bits,
        c_bits,
    )


def compression_gap(S: CubeSet, i: int, mode: Mode = "edge") -> tuple[int, int]:
    """Drop in directed boundary size caused by D_i and by C_i, in that order."""
    _, g_d, g_c, _, _ = _gaps(S.dim, S.bits, check_coord(S.dim, i), mode)
    return g_d, g_c


def check_sandwich(A: CubeSet, B: CubeSet, S: CubeSet | None = None) -> None:
    """Raise PreconditionError unless A is a down-set, B an up-set, A∩B=∅ and A⊆S⊆B^c."""
    n = A.dim
    for X in (B, S):
        if X is not None and X.dim != n:
            raise DimensionError(f"dimension mismatch: {n} vs {X.dim}")
    for b in range(n):
        h = 1 << b
        col = avoid_mask(n, b)
        bad = ((A.bits >> h) & col) & ~A.bits
        if bad:
            x = (bad & -bad).bit_length() - 1
            raise PreconditionError(f"A is not a down-set: {x | h:#x} in A but {x:#x} is not", x | h)
        bad = (B.bits & col) & ~(B.bits >> h)
        if bad:
            x = (bad & -bad).bit_length() - 1
            raise PreconditionError(f"B is not an up-set: {x:#x} in B but {x | h:#x} is not", x)
    clash = A.bits & B.bits
    if clash:
        x = (clash & -clash).bit_length() - 1
        raise PreconditionError(f"A and B intersect at {x:#x}", x)
    if S is not None:
        miss = A.bits & ~S.bits
        if miss:
            x = (miss & -miss).bit_length() - 1
            raise PreconditionError(f"A is not contained in S: {x:#x} missing", x)
        hit = S.bits & B.bits
        if hit:
            x = (hit & -hit).bit_length() - 1
            raise PreconditionError(f"S meets B at {x:#x}", x)


def descend_bits(n: int, bits: int, mode: Mode) -> tuple[int, list[CompressionStep]]:
    trace = []
    for b in range(n):
        here, g_d, g_c, d_bits, c_bits = _gaps(n, bits, b, mode)
        # ties go to the shrinking operator
        if g_c >= 0:
            choice, bits, after = "C", c_bits, here - g_c
        elif g_d >= 0:
            choice, bits, after = "D", d_bits, here - g_d
        else:
            raise ArithmeticError(
                f"both compressions grow the {mode} boundary at i={b + 1} (set {bits:#x})"
            )
        trace.append(CompressionStep(b + 1, choice, here, after, mode))
    return bits, trace


def compress_to_down_set(
    S: CubeSet, A: CubeSet, B: CubeSet, mode: Mode = "edge"
) -> tuple[CubeSet, list[CompressionStep]]:
    """Turn S (with A ⊆ S ⊆ B^c) into a down-set without growing its directed boundary.

    One pass over i = 1..n, applying whichever of C_i, D_i does not increase
    the directed ``mode`` boundary.
    """
    check_sandwich(A, B, S)
    bits, trace = descend_bits(S.dim, S.bits, mode)
    return CubeSet(S.dim, bits & full_bits(S.dim)), trace
