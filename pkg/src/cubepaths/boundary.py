"""Edge and vertex boundaries of cube families, directed and undirected.

The ``*_bits`` helpers work on raw ``(n, bits)`` pairs and return counts or
bitsets; the sweeps in :mod:`cubepaths.verify` call them directly.  The
public functions wrap them for :class:`CubeSet` inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .cube import CubeSet, DimensionError, avoid_mask, full_bits


@dataclass(frozen=True, slots=True)
class EdgeSet:
    """Cube edges as (smaller, larger) mask pairs."""

    dim: int
    edges: frozenset[tuple[int, int]]

    def __post_init__(self) -> None:
        for u, v in self.edges:
            d = u ^ v
            if d & (d - 1) or not d or v != u | d:
                raise ValueError(f"({u:#x}, {v:#x}) is not a cube edge stored smaller-first")

    def __len__(self) -> int:
        return len(self.edges)

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(sorted(self.edges))

    def __contains__(self, e: object) -> bool:
        return e in self.edges

    def issubset(self, other: EdgeSet) -> bool:
        return self.edges <= other.edges


# --- raw bitset kernels -------------------------------------------------------

def edge_boundary_size_bits(n: int, bits: int, directed: bool = False) -> int:
    total = 0
    for b in range(n):
        col = avoid_mask(n, b)
        low = bits & col
        high = (bits >> (1 << b)) & col
        total += (low & ~high).bit_count()
        if not directed:
            total += (high & ~low).bit_count()
    return total


def up_neighbours_bits(n: int, bits: int) -> int:
    out = 0
    for b in range(n):
        out |= (bits & avoid_mask(n, b)) << (1 << b)
    return out


def neighbours_bits(n: int, bits: int) -> int:
    out = 0
    for b in range(n):
        col = avoid_mask(n, b)
        h = 1 << b
        out |= ((bits & col) << h) | ((bits >> h) & col)
    return out


def vertex_boundary_bits(n: int, bits: int, directed: bool = False) -> int:
    nb = up_neighbours_bits(n, bits) if directed else neighbours_bits(n, bits)
    return nb & ~bits


def _boundary_size(n: int, bits: int, kind: str, directed: bool) -> int:
    if kind == "edge":
        return edge_boundary_size_bits(n, bits, directed)
    if kind == "vertex":
        return vertex_boundary_bits(n, bits, directed).bit_count()
    raise ValueError(f"unknown boundary kind {kind!r}")


def boundary_size(S: CubeSet, kind: str = "edge", directed: bool = False) -> int:
    return _boundary_size(S.dim, S.bits, kind, directed)


# --- public operators -----------------------------------------------------------

def _between_pairs(n: int, lo: int, hi: int) -> set[tuple[int, int]]:
    """Edges (x, x∪i) with x in ``lo`` and x∪i in ``hi``."""
    pairs = set()
    for b in range(n):
        h = 1 << b
        hit = lo & avoid_mask(n, b) & (hi >> h)
        while hit:
            low = hit & -hit
            x = low.bit_length() - 1
            pairs.add((x, x | h))
            hit ^= low
    return pairs


def edge_between(S1: CubeSet, S2: CubeSet, directed: bool = False) -> EdgeSet:
    """Edges with one endpoint in each set; if directed, smaller end in S1."""
    if S1.dim != S2.dim:
        raise DimensionError(f"dimension mismatch: {S1.dim} vs {S2.dim}")
    pairs = _between_pairs(S1.dim, S1.bits, S2.bits)
    if not directed:
        pairs |= _between_pairs(S1.dim, S2.bits, S1.bits)
    return EdgeSet(S1.dim, frozenset(pairs))


def edge_boundary(S: CubeSet) -> EdgeSet:
    return edge_between(S, S.complement(), directed=False)


def directed_edge_boundary(S: CubeSet) -> EdgeSet:
    return edge_between(S, S.complement(), directed=True)


def vertex_boundary(S: CubeSet) -> CubeSet:
    return CubeSet(S.dim, vertex_boundary_bits(S.dim, S.bits))


def directed_vertex_boundary(S: CubeSet) -> CubeSet:
    return CubeSet(S.dim, vertex_boundary_bits(S.dim, S.bits, directed=True))


def surface(S: CubeSet) -> CubeSet:
    """Members of S with a neighbour outside S."""
    n = S.dim
    return CubeSet(n, vertex_boundary_bits(n, full_bits(n) & ~S.bits))


def level_of(A: CubeSet) -> int:
    """Common cardinality of all members; raises if A mixes levels or is empty."""
    sizes = {m.bit_count() for m in A}
    if len(sizes) != 1:
        raise ValueError(
            "family is empty" if not sizes else f"family mixes levels {sorted(sizes)}"
        )
    return sizes.pop()


def lower_shadow_bits(n: int, bits: int) -> int:
    out = 0
    for b in range(n):
        out |= (bits & ~avoid_mask(n, b)) >> (1 << b)
    return out


def lower_shadow(A: CubeSet) -> CubeSet:
    """All sets obtained by deleting one element from a member of A."""
    r = level_of(A)
    if r < 1:
        raise ValueError("lower shadow needs members of size at least 1")
    return CubeSet(A.dim, lower_shadow_bits(A.dim, A.bits))


def up_closure_h(S: CubeSet) -> CubeSet:
    """S together with its directed vertex boundary."""
    return CubeSet(S.dim, S.bits | up_neighbours_bits(S.dim, S.bits) & full_bits(S.dim))
