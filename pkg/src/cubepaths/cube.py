"""Hypercube vertices, set families and the two classical orders.

A vertex of Q_n is a subset of {1..n} stored as an n-bit mask, element ``i``
living in bit ``i - 1``.  A family of vertices is stored as a characteristic
bitset of length 2**n, held in one Python int: bit ``m`` is set when the
vertex with mask ``m`` belongs to the family.  Most operations are a handful
of shifts and ands on that int.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Iterable, Iterator, Literal

MAX_DIM = 24

Order = Literal["binary", "simplicial"]


class DimensionError(ValueError):
    """Dimension out of range or mismatched between operands."""


def check_dim(n: int, cap: int = MAX_DIM) -> int:
    if not isinstance(n, int) or isinstance(n, bool) or not 1 <= n <= cap:
        raise DimensionError(f"dimension must be an integer in [1, {cap}], got {n!r}")
    return n


def check_coord(n: int, i: int) -> int:
    """Validate a 1-based coordinate and return its 0-based bit index."""
    if not isinstance(i, int) or not 1 <= i <= n:
        raise ValueError(f"coordinate must lie in [1, {n}], got {i!r}")
    return i - 1


@functools.lru_cache(maxsize=None)
def full_bits(n: int) -> int:
    return (1 << (1 << n)) - 1


@functools.lru_cache(maxsize=None)
def avoid_mask(n: int, b: int) -> int:
    """Bitset of all vertices of Q_n whose mask has bit ``b`` clear."""
    half = 1 << b
    block = (1 << half) - 1
    period = half << 1
    reps = (1 << n) // period
    # block repeated every `period` positions
    return block * ((1 << (period * reps)) - 1) // ((1 << period) - 1)


@dataclass(frozen=True, slots=True)
class CubeVertex:
    mask: int
    dim: int

    def __post_init__(self) -> None:
        check_dim(self.dim)
        if not 0 <= self.mask < (1 << self.dim):
            raise ValueError(f"mask {self.mask:#x} does not fit dimension {self.dim}")

    @classmethod
    def from_elements(cls, dim: int, elements: Iterable[int]) -> CubeVertex:
        mask = 0
        for e in elements:
            if not 1 <= e <= dim:
                raise ValueError(f"element {e} outside [1, {dim}]")
            mask |= 1 << (e - 1)
        return cls(mask, dim)

    @property
    def elements(self) -> list[int]:
        return mask_elements(self.mask)

    def __len__(self) -> int:
        return self.mask.bit_count()


def mask_elements(mask: int) -> list[int]:
    """1-based elements of a vertex mask, ascending."""
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


@dataclass(frozen=True, slots=True)
class CubeSet:
    """A family S of vertices of Q_n as a 2**n-bit characteristic bitset."""

    dim: int
    bits: int = 0

    def __post_init__(self) -> None:
        check_dim(self.dim)
        if self.bits < 0 or self.bits >> (1 << self.dim):
            raise ValueError("bitset longer than 2**dim")

    @classmethod
    def empty(cls, n: int) -> CubeSet:
        return cls(n, 0)

    @classmethod
    def full(cls, n: int) -> CubeSet:
        return cls(n, full_bits(check_dim(n)))

    @classmethod
    def from_masks(cls, n: int, masks: Iterable[int]) -> CubeSet:
        check_dim(n)
        bits = 0
        size = 1 << n
        for m in masks:
            if not 0 <= m < size:
                raise ValueError(f"mask {m:#x} does not fit dimension {n}")
            bits |= 1 << m
        return cls(n, bits)

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __contains__(self, x: object) -> bool:
        if isinstance(x, CubeVertex):
            if x.dim != self.dim:
                return False
            x = x.mask
        return bool((self.bits >> x) & 1) if isinstance(x, int) and x >= 0 else False

    def __iter__(self) -> Iterator[int]:
        """Member masks in ascending (binary) order."""
        bits = self.bits
        while bits:
            low = bits & -bits
            yield low.bit_length() - 1
            bits ^= low

    def vertices(self) -> list[CubeVertex]:
        return [CubeVertex(m, self.dim) for m in self]

    def _same(self, other: CubeSet) -> None:
        if other.dim != self.dim:
            raise DimensionError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def complement(self) -> CubeSet:
        return CubeSet(self.dim, full_bits(self.dim) & ~self.bits)

    def __or__(self, other: CubeSet) -> CubeSet:
        self._same(other)
        return CubeSet(self.dim, self.bits | other.bits)

    def __and__(self, other: CubeSet) -> CubeSet:
        self._same(other)
        return CubeSet(self.dim, self.bits & other.bits)

    def __sub__(self, other: CubeSet) -> CubeSet:
        self._same(other)
        return CubeSet(self.dim, self.bits & ~other.bits)

    def issubset(self, other: CubeSet) -> bool:
        self._same(other)
        return self.bits & ~other.bits == 0

    def isdisjoint(self, other: CubeSet) -> bool:
        self._same(other)
        return self.bits & other.bits == 0

    def __repr__(self) -> str:
        members = ", ".join("{" + ",".join(map(str, mask_elements(m))) + "}" for m in self)
        return f"CubeSet(n={self.dim}, [{members}])"


def make_cube_set(n: int, members: Iterable[CubeVertex | int]) -> CubeSet:
    """Build a CubeSet from vertices (or raw masks); duplicates collapse."""
    check_dim(n)
    masks = []
    for v in members:
        if isinstance(v, CubeVertex):
            if v.dim != n:
                raise DimensionError(f"vertex of dimension {v.dim} in a family of dimension {n}")
            masks.append(v.mask)
        else:
            masks.append(v)
    return CubeSet.from_masks(n, masks)


# --- down/up-sets -----------------------------------------------------------

def _i_down_bits(n: int, bits: int, b: int) -> bool:
    # x∪i ∈ S must imply x ∈ S
    return ((bits >> (1 << b)) & avoid_mask(n, b)) & ~bits == 0


def is_i_down(S: CubeSet, i: int) -> bool:
    return _i_down_bits(S.dim, S.bits, check_coord(S.dim, i))


def is_down_bits(n: int, bits: int) -> bool:
    return all(_i_down_bits(n, bits, b) for b in range(n))


def is_down_set(S: CubeSet) -> bool:
    return is_down_bits(S.dim, S.bits)


def is_up_set(S: CubeSet) -> bool:
    return is_down_bits(S.dim, full_bits(S.dim) & ~S.bits)


def down_closure(S: CubeSet) -> CubeSet:
    n, bits = S.dim, S.bits
    for b in range(n):
        bits |= (bits >> (1 << b)) & avoid_mask(n, b)
    return CubeSet(n, bits)


def up_closure(S: CubeSet) -> CubeSet:
    n, bits = S.dim, S.bits
    for b in range(n):
        bits |= (bits & avoid_mask(n, b)) << (1 << b)
    return CubeSet(n, bits)


# --- orders ------------------------------------------------------------------

def _same_dim(x: CubeVertex, y: CubeVertex) -> None:
    if x.dim != y.dim:
        raise DimensionError(f"dimension mismatch: {x.dim} vs {y.dim}")


def compare_binary(x: CubeVertex, y: CubeVertex) -> int:
    """-1, 0 or 1 as x precedes, equals or follows y: x < y iff max(x△y) ∈ y."""
    _same_dim(x, y)
    d = x.mask ^ y.mask
    if not d:
        return 0
    top = 1 << (d.bit_length() - 1)
    return -1 if y.mask & top else 1


def compare_simplicial(x: CubeVertex, y: CubeVertex) -> int:
    """Order by size, ties broken by min(x△y) ∈ x."""
    _same_dim(x, y)
    return simplicial_cmp_masks(x.mask, y.mask)


def simplicial_cmp_masks(x: int, y: int) -> int:
    cx, cy = x.bit_count(), y.bit_count()
    if cx != cy:
        return -1 if cx < cy else 1
    d = x ^ y
    if not d:
        return 0
    return -1 if x & (d & -d) else 1


@functools.lru_cache(maxsize=32)
def simplicial_sequence(n: int) -> tuple[int, ...]:
    """All masks of Q_n listed in simplicial order."""
    return tuple(sorted(range(1 << n), key=functools.cmp_to_key(simplicial_cmp_masks)))


def initial_segment(n: int, m: int, order: Order = "binary") -> CubeSet:
    """The first ``m`` vertices of Q_n in the given order."""
    check_dim(n)
    if not 0 <= m <= (1 << n):
        raise ValueError(f"segment length must lie in [0, {1 << n}], got {m}")
    if order == "binary":
        return CubeSet(n, (1 << m) - 1)
    if order == "simplicial":
        return CubeSet.from_masks(n, simplicial_sequence(n)[:m])
    raise ValueError(f"unknown order {order!r}")


# --- sections ----------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class SectionDecomposition:
    """The T, U, V, W split of S along coordinate i.

    All four parts live in the ambient dimension and contain only vertices
    avoiding i; each is named by the membership pattern of (x, x∪i):
    T both, U bottom only, V top only, W neither.
    """

    i: int
    T: CubeSet
    U: CubeSet
    V: CubeSet
    W: CubeSet

    def reconstruct(self) -> CubeSet:
        shift = 1 << (self.i - 1)
        n = self.T.dim
        return CubeSet(n, self.T.bits | self.U.bits | ((self.T.bits | self.V.bits) << shift))


def section_bits(n: int, bits: int, b: int) -> tuple[int, int, int, int]:
    col = avoid_mask(n, b)
    low = bits & col
    high = (bits >> (1 << b)) & col
    return low & high, low & ~high, high & ~low, col & ~(low | high)


def sections(S: CubeSet, i: int) -> SectionDecomposition:
    b = check_coord(S.dim, i)
    t, u, v, w = section_bits(S.dim, S.bits, b)
    n = S.dim
    return SectionDecomposition(i, CubeSet(n, t), CubeSet(n, u), CubeSet(n, v), CubeSet(n, w))
