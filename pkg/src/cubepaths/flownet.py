"""Unit-capacity flows on Q_n: disjoint path counts, path families and cuts.

The solver is Dinic's level-graph blocking flow over an arc list whose
order is fixed by construction, so flows, extracted paths and cut witnesses
are reproducible.  Cube networks list vertices ascending and, per vertex,
coordinates ascending.

Undirected cube edges use the shared-unit gadget: the arc pair (u→v, v→u)
both start at capacity 1 and are each other's residual, so the net flow on
the edge lies in [-1, 1].
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Literal, Sequence

import numpy as np

from .boundary import edge_boundary_size_bits, neighbours_bits, up_neighbours_bits, vertex_boundary_bits
from .cube import CubeSet, DimensionError, avoid_mask, check_dim, full_bits, mask_elements

MAX_FLOW_DIM = 16
MAX_ORACLE_FREE = 24

Kind = Literal["edge", "vertex"]


# --- generic network -----------------------------------------------------------

@dataclass
class FlowNetwork:
    """Directed network with unit arcs and sets of source and sink nodes.

    ``add_edge`` records an undirected unit edge.  At solve time arcs
    entering a source or leaving a sink are dropped (an undirected edge
    touching one becomes a one-way arc), and a super-source / super-sink
    are attached.
    """

    node_count: int
    arcs: list[tuple[int, int, int, bool]] = field(default_factory=list)
    sources: set[int] = field(default_factory=set)
    sinks: set[int] = field(default_factory=set)

    def add_arc(self, u: int, v: int, cap: int = 1) -> None:
        self.arcs.append((u, v, cap, False))

    def add_edge(self, u: int, v: int, cap: int = 1) -> None:
        self.arcs.append((u, v, cap, True))


@dataclass
class FlowResult:
    value: int
    # residual graph, super-source is node_count, super-sink node_count + 1
    adj: list[list[int]]
    to: list[int]
    cap: list[int]
    base: list[int]
    origin: list[int]
    node_count: int

    @property
    def source(self) -> int:
        return self.node_count

    @property
    def sink(self) -> int:
        return self.node_count + 1

    def reachable(self) -> list[bool]:
        """Nodes reachable from the super-source in the residual network."""
        seen = [False] * (self.node_count + 2)
        seen[self.source] = True
        stack = [self.source]
        adj, to, cap = self.adj, self.to, self.cap
        while stack:
            u = stack.pop()
            for e in adj[u]:
                v = to[e]
                if cap[e] > 0 and not seen[v]:
                    seen[v] = True
                    stack.append(v)
        return seen

    def net_flow(self, e: int) -> int:
        return self.base[e] - self.cap[e]

    def decompose(self) -> list[list[int]]:
        """Split the integral flow into ``value`` source-to-sink node walks.

        Walks follow the lowest-index positive arc out of each node; a cycle
        met along the way is cancelled and the walk resumes from its start.
        """
        rem = [max(0, self.base[e] - self.cap[e]) for e in range(len(self.cap))]
        adj, to = self.adj, self.to
        s, t = self.source, self.sink
        paths = []
        for _ in range(self.value):
            walk = [s]
            edges: list[int] = []
            pos = {s: 0}
            u = s
            while u != t:
                for e in adj[u]:
                    if rem[e] > 0:
                        break
                else:
                    raise ArithmeticError("flow conservation broken during decomposition")
                v = to[e]
                if v in pos:
                    k = pos[v]
                    for c in edges[k:]:
                        rem[c] -= 1
                    rem[e] -= 1
                    for w in walk[k + 1:]:
                        del pos[w]
                    del walk[k + 1:]
                    del edges[k:]
                    u = v
                    continue
                edges.append(e)
                walk.append(v)
                pos[v] = len(walk) - 1
                u = v
            for e in edges:
                rem[e] -= 1
            paths.append(walk[1:-1])
        return paths


def _build(net: FlowNetwork):
    n = net.node_count
    s, t = n, n + 1
    adj: list[list[int]] = [[] for _ in range(n + 2)]
    to: list[int] = []
    cap: list[int] = []
    origin: list[int] = []
    src, snk = net.sources, net.sinks
    if src & snk:
        raise ValueError("a node cannot be both source and sink")
    big = len(net.arcs) + 1

    def pair(u: int, v: int, c_fwd: int, c_back: int, idx: int) -> None:
        adj[u].append(len(to))
        to.append(v)
        cap.append(c_fwd)
        origin.append(idx)
        adj[v].append(len(to))
        to.append(u)
        cap.append(c_back)
        origin.append(idx)

    for u in sorted(src):
        pair(s, u, big, 0, -1)
    for idx, (u, v, c, undirected) in enumerate(net.arcs):
        fwd = v not in src and u not in snk
        back = undirected and u not in src and v not in snk
        if fwd and back:
            pair(u, v, c, c, idx)
        elif fwd:
            pair(u, v, c, 0, idx)
        elif back:
            pair(v, u, c, 0, idx)
    for v in sorted(snk):
        pair(v, t, big, 0, -1)
    return adj, to, cap, origin


def _dinic(adj: list[list[int]], to: list[int], cap: list[int], s: int, t: int) -> int:
    n = len(adj)
    flow = 0
    while True:
        level = [-1] * n
        level[s] = 0
        queue = [s]
        for u in queue:
            lu = level[u] + 1
            for e in adj[u]:
                v = to[e]
                if cap[e] > 0 and level[v] < 0:
                    level[v] = lu
                    queue.append(v)
        if level[t] < 0:
            return flow
        it = [0] * n
        while True:
            # advance/retreat search for one augmenting path in the level graph
            u = s
            path: list[int] = []
            while u != t:
                au = adj[u]
                i = it[u]
                lu = level[u] + 1
                while i < len(au):
                    e = au[i]
                    if cap[e] > 0 and level[to[e]] == lu:
                        break
                    i += 1
                it[u] = i
                if i < len(au):
                    path.append(au[i])
                    u = to[au[i]]
                    continue
                if u == s:
                    break
                level[u] = -1
                e = path.pop()
                u = to[e ^ 1]
                it[u] += 1
            if u != t:
                break
            push = min(cap[e] for e in path)
            for e in path:
                cap[e] -= push
                cap[e ^ 1] += push
            flow += push


def max_flow(net: FlowNetwork) -> tuple[int, FlowResult]:
    """Maximum flow from the sources to the sinks, with its residual network."""
    adj, to, cap, origin = _build(net)
    base = list(cap)
    value = _dinic(adj, to, cap, net.node_count, net.node_count + 1)
    return value, FlowResult(value, adj, to, cap, base, origin, net.node_count)


# --- cube-level types ------------------------------------------------------------

@dataclass(frozen=True)
class PathFamily:
    paths: tuple[tuple[int, ...], ...]
    kind: Literal["edge-disjoint", "vertex-disjoint-interiors"]
    directed: bool

    def __len__(self) -> int:
        return len(self.paths)

    def to_json(self) -> list[list[list[int]]]:
        return [[mask_elements(x) for x in p] for p in self.paths]


@dataclass(frozen=True)
class CutWitness:
    """One side S of a minimum cut, with the cut size it certifies.

    For vertex kinds ``separator`` holds the interior vertices whose removal
    (together with the direct A-B edges) separates A from B, and
    ``cut_size`` = #direct edges + |separator|.
    """

    S: CubeSet
    cut_size: int
    kind: Kind
    directed: bool
    separator: CubeSet | None = None


def _check_pair(A: CubeSet, B: CubeSet) -> int:
    if A.dim != B.dim:
        raise DimensionError(f"dimension mismatch: {A.dim} vs {B.dim}")
    n = check_dim(A.dim, cap=MAX_FLOW_DIM)
    if not A.bits or not B.bits:
        raise ValueError("A and B must be non-empty")
    if A.bits & B.bits:
        x = (A.bits & B.bits).bit_length() - 1
        raise ValueError(f"A and B must be disjoint; both contain {x:#x}")
    return n


def _members(bits: int) -> list[int]:
    out = []
    while bits:
        low = bits & -bits
        out.append(low.bit_length() - 1)
        bits ^= low
    return out


def check_path_family(family: PathFamily, A: CubeSet, B: CubeSet) -> None:
    """Raise AssertionError if ``family`` breaks a path-family invariant."""
    ends = A.bits | B.bits
    used_edges: set[tuple[int, int]] = set()
    used_inner: set[int] = set()
    for p in family.paths:
        assert len(p) >= 2, f"path {p} too short"
        assert (A.bits >> p[0]) & 1, f"path {p} does not start in A"
        assert (B.bits >> p[-1]) & 1, f"path {p} does not end in B"
        for x in p[1:-1]:
            assert not (ends >> x) & 1, f"path {p} has interior vertex {x:#x} in A ∪ B"
        assert len(set(p)) == len(p), f"path {p} repeats a vertex"
        for u, v in zip(p, p[1:]):
            d = u ^ v
            assert d and not d & (d - 1), f"{u:#x}-{v:#x} is not a cube edge"
            if family.directed:
                assert v > u, f"{u:#x}->{v:#x} goes down in a directed path"
            if family.kind == "edge-disjoint":
                key = (min(u, v), max(u, v))
                assert key not in used_edges, f"edge {key} used twice"
                used_edges.add(key)
        if family.kind == "vertex-disjoint-interiors":
            inner = set(p[1:-1])
            assert not inner & used_inner, f"interiors overlap at {inner & used_inner}"
            used_inner |= inner
    if family.kind == "vertex-disjoint-interiors":
        direct = [tuple(p) for p in family.paths if len(p) == 2]
        assert len(direct) == len(set(direct)), "a direct edge is used twice"


# --- edge-disjoint paths -----------------------------------------------------------

def _cube_edge_network(n: int, a_bits: int, b_bits: int, directed: bool) -> FlowNetwork:
    net = FlowNetwork(1 << n, sources=set(_members(a_bits)), sinks=set(_members(b_bits)))
    arcs = net.arcs
    for u in range(1 << n):
        for b in range(n):
            h = 1 << b
            if u & h:
                continue
            arcs.append((u, u | h, 1, not directed))
    return net


def edge_disjoint_paths(
    A: CubeSet, B: CubeSet, directed: bool = False
) -> tuple[int, PathFamily, CutWitness]:
    """Maximum family of edge-disjoint (directed) A→B paths, with a matching cut."""
    n = _check_pair(A, B)
    net = _cube_edge_network(n, A.bits, B.bits, directed)
    value, res = max_flow(net)
    paths = tuple(tuple(p) for p in res.decompose())
    seen = res.reachable()
    s_bits = sum(1 << v for v in range(1 << n) if seen[v])
    cut = edge_boundary_size_bits(n, s_bits, directed)
    if cut != value:
        raise ArithmeticError(f"residual cut {cut} disagrees with flow value {value}")
    family = PathFamily(paths, "edge-disjoint", directed)
    return value, family, CutWitness(CubeSet(n, s_bits), cut, "edge", directed)


def edge_path_count(n: int, a_bits: int, b_bits: int, directed: bool = False) -> int:
    """Flow value only, for sweeps."""
    value, _ = max_flow(_cube_edge_network(n, a_bits, b_bits, directed))
    return value


# --- vertex-disjoint paths ---------------------------------------------------------

def direct_edges(n: int, a_bits: int, b_bits: int, directed: bool) -> list[tuple[int, int]]:
    """Edges joining A to B (directed: from a smaller vertex of A to a larger one of B)."""
    out = []
    for b in range(n):
        h = 1 << b
        col = avoid_mask(n, b)
        hits = a_bits & col & (b_bits >> h)
        if not directed:
            hits |= b_bits & col & (a_bits >> h)
        for x in _members(hits):
            out.append((x, x | h) if (a_bits >> x) & 1 else (x | h, x))
    out.sort()
    return out


def _split_network(n: int, a_bits: int, b_bits: int, directed: bool) -> FlowNetwork:
    size = 1 << n
    ends = a_bits | b_bits
    net = FlowNetwork(2 * size, sources=set(_members(a_bits)), sinks=set(_members(b_bits)))
    arcs = net.arcs

    def tail(x: int) -> int:
        return x if (ends >> x) & 1 else size + x

    for x in range(size):
        if not (ends >> x) & 1:
            arcs.append((x, size + x, 1, False))
    for u in range(size):
        for b in range(n):
            h = 1 << b
            if u & h:
                continue
            v = u | h
            if ((a_bits >> u) & (b_bits >> v) & 1) or ((b_bits >> u) & (a_bits >> v) & 1):
                continue  # direct A-B edges are counted separately
            arcs.append((tail(u), v, 1, False))
            if not directed:
                arcs.append((tail(v), u, 1, False))
    return net


def vertex_disjoint_paths(
    A: CubeSet, B: CubeSet, directed: bool = False
) -> tuple[int, PathFamily, CutWitness]:
    """Maximum family of (directed) A→B paths with pairwise disjoint interiors.

    Direct A-B edges are taken as length-1 paths; the rest comes from a
    Menger flow in the cube minus those edges, each interior vertex split
    into an in-half and an out-half joined by a unit arc.
    """
    n = _check_pair(A, B)
    size = 1 << n
    direct = direct_edges(n, A.bits, B.bits, directed)
    value, res = max_flow(_split_network(n, A.bits, B.bits, directed))

    paths = [tuple(e) for e in direct]
    for walk in res.decompose():
        p: list[int] = []
        for node in walk:
            x = node - size if node >= size else node
            if not p or p[-1] != x:
                p.append(x)
        paths.append(tuple(p))

    seen = res.reachable()
    sep = 0
    for u in range(2 * size):
        if not seen[u]:
            continue
        for e in res.adj[u]:
            v = res.to[e]
            if res.base[e] > 0 and res.origin[e] >= 0 and not seen[v]:
                # each cut arc carries exactly one path; charge it to an interior vertex of that path
                if v >= size:
                    sep |= 1 << (v - size)
                elif (B.bits >> v) & 1:
                    sep |= 1 << (u - size)
                else:
                    sep |= 1 << v
    reach = 0
    for x in range(size):
        if seen[x] or seen[x + size]:
            reach |= 1 << x
    reach = (reach | A.bits) & ~sep
    if sep.bit_count() != value:
        raise ArithmeticError(f"separator size {sep.bit_count()} disagrees with flow value {value}")
    total = len(direct) + value
    family = PathFamily(tuple(paths), "vertex-disjoint-interiors", directed)
    return total, family, CutWitness(CubeSet(n, reach), total, "vertex", directed, CubeSet(n, sep))


def vertex_path_count(n: int, a_bits: int, b_bits: int, directed: bool = False) -> int:
    value, _ = max_flow(_split_network(n, a_bits, b_bits, directed))
    return len(direct_edges(n, a_bits, b_bits, directed)) + value


# --- matchings ---------------------------------------------------------------------

def max_matching_to_complement(A: CubeSet) -> int:
    """Size of a maximum matching of A into its complement along cube edges."""
    n = check_dim(A.dim, cap=MAX_FLOW_DIM)
    if len(A) > 1 << (n - 1):
        raise ValueError(f"|A| = {len(A)} exceeds 2**(n-1) = {1 << (n - 1)}")
    return matching_size_bits(n, A.bits)


def matching_size_bits(n: int, a_bits: int) -> int:
    size = 1 << n
    src, snk = size, size + 1
    net = FlowNetwork(size + 2, sources={src}, sinks={snk})
    for a in _members(a_bits):
        net.add_arc(src, a)
        for b in range(n):
            v = a ^ (1 << b)
            if not (a_bits >> v) & 1:
                net.add_arc(a, v)
    for v in _members(full_bits(n) & ~a_bits):
        net.add_arc(v, snk)
    value, _ = max_flow(net)
    return value


# --- brute-force oracles -------------------------------------------------------------

def _oracle_sizes_numpy(n: int, base: int, free: list[int], kind: Kind, directed: bool) -> np.ndarray:
    k = np.arange(1 << len(free), dtype=np.uint64)
    S = np.full(k.shape, base, dtype=np.uint64)
    for j, pos in enumerate(free):
        S |= ((k >> np.uint64(j)) & np.uint64(1)) << np.uint64(pos)
    full = np.uint64(full_bits(n))
    total = np.zeros(k.shape, dtype=np.int64)
    nb = np.zeros(k.shape, dtype=np.uint64)
    for b in range(n):
        col = np.uint64(avoid_mask(n, b))
        h = np.uint64(1 << b)
        low = S & col
        high = (S >> h) & col
        if kind == "edge":
            total += np.bitwise_count(low & ~high)
            if not directed:
                total += np.bitwise_count(high & ~low)
        else:
            nb |= low << h
            if not directed:
                nb |= high
    if kind == "vertex":
        total = np.bitwise_count(nb & ~S & full).astype(np.int64)
    return total


def min_boundary_oracle(
    A: CubeSet, B: CubeSet, kind: Kind = "edge", directed: bool = False
) -> tuple[int, CubeSet]:
    """Exhaustive minimum of the chosen boundary over all S with A ⊆ S ⊆ B^c.

    Returns the minimum and the first minimiser in ascending order of the
    free part of S.
    """
    if A.dim != B.dim:
        raise DimensionError(f"dimension mismatch: {A.dim} vs {B.dim}")
    if A.bits & B.bits:
        raise ValueError("A and B must be disjoint")
    if kind not in ("edge", "vertex"):
        raise ValueError(f"unknown boundary kind {kind!r}")
    n = A.dim
    free_bits = full_bits(n) & ~(A.bits | B.bits)
    free = _members(free_bits)
    if len(free) > MAX_ORACLE_FREE:
        raise ValueError(f"{len(free)} free vertices exceed the exhaustive cap of {MAX_ORACLE_FREE}")
    if n <= 6 and len(free) >= 8:
        sizes = _oracle_sizes_numpy(n, A.bits, free, kind, directed)
        k = int(np.argmin(sizes))
        sub = sum(1 << pos for j, pos in enumerate(free) if (k >> j) & 1)
        return int(sizes[k]), CubeSet(n, A.bits | sub)
    best, arg = None, 0
    sub = 0
    while True:
        bits = A.bits | sub
        if kind == "edge":
            val = edge_boundary_size_bits(n, bits, directed)
        else:
            val = vertex_boundary_bits(n, bits, directed).bit_count()
        if best is None or val < best:
            best, arg = val, bits
        if sub == free_bits:
            break
        sub = (sub - free_bits) & free_bits
    return best, CubeSet(n, arg)


def separates(n: int, a_bits: int, b_bits: int, cut_bits: int, directed: bool) -> bool:
    """True if no A→B path avoids ``cut_bits`` once the direct A-B edges are deleted."""
    allowed = full_bits(n) & ~(a_bits | b_bits | cut_bits)
    step = up_neighbours_bits if directed else neighbours_bits
    reach = step(n, a_bits) & allowed
    while True:
        more = (reach | step(n, reach)) & allowed
        if more == reach:
            break
        reach = more
    return not step(n, reach) & b_bits


def brute_vertex_cut(n: int, a_bits: int, b_bits: int, directed: bool = False) -> tuple[int, int]:
    """Smallest interior vertex set separating A from B in Q_n minus the direct edges.

    Returns (size, bitset of one smallest separator), trying candidates by
    increasing size.
    """
    free = _members(full_bits(n) & ~(a_bits | b_bits))
    if len(free) > MAX_ORACLE_FREE:
        raise ValueError(f"{len(free)} free vertices exceed the exhaustive cap of {MAX_ORACLE_FREE}")
    for size in range(len(free) + 1):
        for combo in itertools.combinations(free, size):
            cut = sum(1 << x for x in combo)
            if separates(n, a_bits, b_bits, cut, directed):
                return size, cut
    raise ArithmeticError("removing every free vertex must separate A from B")


def brute_vertex_path_count(n: int, a_bits: int, b_bits: int, directed: bool = False) -> int:
    """Direct A-B edges plus a brute-force minimum vertex cut."""
    size, _ = brute_vertex_cut(n, a_bits, b_bits, directed)
    return len(direct_edges(n, a_bits, b_bits, directed)) + size


def boundary_sizes(n: int, bits: int, kind: Kind, directed: bool) -> int:
    if kind == "edge":
        return edge_boundary_size_bits(n, bits, directed)
    return vertex_boundary_bits(n, bits, directed).bit_count()


__all__: Sequence[str] = (
    "FlowNetwork",
    "FlowResult",
    "PathFamily",
    "CutWitness",
    "max_flow",
    "edge_disjoint_paths",
    "vertex_disjoint_paths",
    "max_matching_to_complement",
    "min_boundary_oracle",
    "brute_vertex_cut",
    "check_path_family",
)
