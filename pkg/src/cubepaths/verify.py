"""Theorem-by-theorem verification sweeps.

Each checked statement is registered as a :class:`Theorem`: an instance
shape, the largest n at which the shape may be swept exhaustively, and a
``check`` that turns one instance into computed numbers plus a verdict.
Sweeps yield one :class:`Certificate` per instance.

Instances are plain dicts: ``n`` plus whichever of the bitsets ``A``, ``B``,
``S`` and the integers ``i``, ``r`` the shape uses.
"""

from __future__ import annotations

import itertools
import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Iterator

from . import bounds, flownet
from .boundary import edge_boundary_size_bits, lower_shadow_bits, vertex_boundary_bits
from .compression import compress_C_bits, compress_D_bits, descend_bits, directed_size_bits
from .cube import (
    CubeSet,
    _i_down_bits,
    avoid_mask,
    full_bits,
    initial_segment,
    is_down_bits,
)
from .jsonio import bits_to_json, rational, real

MAX_RANDOM_DIM = 16
EXHAUSTIVE_FREE_CAP = 20
# the separator search tries vertex subsets by size, far costlier than the boundary sweep
VERTEX_CUT_FREE_CAP = 12
MAX_ATTEMPTS = 10_000
E_TOL = 1e-6
KK_TOL = 1e-9


class CapError(ValueError):
    """A sweep plan exceeds the documented instance-space bound."""


# --- enumeration ------------------------------------------------------------------

def enumerate_down_sets(n: int) -> Iterator[CubeSet]:
    """Every down-set of P[n] exactly once (as D0 ∪ D1×{n} with D1 ⊆ D0)."""
    if not 1 <= n <= 5:
        raise CapError(f"down-set enumeration supports 1 <= n <= 5, got {n}")
    for bits in _down_bits(n):
        yield CubeSet(n, bits)


def _down_bits(n: int) -> list[int]:
    level = [0, 1]  # down-sets of P[0]
    for k in range(1, n + 1):
        shift = 1 << (k - 1)
        level = [d0 | (d1 << shift) for d0 in level for d1 in level if d1 & ~d0 == 0]
    return level


def _down_up_pairs(n: int) -> Iterator[tuple[int, int]]:
    downs = _down_bits(n)
    full = full_bits(n)
    for a in downs:
        if not a:
            continue
        for d in downs:
            if a & ~d == 0 and d != full:
                yield a, full & ~d


def _members(bits: int) -> list[int]:
    return [m for m in range(bits.bit_length()) if (bits >> m) & 1]


def _submasks(free: int) -> Iterator[int]:
    sub = 0
    while True:
        yield sub
        if sub == free:
            return
        sub = (sub - free) & free


# --- random instances --------------------------------------------------------------

def _random_subset(rng: random.Random, pool: list[int], k: int) -> int:
    return sum(1 << m for m in rng.sample(pool, k))


def _random_down(rng: random.Random, n: int) -> int:
    t = rng.randint(1, 1 << (n - 1))
    bits = _random_subset(rng, list(range(1 << n)), t)
    for b in range(n):
        bits |= (bits >> (1 << b)) & avoid_mask(n, b)
    return bits


def _random_up_outside(rng: random.Random, n: int, a_bits: int) -> int:
    pool = _members(full_bits(n) & ~a_bits)
    if not pool:
        return 0
    bits = _random_subset(rng, pool, rng.randint(1, len(pool)))
    for b in range(n):
        bits |= (bits & avoid_mask(n, b)) << (1 << b)
    return bits


SHAPES = ("disjoint-pair", "down-up-pair", "between-set", "level-family", "subset", "subset-index", "small-set")


def random_instance(n: int, shape: str, seed: int, max_free: int | None = None) -> dict:
    """A deterministic random instance of the given shape.

    ``max_free`` bounds |P[n] ∖ (A ∪ B)| for pair shapes, so that brute-force
    oracles stay exhaustive.
    """
    if not 1 <= n <= MAX_RANDOM_DIM:
        raise CapError(f"random instances need 1 <= n <= {MAX_RANDOM_DIM}, got {n}")
    rng = random.Random(seed)
    size = 1 << n
    for _ in range(MAX_ATTEMPTS):
        if shape == "disjoint-pair":
            lo = 2 if max_free is None else max(2, size - max_free)
            if lo > size:
                break
            total = rng.randint(lo, size)
            a = rng.randint(1, total - 1)
            picked = rng.sample(range(size), total)
            A = sum(1 << m for m in picked[:a])
            B = sum(1 << m for m in picked[a:])
            return {"n": n, "A": A, "B": B}
        if shape in ("down-up-pair", "between-set"):
            A = _random_down(rng, n)
            B = _random_up_outside(rng, n, A)
            if not A or not B:
                continue
            free = full_bits(n) & ~(A | B)
            if max_free is not None and free.bit_count() > max_free:
                continue
            inst = {"n": n, "A": A, "B": B}
            if shape == "between-set":
                inst["S"] = A | (free & rng.getrandbits(size))
            return inst
        if shape == "level-family":
            r = rng.randint(1, n)
            level = [m for m in range(size) if m.bit_count() == r]
            k = rng.randint(1, len(level))
            return {"n": n, "r": r, "A": _random_subset(rng, level, k)}
        if shape == "subset":
            return {"n": n, "S": rng.getrandbits(size)}
        if shape == "subset-index":
            return {"n": n, "S": rng.getrandbits(size), "i": rng.randint(1, n)}
        if shape == "small-set":
            k = rng.randint(1, size // 2)
            return {"n": n, "A": _random_subset(rng, list(range(size)), k)}
        raise ValueError(f"unknown instance shape {shape!r}")
    raise CapError(f"no {shape} instance for n={n} after {MAX_ATTEMPTS} attempts")


# --- checks ------------------------------------------------------------------------

def _free_ok(n: int, a: int, b: int, cap: int = EXHAUSTIVE_FREE_CAP) -> None:
    free = (full_bits(n) & ~(a | b)).bit_count()
    if free > cap:
        raise CapError(f"{free} free vertices exceed the oracle cap of {cap}")


def check_diredges(inst: dict) -> tuple[dict, bool]:
    n, a, b = inst["n"], inst["A"], inst["B"]
    pe = flownet.edge_path_count(n, a, b, directed=False)
    pde = flownet.edge_path_count(n, a, b, directed=True)
    return {"p_e": pe, "p_e_directed": pde}, pe == pde


def check_directedvertices(inst: dict) -> tuple[dict, bool]:
    n, a, b = inst["n"], inst["A"], inst["B"]
    pv = flownet.vertex_path_count(n, a, b, directed=False)
    pdv = flownet.vertex_path_count(n, a, b, directed=True)
    return {"p_v": pv, "p_v_directed": pdv}, pv == pdv


def check_diredgeiso(inst: dict) -> tuple[dict, bool]:
    n, a, b = inst["n"], inst["A"], inst["B"]
    _free_ok(n, a, b)
    A, B = CubeSet(n, a), CubeSet(n, b)
    d_min, d_arg = flownet.min_boundary_oracle(A, B, "edge", directed=True)
    u_min, _ = flownet.min_boundary_oracle(A, B, "edge", directed=False)
    down, _ = descend_bits(n, d_arg.bits, "edge")
    down_size = edge_boundary_size_bits(n, down, directed=True)
    ok = (
        is_down_bits(n, down)
        and a & ~down == 0
        and down & b == 0
        and down_size == d_min
        and d_min == u_min
    )
    computed = {
        "min_directed": d_min,
        "min_undirected": u_min,
        "down_minimiser": bits_to_json(n, down),
        "down_minimiser_size": down_size,
    }
    return computed, ok


def _check_sandwich_descent(inst: dict, mode: str) -> tuple[dict, bool]:
    n, a, b, s = inst["n"], inst["A"], inst["B"], inst["S"]
    down, trace = descend_bits(n, s, mode)
    before = directed_size_bits(n, s, mode)
    after = directed_size_bits(n, down, mode)
    ok = is_down_bits(n, down) and a & ~down == 0 and down & b == 0 and after <= before
    computed = {
        "before": before,
        "after": after,
        "S_prime": bits_to_json(n, down),
        "choices": "".join(step.choice for step in trace),
    }
    return computed, ok


def check_dirvertexiso(inst: dict) -> tuple[dict, bool]:
    return _check_sandwich_descent(inst, "vertex")


def _averaged_lemma(inst: dict, mode: str) -> tuple[dict, bool]:
    n, s, i = inst["n"], inst["S"], inst["i"]
    b = i - 1
    here = directed_size_bits(n, s, mode)
    d = directed_size_bits(n, compress_D_bits(n, s, b), mode)
    c = directed_size_bits(n, compress_C_bits(n, s, b), mode)
    return {"S": here, "D": d, "C": c}, 2 * here >= d + c


def check_compressionreducesoutedges(inst: dict) -> tuple[dict, bool]:
    return _averaged_lemma(inst, "edge")


def check_compressionreducesupneighbours(inst: dict) -> tuple[dict, bool]:
    return _averaged_lemma(inst, "vertex")


def check_containments(inst: dict) -> tuple[dict, bool]:
    n, a, b, s = inst["n"], inst["A"], inst["B"], inst["S"]
    outside = full_bits(n) & ~b
    bad = []
    for k in range(n):
        c = compress_C_bits(n, s, k)
        d = compress_D_bits(n, s, k)
        chain = a & ~c == 0 and c & ~s == 0 and s & ~d == 0 and d & ~outside == 0
        if not chain:
            bad.append(k + 1)
    return {"failing_coordinates": bad}, not bad


def check_preservesdownness(inst: dict) -> tuple[dict, bool]:
    n, s = inst["n"], inst["S"]
    bad = []
    for bi in range(n):
        c = compress_C_bits(n, s, bi)
        d = compress_D_bits(n, s, bi)
        if not (_i_down_bits(n, c, bi) and _i_down_bits(n, d, bi)):
            bad.append([bi + 1, bi + 1])
        for bj in range(n):
            if bj != bi and _i_down_bits(n, s, bj):
                if not (_i_down_bits(n, c, bj) and _i_down_bits(n, d, bj)):
                    bad.append([bi + 1, bj + 1])
    return {"failing_pairs": bad}, not bad


def check_edgelemma(inst: dict) -> tuple[dict, bool]:
    n, a, b = inst["n"], inst["A"], inst["B"]
    _free_ok(n, a, b)
    A, B = CubeSet(n, a), CubeSet(n, b)
    pe, family, cut = flownet.edge_disjoint_paths(A, B, directed=False)
    oracle, _ = flownet.min_boundary_oracle(A, B, "edge", directed=False)
    computed = {"p_e": pe, "oracle_min": oracle, "cut_size": cut.cut_size}
    ok = pe == oracle == cut.cut_size == len(family)
    if is_down_bits(n, a) and is_down_bits(n, full_bits(n) & ~b):
        pde, dfam, dcut = flownet.edge_disjoint_paths(A, B, directed=True)
        d_oracle, _ = flownet.min_boundary_oracle(A, B, "edge", directed=True)
        computed.update({"p_e_directed": pde, "oracle_min_directed": d_oracle})
        ok = ok and pde == d_oracle == dcut.cut_size == len(dfam)
    return computed, ok


def check_vertexobs(inst: dict) -> tuple[dict, bool]:
    n, a, b = inst["n"], inst["A"], inst["B"]
    _free_ok(n, a, b, VERTEX_CUT_FREE_CAP)
    computed = {}
    ok = True
    for directed, tag in ((False, ""), (True, "_directed")):
        flow = flownet.vertex_path_count(n, a, b, directed)
        direct = len(flownet.direct_edges(n, a, b, directed))
        cut, _ = flownet.brute_vertex_cut(n, a, b, directed)
        computed.update({f"p_v{tag}": flow, f"direct{tag}": direct, f"brute_cut{tag}": cut})
        ok = ok and flow == direct + cut
    return computed, ok


def check_bledgesfull(inst: dict) -> tuple[dict, bool]:
    n, a, b = inst["n"], inst["A"], inst["B"]
    pe = flownet.edge_path_count(n, a, b)
    bound = bounds.bl_edge_bound(n, a.bit_count(), b.bit_count())
    return {"p_e": pe, "bound": real(bound)}, pe >= bound - E_TOL


def check_blfullvertices(inst: dict) -> tuple[dict, bool]:
    n, a, b = inst["n"], inst["A"], inst["B"]
    pv = flownet.vertex_path_count(n, a, b)
    bound = bounds.bl_vertex_bound(n, a.bit_count(), b.bit_count())
    return {"p_v": pv, "bound": rational(bound)}, pv >= bound


def matching_bound(n: int, size: int) -> Fraction:
    # s is undefined at 0; the empty family needs no matching
    return bounds.func_s(n, size) if size else Fraction(0)


def check_matchings(inst: dict) -> tuple[dict, bool]:
    n, a = inst["n"], inst["A"]
    m = flownet.matching_size_bits(n, a)
    bound = matching_bound(n, a.bit_count())
    return {"matching": m, "bound": rational(bound)}, m >= bound


def check_weakKK(inst: dict) -> tuple[dict, bool]:
    n, r, a = inst["n"], inst["r"], inst["A"]
    shadow = lower_shadow_bits(n, a).bit_count()
    x = bounds.solve_kk_threshold(a.bit_count(), r)
    bound = bounds.fractional_binomial(x, r - 1)
    return {"shadow": shadow, "x": real(x), "bound": real(bound)}, shadow >= bound - KK_TOL


def check_edgeiso(inst: dict) -> tuple[dict, bool]:
    n, s = inst["n"], inst["S"]
    size = edge_boundary_size_bits(n, s)
    seg = edge_boundary_size_bits(n, (1 << s.bit_count()) - 1)
    return {"boundary": size, "segment_boundary": seg}, size >= seg


def check_vertexiso(inst: dict) -> tuple[dict, bool]:
    n, s = inst["n"], inst["S"]
    size = vertex_boundary_bits(n, s).bit_count()
    seg_bits = initial_segment(n, s.bit_count(), "simplicial").bits
    seg = vertex_boundary_bits(n, seg_bits).bit_count()
    return {"boundary": size, "segment_boundary": seg}, size >= seg


# --- exhaustive instance spaces -----------------------------------------------------

def _ex_disjoint(n: int) -> Iterator[dict]:
    size = 1 << n
    for labels in itertools.product((0, 1, 2), repeat=size):
        a = sum(1 << m for m in range(size) if labels[m] == 1)
        b = sum(1 << m for m in range(size) if labels[m] == 2)
        if a and b:
            yield {"n": n, "A": a, "B": b}


def _ex_down_up(n: int) -> Iterator[dict]:
    for a, b in _down_up_pairs(n):
        yield {"n": n, "A": a, "B": b}


def _ex_between(n: int) -> Iterator[dict]:
    for a, b in _down_up_pairs(n):
        for sub in _submasks(full_bits(n) & ~(a | b)):
            yield {"n": n, "A": a, "B": b, "S": a | sub}


def _ex_subset_i(n: int) -> Iterator[dict]:
    for s in range(1 << (1 << n)):
        for i in range(1, n + 1):
            yield {"n": n, "S": s, "i": i}


def _ex_subset(n: int) -> Iterator[dict]:
    for s in range(1 << (1 << n)):
        yield {"n": n, "S": s}


def _ex_level(n: int) -> Iterator[dict]:
    for r in range(1, n + 1):
        level = [m for m in range(1 << n) if m.bit_count() == r]
        for pick in range(1, 1 << len(level)):
            yield {"n": n, "r": r, "A": sum(1 << level[j] for j in range(len(level)) if (pick >> j) & 1)}


def _ex_small(n: int) -> Iterator[dict]:
    size = 1 << n
    for k in range(size // 2 + 1):
        for combo in itertools.combinations(range(size), k):
            yield {"n": n, "A": sum(1 << m for m in combo)}


@dataclass(frozen=True)
class Theorem:
    id: str
    shape: str
    check: Callable[[dict], tuple[dict, bool]]
    exhaustive: Callable[[int], Iterable[dict]]
    max_exhaustive_n: int
    max_free: int | None = None  # brute-force oracles need few free vertices

    def random(self, n: int, seed: int) -> dict:
        return random_instance(n, self.shape, seed, self.max_free)


THEOREMS: dict[str, Theorem] = {
    t.id: t
    for t in (
        Theorem("diredges", "down-up-pair", check_diredges, _ex_down_up, 4),
        Theorem("directedvertices", "down-up-pair", check_directedvertices, _ex_down_up, 4),
        Theorem("diredgeiso", "down-up-pair", check_diredgeiso, _ex_down_up, 4, EXHAUSTIVE_FREE_CAP),
        Theorem("dirvertexiso", "between-set", check_dirvertexiso, _ex_between, 4),
        Theorem("compressionreducesoutedges", "subset-index", check_compressionreducesoutedges, _ex_subset_i, 4),
        Theorem("compressionreducesupneighbours", "subset-index", check_compressionreducesupneighbours, _ex_subset_i, 4),
        Theorem("containments", "between-set", check_containments, _ex_between, 4),
        Theorem("preservesdownness", "subset", check_preservesdownness, _ex_subset, 4),
        Theorem("edgelemma", "disjoint-pair", check_edgelemma, _ex_disjoint, 3, EXHAUSTIVE_FREE_CAP),
        Theorem("vertexobs", "disjoint-pair", check_vertexobs, _ex_disjoint, 3, VERTEX_CUT_FREE_CAP),
        Theorem("bledgesfull", "disjoint-pair", check_bledgesfull, _ex_disjoint, 3),
        Theorem("blfullvertices", "disjoint-pair", check_blfullvertices, _ex_disjoint, 3),
        Theorem("matchings", "small-set", check_matchings, _ex_small, 4),
        Theorem("weakKK", "level-family", check_weakKK, _ex_level, 4),
        Theorem("edgeiso", "subset", check_edgeiso, _ex_subset, 4),
        Theorem("vertexiso", "subset", check_vertexiso, _ex_subset, 4),
    )
}


# --- certificates and sweeps --------------------------------------------------------

_SET_KEYS = ("A", "B", "S")


def encode_instance(inst: dict) -> dict:
    out = {}
    for key, val in inst.items():
        out[key] = bits_to_json(inst["n"], val) if key in _SET_KEYS else val
    return out


def decode_instance(obj: dict) -> dict:
    from .jsonio import parse_set

    n = obj["n"]
    return {k: (parse_set(v, n).bits if k in _SET_KEYS else v) for k, v in obj.items()}


@dataclass(frozen=True)
class Certificate:
    theorem_id: str
    instance: dict
    computed: dict
    verdict: str
    seed: int | str

    def to_json(self) -> dict:
        return {
            "theorem_id": self.theorem_id,
            "instance": encode_instance(self.instance),
            "computed": self.computed,
            "verdict": self.verdict,
            "seed": self.seed,
        }

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"


@dataclass(frozen=True)
class SweepPlan:
    theorem_id: str
    n_range: tuple[int, int]
    strategy: str = "exhaustive"  # or "random"
    count: int = 0
    seed: int = 0

    def __post_init__(self) -> None:
        if self.theorem_id not in THEOREMS:
            raise ValueError(f"unknown theorem {self.theorem_id!r}; known: {', '.join(THEOREMS)}")
        lo, hi = self.n_range
        if not 1 <= lo <= hi:
            raise ValueError(f"bad n range {self.n_range}")
        if self.strategy == "exhaustive":
            cap = THEOREMS[self.theorem_id].max_exhaustive_n
            if hi > cap:
                raise CapError(f"{self.theorem_id}: exhaustive sweeps are capped at n <= {cap}")
        elif self.strategy == "random":
            if self.count < 1:
                raise ValueError("random plans need a positive count")
            if hi > MAX_RANDOM_DIM:
                raise CapError(f"random sweeps are capped at n <= {MAX_RANDOM_DIM}")
        else:
            raise ValueError(f"unknown strategy {self.strategy!r}")


def instance_seed(seed: int, index: int) -> int:
    return ((seed & 0xFFFFFFFF) << 32 | index) & 0xFFFFFFFFFFFFFFFF


def certify(theorem_id: str, inst: dict, seed: int | str = "exhaustive") -> Certificate:
    computed, ok = THEOREMS[theorem_id].check(inst)
    return Certificate(theorem_id, inst, computed, "pass" if ok else "fail", seed)


def recheck(cert: Certificate) -> Certificate:
    """Recompute a certificate from its recorded instance."""
    return certify(cert.theorem_id, cert.instance, cert.seed)


def plan_instances(plan: SweepPlan) -> Iterator[tuple[dict, int | str]]:
    thm = THEOREMS[plan.theorem_id]
    lo, hi = plan.n_range
    for n in range(lo, hi + 1):
        if plan.strategy == "exhaustive":
            for inst in thm.exhaustive(n):
                yield inst, "exhaustive"
        else:
            for k in range(plan.count):
                s = instance_seed(plan.seed + n, k)
                yield thm.random(n, s), s


def worker_count() -> int:
    raw = os.environ.get("CUBEPATHS_THREADS")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            raise ValueError(f"CUBEPATHS_THREADS must be an integer, got {raw!r}") from None
    return 1


def _certify_job(job: tuple[str, dict, int | str]) -> Certificate:
    return certify(*job)


def iter_certificates(plan: SweepPlan, fail_fast: bool = False, workers: int | None = None) -> Iterator[Certificate]:
    workers = worker_count() if workers is None else workers
    jobs = ((plan.theorem_id, inst, seed) for inst, seed in plan_instances(plan))
    if workers <= 1:
        results: Iterable[Certificate] = map(_certify_job, jobs)
        for cert in results:
            yield cert
            if fail_fast and not cert.passed:
                return
        return
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for cert in pool.map(_certify_job, jobs, chunksize=256):
            yield cert
            if fail_fast and not cert.passed:
                pool.shutdown(cancel_futures=True)
                return


def run_theorem(plan: SweepPlan, fail_fast: bool = False, workers: int | None = None) -> list[Certificate]:
    """Certificates for every instance of the plan, in instance order."""
    return list(iter_certificates(plan, fail_fast, workers))


def default_suite() -> list[SweepPlan]:
    """One exhaustive and one larger random plan per theorem."""
    plans = []
    for tid, thm in THEOREMS.items():
        ex_n = min(thm.max_exhaustive_n, 3)
        plans.append(SweepPlan(tid, (1, ex_n)))
        rand_hi = 5 if thm.max_free else 7
        plans.append(SweepPlan(tid, (ex_n + 1, max(ex_n + 1, rand_hi)), "random", 200, 42))
    return plans


# --- negative control ---------------------------------------------------------------

def negative_control(n: int = 3) -> dict:
    """Scan disjoint pairs that are not (down-set, up-set) for directed shortfall.

    Returns how many such pairs were checked, how many have fewer directed
    than undirected edge-disjoint paths, and the first such pair.
    """
    if n > 3:
        raise CapError("the negative control scans all disjoint pairs, so n <= 3")
    full = full_bits(n)
    checked = strict = 0
    example = None
    for inst in _ex_disjoint(n):
        a, b = inst["A"], inst["B"]
        if is_down_bits(n, a) and is_down_bits(n, full & ~b):
            continue
        checked += 1
        pe = flownet.edge_path_count(n, a, b)
        pde = flownet.edge_path_count(n, a, b, directed=True)
        if pde < pe:
            strict += 1
            if example is None:
                example = {**encode_instance(inst), "p_e": pe, "p_e_directed": pde}
    return {"n": n, "checked": checked, "strict": strict, "example": example}
