import random

import pytest

from cubepaths import (
    CubeSet,
    CubeVertex,
    compress_C,
    compress_D,
    compress_to_down_set,
    compression_gap,
    is_down_set,
    is_i_down,
    make_cube_set,
    min_boundary_oracle,
    sections,
)
from cubepaths.boundary import boundary_size
from cubepaths.compression import CompressionStep, PreconditionError
from cubepaths.verify import enumerate_down_sets

from . import naive


def fam(n, *sets):
    return make_cube_set(n, [CubeVertex.from_elements(n, x) for x in sets])


def directed(S, mode):
    return boundary_size(S, mode, directed=True)


def test_operator_examples():
    S = fam(2, (), (1, 2))
    assert compress_C(S, 1) == fam(2, ())
    assert compress_D(S, 1) == fam(2, (), (2,), (1, 2))
    S = fam(2, (1,), (1, 2))
    assert len(compress_C(S, 1)) == 0
    assert compress_D(S, 1) == CubeSet.full(2)


def test_down_sets_are_fixed_points():
    for S in enumerate_down_sets(3):
        for i in (1, 2, 3):
            assert compress_C(S, i) == S == compress_D(S, i)
            assert compression_gap(S, i, "edge") == (0, 0)
            assert compression_gap(S, i, "vertex") == (0, 0)


def test_coordinate_out_of_range():
    with pytest.raises(ValueError):
        compress_C(CubeSet.empty(2), 3)
    with pytest.raises(ValueError):
        compression_gap(CubeSet.empty(2), 0)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_operators_match_definitions_and_sections(n):
    for bits in range(1 << (1 << n)):
        S = CubeSet(n, bits)
        F = naive.to_family(S)
        for i in range(1, n + 1):
            c, d = compress_C(S, i), compress_D(S, i)
            if n <= 3:
                assert naive.to_family(c) == naive.C(F, i)
                assert naive.to_family(d) == naive.D(n, F, i)
            sec = sections(S, i)
            shifted_v = CubeSet(n, sec.V.bits << (1 << (i - 1)))
            assert c == S - shifted_v
            assert d == S | sec.V
            assert c.issubset(S) and S.issubset(d)
            assert is_i_down(c, i) and is_i_down(d, i)
            for j in range(1, n + 1):
                if is_i_down(S, j):
                    assert is_i_down(c, j) and is_i_down(d, j)


def test_gap_examples():
    S = fam(2, (), (1, 2))
    assert directed(S, "edge") == 2
    assert directed(compress_D(S, 1), "edge") == 1
    assert directed(compress_C(S, 1), "edge") == 2
    assert compression_gap(S, 1, "edge") == (1, 0)
    assert directed(S, "vertex") == 2
    assert directed(compress_D(S, 1), "vertex") == 1
    assert directed(compress_C(S, 1), "vertex") == 2
    assert compression_gap(S, 1, "vertex") == (1, 0)


@pytest.mark.parametrize("mode", ["edge", "vertex"])
@pytest.mark.parametrize("n", [5, 6])
def test_averaged_inequality_random(n, mode):
    rng = random.Random(n * 7 + len(mode))
    for _ in range(2000):
        S = CubeSet(n, rng.getrandbits(1 << n))
        i = rng.randint(1, n)
        g_d, g_c = compression_gap(S, i, mode)
        assert max(g_d, g_c) >= 0
        assert g_d + g_c >= 0  # 2|∂S| >= |∂D| + |∂C|


def test_descent_on_down_set_is_identity():
    A, B = fam(2, ()), fam(2, (1, 2))
    S = fam(2, (), (2,))
    out, trace = compress_to_down_set(S, A, B)
    assert out == S
    assert [step.i for step in trace] == [1, 2]
    assert all(step.boundary_before == step.boundary_after for step in trace)


def test_descent_example_with_oracle():
    n = 3
    A, B = fam(n, ()), fam(n, (1, 2, 3))
    S = fam(n, (), (1, 2))
    assert directed(S, "edge") == 4
    out, trace = compress_to_down_set(S, A, B, "edge")
    assert is_down_set(out) and A.issubset(out) and out.isdisjoint(B)
    assert len(trace) == n and [t.i for t in trace] == [1, 2, 3]
    # replay the trace with the reference operators and boundaries
    cur = naive.to_family(S)
    for step in trace:
        before = len(naive.edge_boundary(n, cur, directed=True))
        cur = naive.C(cur, step.i) if step.choice == "C" else naive.D(n, cur, step.i)
        after = len(naive.edge_boundary(n, cur, directed=True))
        assert (before, after) == (step.boundary_before, step.boundary_after)
        assert after <= before
    assert naive.to_cubeset(n, cur) == out
    best = min(len(naive.edge_boundary(n, X, directed=True)) for X in naive.sandwiched(n, naive.to_family(A), naive.to_family(B)))
    assert best <= directed(out, "edge") <= 4


def test_descent_prefers_C_on_ties():
    S = fam(2, (), (1, 2))
    A, B = fam(2, ()), CubeSet.empty(2)
    _, trace = compress_to_down_set(S, A, B, "edge")
    for step in trace:
        g = step.boundary_before - step.boundary_after
        assert g >= 0
    assert trace[1].choice == "C"


@pytest.mark.parametrize("mode", ["edge", "vertex"])
def test_descent_all_sandwiches_n3(mode):
    n = 3
    downs = list(enumerate_down_sets(n))
    full = CubeSet.full(n)
    for A in downs:
        for D in downs:
            if not A.issubset(D):
                continue
            B = full - D
            free = full - A - B
            for sub in range(1 << len(free)):
                extra = [m for j, m in enumerate(free) if (sub >> j) & 1]
                S = A | CubeSet.from_masks(n, extra)
                out, trace = compress_to_down_set(S, A, B, mode)
                assert is_down_set(out) and A.issubset(out) and out.isdisjoint(B)
                assert directed(out, mode) <= directed(S, mode)
                assert all(a.boundary_after == b.boundary_before for a, b in zip(trace, trace[1:]))


def test_minimum_attained_by_down_set_n4():
    n = 4
    full = CubeSet.full(n)
    downs = list(enumerate_down_sets(n))
    rng = random.Random(4)
    pairs = [(A, full - D) for A in downs for D in downs if A.bits and A.issubset(D) and D != full]
    for A, B in rng.sample(pairs, 300):
        for mode in ("edge", "vertex"):
            best, arg = min_boundary_oracle(A, B, mode, directed=True)
            out, _ = compress_to_down_set(arg, A, B, mode)
            assert is_down_set(out) and directed(out, mode) == best


def test_precondition_witnesses():
    n = 2
    with pytest.raises(PreconditionError) as exc:
        compress_to_down_set(fam(n, (1,)), fam(n, (1,)), fam(n, (1, 2)))
    assert exc.value.witness == 0b01
    with pytest.raises(PreconditionError) as exc:
        compress_to_down_set(fam(n, ()), fam(n, ()), fam(n, (1,)))
    assert exc.value.witness == 0b01
    with pytest.raises(PreconditionError):
        compress_to_down_set(fam(n, (), (1, 2)), fam(n, ()), fam(n, (1, 2)))
    with pytest.raises(PreconditionError):
        compress_to_down_set(CubeSet.empty(n), fam(n, ()), fam(n, (1, 2)))


def test_step_invariant():
    with pytest.raises(ValueError):
        CompressionStep(1, "C", 2, 3, "edge")
