from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from meanderlift.biparabolic import DoublePartition
from meanderlift.halfint import ABOVE, BELOW, build_extended, halfint_meanders, select_markings
from meanderlift.modinv import (EDGE_CASE, LOOP, LoopError, ModinvError, adapted_pair, anti_toeplitz_involution,
                                cascade, decompose, local_orbits, min_norm_h, modified_involutions)
from meanderlift.oracle import check_h, independent
from meanderlift.rootlat import Root

from conftest import WORKED_MARKS, worked_dp, double_partitions, levi_dp


def _build(dp, marks=None, shifts=None):
    ms = select_markings(halfint_meanders(build_extended(dp)), dp.n, marks)
    sp, sm, reps = modified_involutions(dp, ms, shifts)
    edges, fixed = decompose(sp, sm)
    return ms, sp, sm, reps, edges, fixed


def test_single_pair_loop_block():
    sigma = anti_toeplitz_involution(1, 0, LOOP)
    assert sigma == {0: 1, 1: 0}
    assert local_orbits(sigma, 2) == [([0, 1], "loop")]


def test_two_point_anti_jordan_is_identity():
    sigma = anti_toeplitz_involution(1, 0, EDGE_CASE)
    assert sigma == {0: 0, 1: 1}


def test_shift_zero_only_for_single_pair():
    # shift 0 is the untouched cascade, which is one loop only when m = 1
    with pytest.raises(ModinvError, match="coprime"):
        anti_toeplitz_involution(3, 0, LOOP)


def test_anti_toeplitz_errors():
    with pytest.raises(ModinvError, match="coprime"):
        anti_toeplitz_involution(4, 2, LOOP)
    with pytest.raises(ModinvError, match="range"):
        anti_toeplitz_involution(3, 3, LOOP)
    with pytest.raises(ModinvError):
        anti_toeplitz_involution(0)


@given(st.integers(1, 12), st.data())
def test_anti_toeplitz_single_loop(m, data):
    coprime = [s for s in range(m) if Fraction(s, m).denominator == m] or [0]
    shift = data.draw(st.sampled_from(coprime))
    sigma = anti_toeplitz_involution(m, shift, LOOP)
    orbits = local_orbits(sigma, 2 * m)
    assert len(orbits) == 1 and orbits[0][1] == "loop"
    # every replaced arc joins the left half to the right half
    for p, q in sigma.items():
        assert (p < m) != (q < m)


@given(st.integers(1, 12), st.booleans())
def test_anti_jordan_single_edge(m, odd):
    N = 2 * m - 1 if odd else 2 * m
    sigma = anti_toeplitz_involution(m, 0, EDGE_CASE, odd)
    orbits = local_orbits(sigma, N)
    assert len(orbits) == 1 and orbits[0][1] == "edge"
    fixed = [p for p in range(N) if sigma[p] == p]
    assert len(fixed) == (1 if odd else 2) or (N == 1)
    # one arc fewer than the cascade
    arcs = sum(1 for p in range(N) if sigma[p] > p)
    assert arcs == N // 2 - (0 if odd else 1)


def test_three_point_involutions():
    dp = DoublePartition(3, [3], [2, 1])
    _, sp, sm, _, edges, fixed = _build(dp)
    assert sm.map == (1, 2, 3)
    assert sp.map == (3, 2, 1)
    assert [E.points for E in edges] == [(1, 3)] and fixed == [2]
    pair = adapted_pair(edges, fixed, dp)
    assert pair.S == [Root(1, 3)]


def test_worked_edges_and_eta():
    dp = worked_dp()
    _, sp, sm, reps, edges, fixed = _build(dp, WORKED_MARKS)
    assert sorted(E.points for E in edges) == [(4, 6, 2, 1, 8), (5, 3, 7)]
    assert fixed == []
    S = adapted_pair(edges, fixed, dp).S
    assert sorted(S) == sorted([Root(6, 4), Root(2, 6), Root(2, 1), Root(1, 8), Root(5, 3), Root(3, 7)])
    # modified arcs above and below
    assert sp.arcs() == [(1, 8), (2, 6), (3, 7)]
    assert sm.arcs() == [(1, 2), (3, 5), (4, 6)]
    assert [r.context for r in reps] == ["loop", "edge", "loop", "edge"]


def test_worked_h():
    dp = worked_dp()
    _, _, _, _, edges, fixed = _build(dp, WORKED_MARKS)
    h = adapted_pair(edges, fixed, dp).h
    assert h == [Fraction(x, 5) for x in (-1, -6, 0, 4, -5, -1, 5, 4)]
    assert check_h(adapted_pair(edges, fixed, dp).S, h)


def test_levi_example_all_fixed():
    dp = levi_dp()
    _, _, _, _, edges, fixed = _build(dp)
    assert edges == [] and fixed == [1, 2, 3, 4]
    pair = adapted_pair(edges, fixed, dp)
    assert pair.S == [] and all(x == 0 for x in pair.h)


def test_unmarked_block_keeps_cascade():
    dp = worked_dp()
    ms = select_markings(halfint_meanders(build_extended(dp)), 8, WORKED_MARKS)
    ms.marks = [m for m in ms.marks if m.side == ABOVE]
    _, sm, _ = modified_involutions(dp, ms)
    assert sm == cascade(dp, BELOW)


def test_bad_shift_yields_loop_or_error():
    dp = DoublePartition(6, [6], [1, 5])
    ms = select_markings(halfint_meanders(build_extended(dp)), 6)
    with pytest.raises(ModinvError):
        sp, sm, _ = modified_involutions(dp, ms, {(m.side, m.i): 5 for m in ms.marks})
        decompose(sp, sm)


def test_loop_error_carries_orbit():
    err = LoopError({3, 1, 2})
    assert err.orbit == [1, 2, 3] and "loop" in str(err)


def test_dependent_S_rejected():
    with pytest.raises(ModinvError, match="dependent"):
        min_norm_h([Root(1, 2), Root(2, 3), Root(1, 3)], 3)


@given(double_partitions())
def test_edge_decomposition_invariants(dp):
    ms, sp, sm, reps, edges, fixed = _build(dp)
    n = dp.n
    covered = sorted([p for E in edges for p in E.points] + fixed)
    assert covered == list(range(1, n + 1))
    S = adapted_pair(edges, fixed, dp).S
    assert len(S) == n - len(edges) - len(fixed)
    assert independent(S, n)
    for sign in (True, False):
        pts = [p for r in S if r.positive == sign for p in (r.i, r.j)]
        assert len(pts) == len(set(pts))
    for E in edges:
        ends = [E.phi(1), E.phi(E.e)]
        for p in ends:
            assert (sp(p) == p) != (sm(p) == p)
        for r in E.values():
            assert dp.in_R(r)
    for p in fixed:
        assert sp(p) == p and sm(p) == p


@given(double_partitions())
def test_h_scales_eta(dp):
    _, _, _, _, edges, fixed = _build(dp)
    pair = adapted_pair(edges, fixed, dp)
    assert check_h(pair.S, pair.h)


@given(double_partitions())
def test_loop_sum_identity(dp):
    _, _, _, reps, _, _ = _build(dp)
    for rep in reps:
        if rep.context != LOOP:
            continue
        kappa = {p: rep.block[0] + rep.block[1] - p for p in rep.points}
        sigma = {p: p for p in rep.points}
        for a, b in rep.arcs_after:
            sigma[a], sigma[b] = b, a
        # walk the loop alternating cascade and replaced arcs
        start = rep.points[0]
        vk, vs = [0] * (dp.n + 1), [0] * (dp.n + 1)
        x, use_k, steps = start, True, 0
        while True:
            y = kappa[x] if use_k else sigma[x]
            v = vk if use_k else vs
            v[x] += 1
            v[y] -= 1
            x, use_k, steps = y, not use_k, steps + 1
            if x == start and use_k:
                break
        assert steps == len(rep.points)
        assert vk == [-t for t in vs]


@given(double_partitions())
def test_fixed_point_census_and_side_separation(dp):
    _, sp, sm, reps, _, _ = _build(dp)
    for sigma, side in ((sp, ABOVE), (sm, BELOW)):
        for l, r in dp.partition(side):
            c2 = l + r
            edge_reps = [x for x in reps if x.side == side and x.block == (l, r) and x.context == EDGE_CASE]
            fixed = [p for p in range(l, r + 1) if sigma(p) == p]
            if edge_reps:
                (er,) = edge_reps
                assert len(fixed) == (1 if (r - l) % 2 == 0 else 2)
                assert set(fixed) <= set(er.points)
            else:
                assert fixed == ([c2 // 2] if c2 % 2 == 0 else [])
            for p in range(l, r + 1):
                q = sigma(p)
                if q != p:
                    assert (2 * p - c2) * (2 * q - c2) <= 0
