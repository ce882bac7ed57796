import pytest
from hypothesis import given

from meanderlift.biparabolic import DoublePartition, PartitionError, admissible, normalize, root_sets_brute
from meanderlift.rootlat import Root, all_roots, add_roots, simple

from conftest import worked_dp, double_partitions, levi_dp


def test_normalize_accepts_sizes_and_intervals():
    assert normalize([2, 4, 2], 8) == ((1, 2), (3, 6), (7, 8))
    assert normalize([[1, 2], [3, 6], [7, 8]], 8) == ((1, 2), (3, 6), (7, 8))


@pytest.mark.parametrize("spec", [[[1, 2], [4, 8]], [[1, 3], [3, 8]], [[1, 7]], [], [3, 0, 5]])
def test_normalize_rejects_bad_cover(spec):
    with pytest.raises(PartitionError):
        normalize(spec, 8)


def test_rejects_gap_on_both_sides_and_full_algebra():
    with pytest.raises(PartitionError):
        DoublePartition(3, [1, 2], [1, 2])
    with pytest.raises(PartitionError):
        DoublePartition(3, [3], [3])


def test_classify_three_points():
    dp = DoublePartition(3, [3], [2, 1])
    c = dp.classify(Root(3, 2))
    assert c.K and c.Kminus
    # alpha_1 lies in both pi+ and pi-, so -alpha_1 is a Levi root
    c = dp.classify(Root(2, 1))
    assert c.R and c.M and not c.negRstar
    assert dp.classify(Root(2, 3)).R
    # brute force R over all six roots
    assert {r for r in all_roots(3) if dp.in_R(r)} == root_sets_brute(3, dp.pi_plus, dp.pi_minus)


def test_classify_levi_example():
    dp = levi_dp()
    assert dp.pi_plus == {1, 3} and dp.pi_minus == {2}
    c = dp.classify(Root(4, 1))
    assert c.Kminus and dp.in_Kplus(Root(1, 4))
    assert c.K and c.negK


def test_levi_simple_roots_in_M():
    for dp in (worked_dp(), levi_dp(), DoublePartition(6, [3, 3], [2, 4])):
        for k in dp.pi_plus & dp.pi_minus:
            assert dp.classify(simple(k)).M


def test_component_of_worked():
    dp = worked_dp()
    c = dp.component_of(4)
    assert dp.jplus[c.jp] == (1, 8) and dp.jminus[c.jm] == (3, 6)
    assert dp.equicentral(4)
    assert dp.centre2("+", 4) == dp.centre2("-", 4) == 9


def test_components_three_points():
    dp = DoublePartition(3, [3], [2, 1])
    assert [c.interval for c in dp.components()] == [(1, 2), (3, 3)]
    assert dp.linked(1, 3) and not dp.same_component(1, 3)


def test_admissible_counts():
    # n = 3 by hand: ([3], x) for three x, (x, [3]) for three x, ([2,1],[1,2]) and ([1,2],[2,1])
    assert sum(1 for _ in admissible(2)) == 2
    assert sum(1 for _ in admissible(3)) == 8


@given(double_partitions())
def test_same_component_is_M(dp):
    for p in range(1, dp.n + 1):
        for q in range(1, dp.n + 1):
            if p != q and dp.same_component(p, q):
                assert dp.classify(Root(p, q)).M


@given(double_partitions())
def test_classification_partitions_roots(dp):
    brute = root_sets_brute(dp.n, dp.pi_plus, dp.pi_minus)
    for r in all_roots(dp.n):
        c = dp.classify(r)
        assert c.R == (r in brute)
        # Delta = M disjoint union (K or -K)
        assert c.M != (c.K or c.negK)
        assert not (c.Rstar and c.negRstar)
        # R = M disjoint union (R and -K)
        if c.R:
            assert c.M != c.negK
        if c.Kplus or c.Kminus:
            assert c.K


def test_classification_exhaustive_up_to_seven():
    for n in range(2, 8):
        for dp in admissible(n):
            for r in all_roots(n):
                c = dp.classify(r)
                assert c.M != (c.K or c.negK)
                assert not (c.Rstar and c.negRstar)


def test_additive_closure_up_to_six():
    for n in range(2, 7):
        roots = all_roots(n)
        for dp in admissible(n):
            M = [r for r in roots if dp.in_M(r)]
            for m in M:
                for r in roots:
                    s = add_roots(m, r)
                    if s is None:
                        continue
                    c, cs = dp.classify(r), dp.classify(s)
                    assert not c.K or cs.K
                    assert not c.negK or cs.negK
                    assert not c.Rstar or cs.Rstar
                    assert not c.negRstar or cs.negRstar


def test_parabolic_case():
    for n in range(2, 7):
        for dp in admissible(n):
            if len(dp.jplus) != 1:
                continue
            for r in all_roots(n):
                c = dp.classify(r)
                assert c.K == c.Rstar
                assert not c.Kplus
