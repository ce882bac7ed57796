"""Acceptance criteria, one test per criterion (literal readings that do
not hold are kept as strict xfails next to the reading that does)."""
import random
import time
from fractions import Fraction
from math import gcd

import pytest

from meanderlift import oracle
from meanderlift.assemble import restrict, weierstrass_lift_index_one
from meanderlift.biparabolic import DoublePartition, admissible
from meanderlift.cli import RunConfig, run
from meanderlift.halfint import meander_count, product_orbit_count
from meanderlift.pipeline import Policy, construct
from meanderlift.rootlat import Root, add_roots, all_roots, apply_word, chain_to_simple_system

from conftest import WORKED_MARKS, SMALL_CHAIN_POLICY, worked_dp, index_one_dp, levi_dp

REFERENCE_WORD = [1, 2, 4, 6, 1, 3, 5, 2, 4, 6, 1, 3, 5, 6]

SWEEP_CHECKS = {
    "no loops": None,
    "S independent": "S linearly independent",
    "simple intervals in -R_*": "simple interval value in -R_*",
    "nil odd intervals in -K": "nil odd interval value in -K",
    "odd intervals in -K": "odd interval value in -K unless it spans the edge",
    "values in the new positive cone": "values lie in the positive cone of the new system",
    "altered values in K": "altered values lie in K",
    "single straightened edge": "straightened values form one type-A chain",
    "edge value in -K": "straightened edge value in -K",
    "added roots in K": "added roots lie in K",
    "restriction is eta": "restriction of y is eta",
    "rank(y^k) = n-k": "y is regular nilpotent",
}


def _x(*pairs):
    return {p: 1 for p in pairs}


def _restriction(y, dp):
    return {k: v for k, v in y.items() if v and dp.in_R(Root(*k))}


# 1 --------------------------------------------------------------------------

def test_criterion_1_worked_golden(criterion):
    with criterion("1 eight-point golden instance") as rec:
        t0 = time.perf_counter()
        dp = worked_dp()
        c = construct(dp, Policy(marks=WORKED_MARKS))
        nl = c.lift
        rep = oracle.check_lift(dp, c.pair.S, nl, c.straightened)
        elapsed = time.perf_counter() - t0
        eta = _x((6, 4), (2, 6), (2, 1), (1, 8), (5, 3), (3, 7))
        assert nl.eta == eta
        assert nl.piStar == [Root(5, 3), Root(3, 7), Root(7, 2), Root(2, 6), Root(6, 4), Root(4, 1), Root(1, 8)]
        assert nl.y == {**eta, (4, 1): 1, (7, 2): 1}
        assert oracle.power_ranks(nl.y, 8) == [8 - k for k in range(1, 9)]
        assert _restriction(nl.y, dp) == eta and restrict(nl.y, dp) == eta
        assert list(nl.w.permutation) == [5, 3, 7, 2, 6, 4, 1, 8]
        assert apply_word(REFERENCE_WORD, 8) == nl.w.permutation
        assert rep.passed
        assert elapsed < 1.0, f"{elapsed:.2f}s"
        rec.detail = f"{elapsed * 1000:.0f} ms"


# 2 --------------------------------------------------------------------------

def test_criterion_2_small_golden(criterion):
    with criterion("2 four-point instance with S empty") as rec:
        t0 = time.perf_counter()
        dp = levi_dp()
        assert dp.pi_plus == {1, 3} and dp.pi_minus == {2}
        c = construct(dp, Policy.from_dict(SMALL_CHAIN_POLICY))
        cert = oracle.certify_truncation(dp, c.pair.S)
        elapsed = time.perf_counter() - t0
        assert c.pair.S == [] and c.edges == [] and c.fixed == [1, 2, 3, 4]
        # commutative truncation: h_Lambda = 0 and no two roots of q_Lambda bracket nontrivially
        assert cert.certified and cert.dimension == 0
        R = [r for r in all_roots(4) if dp.in_R(r)]
        assert all(add_roots(a, b) is None and a != -b for a in R for b in R if a != b)
        nl = c.lift
        assert nl.piStar == [Root(3, 1), Root(1, 4), Root(4, 2)]
        assert chain_to_simple_system((3, 1, 4, 2)) == nl.piStar
        assert all(dp.in_K(r) for r in nl.piStar)
        assert list(nl.w.permutation) == [3, 1, 4, 2] == list(apply_word([2, 3, 1], 4))
        assert elapsed < 1.0, f"{elapsed:.2f}s"
        rec.detail = f"{elapsed * 1000:.0f} ms"


# 3 and 4 share one exhaustive sweep ---------------------------------------------

@pytest.fixture(scope="module")
def full_sweep():
    t0 = time.perf_counter()
    out = []
    for n in range(2, 9):
        for dp in admissible(n):
            report, _ = run(RunConfig(n, [list(x) for x in dp.jplus], [list(x) for x in dp.jminus]))
            out.append((dp, report))
    return out, time.perf_counter() - t0


def test_criterion_3_exhaustive_sweep(full_sweep, criterion):
    results, elapsed = full_sweep
    with criterion("3 exhaustive sweep n = 2..8, default policy") as rec:
        assert len(results) == 3272
        seen = {k: 0 for k in SWEEP_CHECKS}
        bad = []
        for dp, report in results:
            if "error" in report:
                bad.append((dp, report["error"]))
                continue
            seen["no loops"] += 1
            fals = report["falsifiers"]
            for label, name in SWEEP_CHECKS.items():
                if name is None or name not in fals:
                    continue
                seen[label] += 1
                if not fals[name]["passed"]:
                    bad.append((dp, label, fals[name]["counterexample"]))
            if report["status"] != "ok":
                bad.append((dp, [k for k, v in fals.items() if not v["passed"]]))
        assert not bad, bad[:3]
        assert all(seen.values()), seen
        assert elapsed < 300, f"{elapsed:.0f}s"
        rec.detail = f"{len(results)} instances, {elapsed:.0f}s single-threaded"


def test_criterion_4_certification_and_regularity(full_sweep, criterion):
    results, _ = full_sweep
    with criterion("4 truncation certificate and regularity of eta") as rec:
        statuses = [r["truncation"]["status"] for _, r in results]
        assert "falsified" not in statuses
        rate = statuses.count("certified") / len(statuses)
        assert rate >= 0.95
        assert all(r["truncation"]["samples"] <= 5 for _, r in results)
        for dp, r in results:
            reg = r["regularity"]
            if r["truncation"]["certified"]:
                assert reg["stabilizerDim"] == reg["indexMeander"] == product_orbit_count(dp)
                assert reg["regular"] is True
            else:
                assert reg["regular"] is None
        rec.detail = f"certified {rate:.1%}; stabilizer = orbits of iota+ iota-"


@pytest.mark.xfail(strict=True, reason="the stabilizer dimension counts orbits of iota+ iota-; a loop of "
                                       "<iota+, iota-> contributes two, so the group count is too small "
                                       "whenever some half-integer meander is a loop")
def test_criterion_4_literal_group_count(full_sweep, criterion):
    results, _ = full_sweep
    with criterion("4 (literal) stabilizer = number of half-integer meanders") as rec:
        bad = [(dp, r["regularity"]["stabilizerDim"], meander_count(dp)) for dp, r in results
               if r["truncation"]["certified"] and r["regularity"]["stabilizerDim"] != meander_count(dp)]
        rec.detail = ""
        assert not bad, f"{len(bad)} of {len(results)} differ, e.g. {bad[0][0]}: {bad[0][1]} vs {bad[0][2]}"


# 5 and 6: index one ---------------------------------------------------------

def _index_one_cases(n_max):
    return [(n, p) for n in range(2, n_max + 1) for p in range(1, n) if gcd(p, n) == 1]


def _eta_plus(eta, x, c):
    want = dict(eta)
    if c:
        want[x] = want.get(x, 0) + c
    return want


def test_criterion_5_index_one(criterion):
    with criterion("5 index-one families, n <= 12") as rec:
        t0 = time.perf_counter()
        lines = ends = 0
        for n, p in _index_one_cases(12):
            dp = index_one_dp(n, p)
            assert product_orbit_count(dp) == 1 == meander_count(dp)
            c = construct(dp)
            eta = c.lift.eta
            fam = weierstrass_lift_index_one(dp)
            x = (fam.exceptional.i, fam.exceptional.j)
            assert dp.in_R(fam.exceptional)
            if p not in (1, n - 1):
                lines += 1
                assert fam.case == "line"
                for cc in (0, 1, -1, 2):
                    y = fam.member(cc)
                    assert oracle.is_regular_nilpotent(y, n), (n, p, cc)
                    assert _restriction(y, dp) == _eta_plus(eta, x, cc)
            else:
                ends += 1
                assert fam.case == "end"
                for cc in (0, 1, -1, 2):
                    y = fam.member(cc)
                    assert oracle.is_regular_nilpotent(y, n) == (cc != 0), (n, p, cc)
                    assert _restriction(y, dp) == _eta_plus(eta, x, cc)
                y1 = fam.artificial_lift
                assert dp.in_K(fam.artificial)
                assert oracle.is_regular_nilpotent(y1, n) and _restriction(y1, dp) == eta
        elapsed = time.perf_counter() - t0
        assert elapsed < 10, f"{elapsed:.1f}s"
        rec.detail = f"{lines} line cases, {ends} punctured-line cases (p = 1 or n-1), {elapsed:.1f}s"


@pytest.mark.xfail(strict=True, reason="p = n-1 is the mirror image of p = 1 under x -> -J x^T J, so its "
                                       "family is a punctured line plus a point, not a line")
def test_criterion_5_literal_line_for_every_p_above_one(criterion):
    with criterion("5 (literal) full line for every p != 1") as rec:
        rec.detail = ""
        bad = []
        for n, p in _index_one_cases(12):
            if p == 1:
                continue
            fam = weierstrass_lift_index_one(index_one_dp(n, p))
            for cc in (0, 1, -1, 2):
                if not oracle.is_regular_nilpotent(fam.member(cc), n):
                    bad.append((n, p, cc))
        assert not bad, f"{len(bad)} failures, e.g. (n, p, c) = {bad[0]}"


def test_criterion_6_section_points(criterion):
    with criterion("6 twenty random section points per index-one instance, n <= 8") as rec:
        t0 = time.perf_counter()
        rng = random.Random(2024)
        count = 0
        for n, p in _index_one_cases(8):
            dp = index_one_dp(n, p)
            eta = construct(dp).lift.eta
            fam = weierstrass_lift_index_one(dp)
            x = (fam.exceptional.i, fam.exceptional.j)
            for k in range(20):
                cc = Fraction(rng.randint(-60, 60), rng.randint(1, 12)) if k else Fraction(0)
                y = fam.lift_point(cc)
                assert oracle.is_regular_nilpotent(y, n), (n, p, cc)
                assert _restriction(y, dp) == _eta_plus(eta, x, cc), (n, p, cc)
                count += 1
        elapsed = time.perf_counter() - t0
        assert elapsed < 10
        rec.detail = f"{count} points, {elapsed:.1f}s"


# 7 --------------------------------------------------------------------------

def _mutations(c, rng, k=10):
    """k random single corruptions: a flipped sign or a replaced added root."""
    sites = [("sign", e, i) for e, E in enumerate(c.edges) for i in range(E.e - 1)]
    sites += [("added", j, None) for j in range(len(c.lift.added))]
    return [rng.choice(sites) for _ in range(k)]


def _detected(c, site, rng):
    kind, a, b = site
    dp = c.dp
    if kind == "sign":
        edges = list(c.edges)
        E = edges[a]
        signs = list(E.signs)
        signs[b] = -signs[b]
        edges[a] = E.with_signs(signs)
        return not oracle.falsify_lemmas(dp, edges).passed
    nl = c.lift
    old = nl.added[a]
    new = rng.choice([r for r in all_roots(dp.n) if r != old and (r.i, r.j) not in nl.y])
    y = {k: v for k, v in nl.y.items() if k != (old.i, old.j)}
    y[(new.i, new.j)] = 1
    mutated = type(nl)(nl.chain, [new if r == old else r for r in nl.piStar], y, nl.eta,
                       sorted([new if r == old else r for r in nl.added]), nl.w, nl.join, nl.fixed_rule)
    return not oracle.check_lift(dp, c.pair.S, mutated, c.straightened).passed


def test_criterion_7_mutations(criterion):
    with criterion("7 single corruptions of golden instances are detected") as rec:
        rng = random.Random(7)
        golden = [construct(worked_dp(), Policy(marks=WORKED_MARKS)),
                  construct(levi_dp(), Policy.from_dict(SMALL_CHAIN_POLICY))]
        total = caught = 0
        for c in golden:
            base = oracle.falsify_lemmas(c.dp, c.edges, c.straightened, c.fixed)
            oracle.check_lift(c.dp, c.pair.S, c.lift, c.straightened, base)
            assert base.passed
            for site in _mutations(c, rng):
                total += 1
                caught += _detected(c, site, rng)
        assert caught == total == 20, f"{caught}/{total}"
        rec.detail = f"{caught}/{total} detected"
