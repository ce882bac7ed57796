"""Joining straightened edges and fully fixed points into one chain.

Every straightened edge E* is a chain a* -> ... -> b*.  Edges whose value
eps_{a*} - eps_{b*} is positive are joined head to tail in one run,
negative ones in another, the two runs are linked, and the fully fixed
points are hung on either end.  Every joining root must lie in K so that
it vanishes under restriction to q_Lambda.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

from .biparabolic import DoublePartition
from .modinv import Edge, decompose, cascade, edge_from_points
from .rootlat import PointChain, Root, WeylWord, chain_to_simple_system, weyl_word
from .straighten import StraightenedEdge, analyze_edge, external_arcs, straighten


class AssembleError(ValueError):
    pass


@dataclass
class JoinTrace:
    plus: list[tuple[int, int]]
    minus: list[tuple[int, int]]
    branch: str                   # "single" | "cross-plus" | "cross-minus" | "rewire-plus" | "rewire-minus"
    added: list[Root]


def _need_K(dp: DoublePartition, r: Root, what: str) -> Root:
    if not dp.in_K(r):
        raise AssembleError(f"{what} {r} is not in K")
    return r


def chain_straightened_edges(ses: list[StraightenedEdge], dp: DoublePartition, prefer: str = "plus"):
    """Single chain through all straightened edges, plus the joining roots."""
    if not ses:
        raise AssembleError("no straightened edges to join")
    plus = sorted((s for s in ses if s.aStar < s.bStar), key=lambda s: s.aStar)
    minus = sorted((s for s in ses if s.aStar > s.bStar), key=lambda s: s.aStar)

    def run_plus(items):
        # a_r -> b_r -> a_{r-1} -> ... -> a_1 -> b_1
        pts = []
        for s in reversed(items):
            pts += s.chain.points
        return pts

    def run_minus(items):
        # a'_1 -> b'_1 -> a'_2 -> ... -> b'_s
        pts = []
        for s in items:
            pts += s.chain.points
        return pts

    trace = JoinTrace([(s.aStar, s.bStar) for s in plus], [(s.aStar, s.bStar) for s in minus], "single", [])
    if not minus:
        pts, trace.branch = run_plus(plus), "single" if len(plus) == 1 else "plus-only"
    elif not plus:
        pts, trace.branch = run_minus(minus), "single" if len(minus) == 1 else "minus-only"
    else:
        b1, a1p = plus[0].bStar, minus[0].aStar
        bsp, ar = minus[-1].bStar, plus[-1].aStar
        ok1 = not dp.same_component(b1, a1p)
        ok2 = not dp.same_component(bsp, ar)
        order = [("cross-plus", ok1), ("cross-minus", ok2)]
        if prefer == "minus":
            order.reverse()
        branch = next((name for name, ok in order if ok), None)
        if branch == "cross-plus":
            pts = run_plus(plus) + run_minus(minus)
        elif branch == "cross-minus":
            pts = run_minus(minus) + run_plus(plus)
        elif len(plus) > 1:
            # E*_r, then E'_1..E'_s, then E*_{r-1}..E*_1
            branch = "rewire-plus"
            pts = list(plus[-1].chain.points) + run_minus(minus) + run_plus(plus[:-1])
        elif len(minus) > 1:
            # E'_1..E'_{s-1}, then E*_r..E*_1, then E'_s
            branch = "rewire-minus"
            pts = run_minus(minus[:-1]) + run_plus(plus) + list(minus[-1].chain.points)
        else:
            raise AssembleError(
                f"no legal join: b*_1={b1}, a'*_1={a1p} share a component and "
                f"b'*_s={bsp}, a*_r={ar} share a component, r=s=1")
        trace.branch = branch
    inner = set()
    for s in ses:
        inner |= set(chain_to_simple_system(s.chain))
    added = [r for r in chain_to_simple_system(pts) if r not in inner]
    for r in added:
        _need_K(dp, r, f"join ({trace.branch})")
    trace.added = added
    return PointChain(tuple(pts)), trace


def order_fixed(F: list[int], dp: DoublePartition) -> list[int]:
    """Chain of fully fixed points with K-links, by induction from the left."""
    F = sorted(F)
    if len(F) <= 1:
        return F
    f1, f2 = F[0], F[1]
    if dp.in_K(Root(f1, f2)):
        out = [f1, f2]
    elif dp.in_K(Root(f2, f1)):
        out = [f2, f1]
    else:
        raise AssembleError(f"fixed points {f1}, {f2} are not K-linked either way")
    for f in F[2:]:
        if dp.in_K(Root(out[-1], f)):
            out.append(f)
        elif dp.in_K(Root(f, out[0])):
            out.insert(0, f)
        else:
            raise AssembleError(f"fixed point {f} fits at neither end of {out}")
    return out


def split_fixed(F: list[int], a: int, b: int, dp: DoublePartition):
    """Decompose F into the parts hung before a* and after b*."""
    if not F:
        return [], [], "empty"
    if dp.same_component(a, b):
        lp, rp = dp.block("+", a)
        lm, rm = dp.block("-", a)
        comp_lo, comp_hi = max(lp, lm), min(rp, rm)
        left = [f for f in F if f < comp_lo]
        right = [f for f in F if f > comp_hi]
        if len(left) + len(right) != len(F):
            raise AssembleError("a fully fixed point lies in the equicentral component of a*, b*")
        if lm <= lp and rp <= rm and (lm, rm) != (lp, rp):
            return left, right, "same-component/J- contains J+"
        return right, left, "same-component/J+ contains J-"
    ia, ib = dp.component_of(a), dp.component_of(b)
    bp_b = dp.block_index("+", b)
    bm_a = dp.block_index("-", a)
    b_left = ib.interval[0] < ia.interval[0]
    if dp.same_minus(a, b) or (not dp.linked(a, b) and b_left):
        rule = "linked/same J-" if dp.same_minus(a, b) else "unlinked/b* left"
        Fa = [f for f in F if dp.block_index("+", f) <= bp_b]
        Fb = [f for f in F if dp.block_index("+", f) > bp_b]
    else:
        rule = "linked/same J+" if dp.same_plus(a, b) else "unlinked/b* right"
        Fa = [f for f in F if dp.block_index("-", f) > bm_a]
        Fb = [f for f in F if dp.block_index("-", f) <= bm_a]
    return Fa, Fb, rule


def attach_fixed_points(chain: PointChain, F: list[int], dp: DoublePartition, fixed_chain=None):
    """Hang the fully fixed points on the ends of the chain via K-roots."""
    if not F:
        return chain, [], "empty"
    a, b = chain.points[0], chain.points[-1]
    Fa, Fb, rule = split_fixed(F, a, b, dp)
    for f in Fa:
        _need_K(dp, Root(f, a), f"fixed point {f} before a*={a}:")
    for f in Fb:
        _need_K(dp, Root(b, f), f"fixed point {f} after b*={b}:")
    Ca, Cb = order_fixed(Fa, dp), order_fixed(Fb, dp)
    pts = Ca + list(chain.points) + Cb
    added = []
    links = list(zip(Ca, Ca[1:])) + ([(Ca[-1], a)] if Ca else []) + ([(b, Cb[0])] if Cb else []) + list(zip(Cb, Cb[1:]))
    for u, v in links:
        added.append(_need_K(dp, Root(u, v), "fixed-point link"))
    return PointChain(tuple(pts)), added, rule


def fixed_only_chain(F: list[int], dp: DoublePartition, fixed_chain=None):
    """Chain through the fully fixed points when S is empty."""
    if fixed_chain is not None:
        if sorted(fixed_chain) != sorted(F):
            raise AssembleError(f"fixed chain {fixed_chain} is not a permutation of {F}")
        pts = list(fixed_chain)
    else:
        pts = order_fixed(F, dp)
    added = [_need_K(dp, r, "fixed-point link") for r in chain_to_simple_system(pts)]
    return PointChain(tuple(pts)), added


def sparse_matrix(roots) -> dict:
    return {(r.i, r.j): 1 for r in roots}


def restrict(y: dict, dp: DoublePartition) -> dict:
    """Drop the entries at K positions (restriction to q_Lambda)."""
    return {k: v for k, v in y.items() if v and not dp.in_K(Root(*k))}


def chain_form_regular(y: dict, chain: PointChain) -> bool:
    """y is regular nilpotent when, in chain order, it is strictly upper
    triangular with every superdiagonal entry nonzero."""
    pos = chain.position()
    n = len(chain)
    for (i, j), v in y.items():
        if v and pos[i] >= pos[j]:
            return False
    return all(y.get((chain.points[k], chain.points[k + 1]), 0) for k in range(n - 1))


@dataclass
class NilpotentLift:
    chain: PointChain
    piStar: list[Root]
    y: dict
    eta: dict
    added: list[Root]             # roots of y outside S, each in K
    w: WeylWord
    join: JoinTrace | None = None
    fixed_rule: str = ""

    def matrix(self, n: int):
        M = [[0] * n for _ in range(n)]
        for (i, j), v in self.y.items():
            M[i - 1][j - 1] = v
        return M


def lift(dp: DoublePartition, S: list[Root], ses: list[StraightenedEdge], F: list[int],
         prefer: str = "plus", fixed_chain=None) -> NilpotentLift:
    join = None
    rule = ""
    if ses:
        chain, join = chain_straightened_edges(ses, dp, prefer)
        chain, added_f, rule = attach_fixed_points(chain, F, dp)
        added = join.added + added_f
    else:
        chain, added = fixed_only_chain(F, dp, fixed_chain)
        rule = "fixed-only" if fixed_chain is None else "fixed-only/explicit"
    if sorted(chain.points) != list(range(1, dp.n + 1)):
        raise AssembleError(f"chain {chain.points} does not pass through every point")
    piStar = chain_to_simple_system(chain)
    roots = set(S) | set(piStar)
    for s in ses:
        roots |= set(s.piStar)
    y = sparse_matrix(roots)
    eta = sparse_matrix(S)
    for r in roots - set(S):
        if not dp.in_K(r):
            raise AssembleError(f"root {r} of y outside S is not in K")
    if restrict(y, dp) != eta:
        raise AssembleError("restriction of y differs from eta")
    if not chain_form_regular(y, chain):
        raise AssembleError("y is not regular nilpotent in chain order")
    extra = sorted(roots - set(S))
    return NilpotentLift(chain, piStar, y, eta, extra, weyl_word(piStar), join, rule)


# index one ---------------------------------------------------------------

@dataclass
class IndexOneFamily:
    n: int
    p: int
    s: int                        # index of the exceptional value along the edge
    exceptional: Root
    case: str                     # "line" (turning point internal) | "end"
    edge: Edge                    # the unmodified edge through all points
    base: dict                    # y(0) without the exceptional term (line) or sum over i != s (end)
    replaced: list[Root]          # beta*_i replacing marked values (line case)
    artificial: Root | None = None
    artificial_lift: dict | None = None

    def lift_point(self, c) -> dict:
        """A regular nilpotent lift of the section point eta + c x_exceptional."""
        if self.case == "end" and c == 0:
            return dict(self.artificial_lift)
        return self.member(c)

    def member(self, c) -> dict:
        y = dict(self.base)
        if c:
            k = (self.exceptional.i, self.exceptional.j)
            y[k] = y.get(k, 0) + c
        return y


def index_one_parameter(dp: DoublePartition) -> int:
    n = dp.n
    if dp.jplus != ((1, n),) or len(dp.jminus) != 2:
        raise AssembleError("not an index-one biparabolic (needs J+ = [1,n] and two J- blocks)")
    p = dp.jminus[0][1]
    if gcd(p, n) != 1:
        raise AssembleError(f"p={p} and n={n} are not coprime")
    return p


def weierstrass_lift_index_one(dp: DoublePartition) -> IndexOneFamily:
    p = index_one_parameter(dp)
    n = dp.n
    edges, F = decompose(cascade(dp, "+"), cascade(dp, "-"))
    if len(edges) != 1 or F or edges[0].e != n:
        raise AssembleError("unmodified meander is not a single edge through every point")
    E = edges[0]
    simple_idx = [i for i in range(1, n) if abs(E.phi(i) - E.phi(i + 1)) == 1]
    if len(simple_idx) != 1:
        raise AssembleError(f"expected one simple value on the edge, found {simple_idx}")
    s = simple_idx[0]
    xs = E.value(s)
    internal = [t for t in (s, s + 1) if 1 < t < n and analyze_edge(E, dp).kind.get(t)]
    if internal:
        t = internal[0]
        td = analyze_edge(E, dp, overrides={E.phi(t): "above" if t == s + 1 else "below"})
        if s not in td.marked:
            raise AssembleError(f"exceptional value at {s} is not marked by straightening")
        se = straighten(E, td, dp)
        replaced = [a.root for a in se.external]
        roots = [E.value(i) for i in range(1, n) if i != s] + replaced
        base = sparse_matrix(roots)
        return IndexOneFamily(n, p, s, xs, "line", E, base, replaced)

    # exceptional value at an end: orient so that it is the last value
    if s == 1:
        E = edge_from_points(tuple(reversed(E.points)), tuple(reversed(E.sides)))
        s = n - 1
    base = sparse_matrix([E.value(i) for i in range(1, n) if i != s])
    signs = list(E.signs)
    signs[s - 1] = -signs[s - 1]
    Eart = E.with_signs(signs)
    if E.e == 2:
        # nothing to straighten: the flipped value itself is the replacement
        art = Eart.value(s)
    else:
        td = analyze_edge(Eart, dp, overrides={Eart.phi(s): "below"}, strict=False)
        if td.marked.get(s) != s:
            raise AssembleError("artificial turning point does not take the flipped value")
        art = next(a.root for a in external_arcs(Eart, td) if a.index == s)
    _need_K(dp, art, "artificial replacement")
    y1 = dict(base)
    y1[(art.i, art.j)] = 1
    return IndexOneFamily(n, p, s, xs, "end", E, base, [], art, y1)
