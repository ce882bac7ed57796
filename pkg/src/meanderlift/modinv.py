"""Modified integer involutions, their edges, and the adapted pair (h, eta).

Each block J of J+ (resp. J-) carries the cascade involution kappa, the
nested arcs (l, r), (l+1, r-1), ...  Marked arcs inside J are grouped into
runs of consecutive cascade indices; each run, extended by one arc towards
the centre, is rewired by an anti-Toeplitz block so that kappa and the new
involution sigma generate a single orbit on the affected points.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

import sympy

from .biparabolic import DoublePartition
from .halfint import ABOVE, BELOW, IntArc, MarkingSet
from .rootlat import Root


class ModinvError(ValueError):
    pass


class LoopError(ModinvError):
    def __init__(self, orbit):
        super().__init__(f"modified meander through {sorted(orbit)} is a loop")
        self.orbit = sorted(orbit)


LOOP, EDGE_CASE = "loop", "edge"


def anti_toeplitz_involution(m: int, shift: int = 1, context: str = LOOP, odd: bool = False) -> dict[int, int]:
    """Local involution on the points of an extended marking component.

    Points are numbered 0..N-1 from left to right, where N = 2m, or 2m-1
    when ``odd`` (the centre is then point m-1).  ``m`` counts the points
    left of the centre (including the centre when odd).  The cascade on
    these points is p <-> N-1-p.

    In the loop context the left point L_a (a = 1..m) is joined to the
    right point R_{a-shift} (indices mod m), where R_b is the cascade
    partner of L_b.  In the edge context the anti-Jordan pattern is built:
    L_1 is fixed and L_{a+1} is joined to R_a, so that together with the
    cascade the points form one path.
    """
    if m < 1:
        raise ModinvError("block size must be positive")
    if not 0 <= shift < max(m, 1) and not (m == 1 and shift in (0, 1)):
        raise ModinvError(f"shift {shift} out of range for block size {m}")
    N = 2 * m - 1 if odd else 2 * m
    L = lambda a: a - 1                       # noqa: E731
    R = lambda a: N - a                       # noqa: E731  cascade partner of L_a
    sigma = {p: p for p in range(N)}
    if context == LOOP:
        if odd:
            raise ModinvError("loop context never meets the centre")
        if gcd(shift, m) != 1:
            raise ModinvError(f"shift {shift} is not coprime to block size {m}")
        for a in range(1, m + 1):
            b = (a - 1 - shift) % m + 1
            sigma[L(a)] = R(b)
            sigma[R(b)] = L(a)
    elif context == EDGE_CASE:
        for a in range(1, m):
            if odd and a + 1 == m:
                # L_m is the centre
                sigma[m - 1] = R(a)
                sigma[R(a)] = m - 1
            else:
                sigma[L(a + 1)] = R(a)
                sigma[R(a)] = L(a + 1)
    else:
        raise ModinvError(f"unknown context {context!r}")
    return sigma


def local_orbits(sigma: dict[int, int], N: int) -> list[tuple[list[int], str]]:
    """Orbits of <kappa, sigma> on 0..N-1 with their type (edge/loop)."""
    kappa = {p: N - 1 - p for p in range(N)}
    return _orbits(range(N), kappa, sigma)


def _orbits(points, f, g):
    seen, out = set(), []
    for p in points:
        if p in seen:
            continue
        orb, stack = set(), [p]
        while stack:
            x = stack.pop()
            if x in orb:
                continue
            orb.add(x)
            stack += [f[x], g[x]]
        seen |= orb
        is_edge = any(f[x] == x or g[x] == x for x in orb)
        out.append((sorted(orb), "edge" if is_edge else "loop"))
    return out


@dataclass(frozen=True)
class IntegerInvolution:
    side: str
    map: tuple[int, ...]          # map[p-1] = image of p

    def __call__(self, p: int) -> int:
        return self.map[p - 1]

    def arcs(self) -> list[tuple[int, int]]:
        return [(p, q) for p, q in enumerate(self.map, 1) if p < q]

    def fixed(self) -> list[int]:
        return [p for p, q in enumerate(self.map, 1) if p == q]


def cascade(dp: DoublePartition, side: str) -> IntegerInvolution:
    return IntegerInvolution(side, tuple(dp.kappa(side, p) for p in range(1, dp.n + 1)))


@dataclass
class Replacement:
    """Record of one anti-Toeplitz rewiring inside a block."""
    side: str
    block: tuple[int, int]
    first: int            # first marked cascade index r
    last: int             # last marked cascade index s-1
    m: int
    context: str
    shift: int
    points: list[int]
    arcs_before: list[tuple[int, int]]
    arcs_after: list[tuple[int, int]]


def marked_runs(block: tuple[int, int], marks: list[IntArc]) -> list[tuple[int, int]]:
    l, r = block
    idx = sorted(a.i - l + 1 for a in marks if l <= a.i and a.j <= r)
    for a in marks:
        if l <= a.i <= r and a.i + a.j != l + r:
            raise ModinvError(f"marked arc {a.as_list()} is not a cascade arc of block {[l, r]}")
    runs = []
    for c in idx:
        if runs and runs[-1][1] == c - 1:
            runs[-1][1] = c
        else:
            runs.append([c, c])
    return [tuple(x) for x in runs]


def modified_involution(dp: DoublePartition, side: str, marks: MarkingSet, shifts=None):
    """sigma on one side, and the list of rewirings performed."""
    shifts = shifts or {}
    image = list(cascade(dp, side).map)
    reps = []
    for block in dp.partition(side):
        l, rt = block
        size = rt - l + 1
        half = size // 2
        for first, last in marked_runs(block, marks.on(side)):
            s = last + 1
            if last < half:
                ctx, odd, top = LOOP, False, s
            elif size % 2 == 0:
                ctx, odd, top = EDGE_CASE, False, s - 1
            else:
                ctx, odd, top = EDGE_CASE, True, s
            m = top - first + 1
            shift = shifts.get((side, l + first - 1), 1 if m > 1 else 0)
            loc = anti_toeplitz_involution(m, shift, ctx, odd)
            N = 2 * m - 1 if odd else 2 * m
            left = [l + first - 1 + k for k in range(m)]
            pts = sorted(set(left) | {l + rt - p for p in left})
            assert len(pts) == N
            before = sorted({tuple(sorted((p, image[p - 1]))) for p in pts if image[p - 1] != p})
            for a, p in enumerate(pts):
                image[p - 1] = pts[loc[a]]
            after = sorted({tuple(sorted((p, image[p - 1]))) for p in pts if image[p - 1] != p})
            reps.append(Replacement(side, block, first, last, m, ctx, shift, pts, before, after))
    return IntegerInvolution(side, tuple(image)), reps


def modified_involutions(dp: DoublePartition, marks: MarkingSet, shifts=None):
    sp, rp = modified_involution(dp, ABOVE, marks, shifts)
    sm, rm = modified_involution(dp, BELOW, marks, shifts)
    return sp, sm, rp + rm


@dataclass
class Edge:
    points: tuple[int, ...]       # phi(1..e)
    sides: tuple[str, ...]        # side of the arc joining phi(i), phi(i+1)
    signs: tuple[int, ...]        # eps_i

    @property
    def e(self) -> int:
        return len(self.points)

    def phi(self, t: int) -> int:
        return self.points[t - 1]

    def beta(self, i: int) -> Root:
        return Root(self.points[i - 1], self.points[i])

    def value(self, i: int) -> Root:
        """eps_i beta_i, the root drawn by the i-th arc."""
        b = self.beta(i)
        return b if self.signs[i - 1] == 1 else -b

    def values(self) -> list[Root]:
        return [self.value(i) for i in range(1, self.e)]

    def with_signs(self, signs) -> "Edge":
        return Edge(self.points, self.sides, tuple(signs))

    def as_dict(self):
        return {"points": list(self.points), "sides": list(self.sides), "signs": list(self.signs)}


def drawn_sign(side: str, p: int, q: int) -> int:
    """Sign making eps (eps_p - eps_q) the drawn root: above positive, below negative."""
    positive = p < q
    return 1 if positive == (side == ABOVE) else -1


def edge_from_points(points, sides) -> Edge:
    signs = tuple(drawn_sign(sides[k], points[k], points[k + 1]) for k in range(len(points) - 1))
    return Edge(tuple(points), tuple(sides), signs)


def decompose(sp: IntegerInvolution, sm: IntegerInvolution):
    """Orbits of <sigma+, sigma-> as edges in traversal order, plus fully fixed points."""
    n = len(sp.map)
    plus = {p: sp(p) for p in range(1, n + 1)}
    minus = {p: sm(p) for p in range(1, n + 1)}
    edges, fixed = [], []
    for orb, kind in _orbits(range(1, n + 1), plus, minus):
        if kind == "loop":
            raise LoopError(orb)
        if len(orb) == 1:
            fixed.append(orb[0])
            continue
        ends = [p for p in orb if plus[p] == p or minus[p] == p]
        by_plus = [p for p in ends if plus[p] == p]
        start = min(by_plus) if by_plus else min(ends)
        pts, sides = [start], []
        side = BELOW if plus[start] == start else ABOVE
        while True:
            f = plus if side == ABOVE else minus
            q = f[pts[-1]]
            if q == pts[-1]:
                break
            pts.append(q)
            sides.append(side)
            side = BELOW if side == ABOVE else ABOVE
        if len(pts) != len(orb):
            raise ModinvError(f"traversal of orbit {orb} from {start} is incomplete")
        edges.append(edge_from_points(pts, sides))
    edges.sort(key=lambda E: min(E.points))
    return edges, sorted(fixed)


@dataclass
class AdaptedPairData:
    S: list[Root]
    sides: dict                   # root -> side
    h: list[Fraction]
    fully_fixed: list[int]

    @property
    def S_plus(self):
        return [r for r in self.S if r.positive]

    @property
    def S_minus(self):
        return [r for r in self.S if not r.positive]


def min_norm_h(S: list[Root], n: int) -> list[Fraction]:
    """Minimal-norm solution of gamma(h) = -1 for gamma in S (trace zero)."""
    if not S:
        return [Fraction(0)] * n
    A = sympy.Matrix([r.vector(n) for r in S])
    if A.rank() != len(S):
        raise ModinvError(f"S is linearly dependent: {[str(r) for r in S]}")
    b = sympy.Matrix([-1] * len(S))
    z = (A * A.T).LUsolve(b)
    h = A.T * z
    return [Fraction(int(sympy.fraction(x)[0]), int(sympy.fraction(x)[1])) for x in h]


def adapted_pair(edges: list[Edge], fixed: list[int], dp: DoublePartition) -> AdaptedPairData:
    S, sides = [], {}
    for E in edges:
        for i in range(1, E.e):
            r = E.value(i)
            S.append(r)
            sides[r] = E.sides[i - 1]
    return AdaptedPairData(S, sides, min_norm_h(S, dp.n), list(fixed))


def meander_orbits_kappa(dp: DoublePartition) -> int:
    """Number of orbits of the cyclic group generated by kappa+ kappa-."""
    kp, km = cascade(dp, ABOVE), cascade(dp, BELOW)
    seen, count = set(), 0
    for p in range(1, dp.n + 1):
        if p in seen:
            continue
        count += 1
        x = p
        while x not in seen:
            seen.add(x)
            x = kp(km(x))
    return count
