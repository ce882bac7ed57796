"""Half-integer involutions, fictitious completion and the choice of marks.

Simple roots alpha_1..alpha_{n-1} sit at the half-integer points of the
line.  On each connected component of pi+ (resp. pi-) the diagram
involution iota+ (resp. iota-) reverses the run.  Where one of the two is
undefined, fictitious arcs (and possibly a fictitious root) are adjoined so
that both involutions become total.  The orbits of the group they generate
are the half-integer meanders; exactly one non-fictitious arc per orbit is
marked and translated to an integer arc.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

from .biparabolic import DoublePartition

ABOVE, BELOW = "+", "-"


class MarkingError(ValueError):
    pass


def other(side: str) -> str:
    return BELOW if side == ABOVE else ABOVE


@dataclass
class ExtendedSimpleSystem:
    n: int
    real: list[int]
    fictitious: list[int]
    iota: dict            # side -> {index: index}
    fict_arcs: dict       # side -> set of frozenset({a, b})

    def is_fictitious_arc(self, side: str, a: int, b: int) -> bool:
        return frozenset((a, b)) in self.fict_arcs[side]

    def elements(self) -> list[int]:
        return self.real + self.fictitious


def _diagram_involution(runs) -> dict[int, int]:
    out = {}
    for lo, hi in runs:
        for k in range(lo, hi + 1):
            out[k] = lo + hi - k
    return out


def _runs(dp: DoublePartition, side: str):
    # block [l, r] carries the simple roots alpha_l .. alpha_{r-1}
    return [(l, r - 1) for l, r in dp.partition(side) if r > l]


def build_extended(dp: DoublePartition) -> ExtendedSimpleSystem:
    iota = {ABOVE: _diagram_involution(_runs(dp, ABOVE)),
            BELOW: _diagram_involution(_runs(dp, BELOW))}
    fict = {ABOVE: set(), BELOW: set()}
    real = list(range(1, dp.n))
    extra = []
    nxt = dp.n

    for first in (ABOVE, BELOW):
        missing = other(first)
        for a in real:
            if a in iota[missing]:
                continue
            b = a
            side = first
            while True:
                b = iota[side][b]
                side = other(side)
                if b not in iota[side]:
                    break
            if side == missing:
                # halted where the missing involution is undefined: join a to b
                iota[missing][a] = b
                iota[missing][b] = a
                fict[missing].add(frozenset((a, b)))
            else:
                new = nxt
                nxt += 1
                extra.append(new)
                iota[missing][a] = new
                iota[missing][new] = a
                iota[first][new] = b
                iota[first][b] = new
                fict[missing].add(frozenset((a, new)))
                fict[first].add(frozenset((new, b)))
    return ExtendedSimpleSystem(dp.n, real, extra, iota, fict)


@dataclass(frozen=True)
class HalfArc:
    side: str
    a: int
    b: int
    fictitious: bool

    @property
    def is_self(self) -> bool:
        return self.a == self.b


@dataclass
class HalfIntMeander:
    elements: list[int]
    arcs: list[HalfArc]
    kind: str  # "edge" or "loop"

    @property
    def ends(self) -> list[HalfArc]:
        return [a for a in self.arcs if a.is_self]


def halfint_meanders(ess: ExtendedSimpleSystem) -> list[HalfIntMeander]:
    seen = set()
    out = []
    for start in ess.elements():
        if start in seen:
            continue
        orbit, stack = set(), [start]
        while stack:
            x = stack.pop()
            if x in orbit:
                continue
            orbit.add(x)
            for side in (ABOVE, BELOW):
                stack.append(ess.iota[side][x])
        seen |= orbit
        arcs = []
        for side in (ABOVE, BELOW):
            done = set()
            for x in sorted(orbit):
                y = ess.iota[side][x]
                key = frozenset((x, y))
                if key in done:
                    continue
                done.add(key)
                arcs.append(HalfArc(side, min(x, y), max(x, y), ess.is_fictitious_arc(side, x, y)))
        kind = "edge" if any(a.is_self for a in arcs) else "loop"
        out.append(HalfIntMeander(sorted(orbit), arcs, kind))
    return out


@dataclass(frozen=True, order=True)
class IntArc:
    """An integer arc (i, j), i < j, on one side of the line."""
    side: str
    i: int
    j: int

    def support_size(self) -> int:
        return self.j - self.i

    def as_list(self):
        return [self.side, self.i, self.j]


def translate(arc: HalfArc, n: int) -> IntArc:
    if arc.fictitious or arc.b >= n:
        raise MarkingError(f"fictitious arc {arc} has no integer translate")
    return IntArc(arc.side, arc.a, arc.b + 1)


@dataclass
class MarkingSet:
    marks: list[IntArc]
    policy: str
    per_orbit: list[tuple[int, IntArc]] = field(default_factory=list)

    def on(self, side: str) -> list[IntArc]:
        return [m for m in self.marks if m.side == side]

    def as_list(self):
        return [m.as_list() for m in sorted(self.marks)]


def candidates(m: HalfIntMeander, n: int) -> list[IntArc]:
    pool = m.ends if m.kind == "edge" else m.arcs
    return [translate(a, n) for a in pool if not a.fictitious]


def _default_key(arc: IntArc):
    return (arc.support_size(), 0 if arc.side == ABOVE else 1, arc.i)


def select_markings(ms: list[HalfIntMeander], n: int, explicit=None) -> MarkingSet:
    """One mark per half-integer meander.

    Default: smallest support, then above before below, then leftmost.
    ``explicit`` is an iterable of (side, i, j) integer arcs; each orbit
    must receive exactly one of them.
    """
    wanted = None
    if explicit is not None:
        wanted = {IntArc(s, min(i, j), max(i, j)) for s, i, j in explicit}
    marks, per_orbit = [], []
    for k, m in enumerate(ms):
        cands = candidates(m, n)
        if not cands:
            raise MarkingError(f"meander {m.elements} has no markable arc (both ends fictitious)")
        if wanted is None:
            pick = min(cands, key=_default_key)
        else:
            hit = [c for c in cands if c in wanted]
            if len(hit) != 1:
                raise MarkingError(
                    f"explicit marks give {len(hit)} legal arcs on meander {m.elements}; "
                    f"legal choices are {[c.as_list() for c in cands]}")
            pick = hit[0]
        marks.append(pick)
        per_orbit.append((k, pick))
    if wanted is not None and wanted - set(marks):
        raise MarkingError(f"explicit marks not used: {[c.as_list() for c in sorted(wanted - set(marks))]}")
    return MarkingSet(marks, "explicit" if explicit is not None else "smallest-support", per_orbit)


def meander_count(dp: DoublePartition) -> int:
    """Orbits of the group generated by both involutions (one mark each)."""
    return len(halfint_meanders(build_extended(dp)))


def product_orbit_count(dp: DoublePartition) -> int:
    """Orbits of the cyclic group generated by iota+ iota- on the extended system.

    A loop of the group splits into two orbits of the product, an edge
    stays one; this count is the index of the canonical truncation.
    """
    ess = build_extended(dp)
    seen, count = set(), 0
    for x in ess.elements():
        if x in seen:
            continue
        count += 1
        while x not in seen:
            seen.add(x)
            x = ess.iota[ABOVE][ess.iota[BELOW][x]]
    return count


def dumps(ms: MarkingSet) -> str:
    return json.dumps(ms.as_list())
