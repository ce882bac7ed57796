"""Straightening of a single edge.

Along an edge phi(1), ..., phi(e) the drawn arcs carry arrows; at a turning
point the two arrows disagree.  One short line at every internal turning
point is marked and replaced by an external arc so that all arrows align
and the new roots form a simple system of type A_{e-1} (a single chain).
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .biparabolic import DoublePartition
from .modinv import Edge
from .rootlat import PointChain, Root, RootError, in_positive_cone, simple_system_to_chain

SOURCE, SINK = "A", "B"


class StraightenError(ValueError):
    pass


@dataclass
class TurningData:
    T: list[int]
    T0: list[int]
    kind: dict             # t -> "A" | "B"
    signature: dict        # internal t -> +1 | -1
    marked: dict           # marked value index -> turning index it is assigned to

    @property
    def assignment(self) -> dict:
        return {t: i for i, t in self.marked.items()}


def point_kind(E: Edge, t: int) -> str | None:
    """'A' for a source, 'B' for a sink, None where the arrows align."""
    p = E.phi(t)
    outs, ins = 0, 0
    for i in (t - 1, t):
        if 1 <= i < E.e:
            v = E.value(i)
            if v.i == p:
                outs += 1
            else:
                ins += 1
    if ins == 0:
        return SOURCE
    if outs == 0:
        return SINK
    return None


def is_internal_turning(E: Edge, t: int) -> bool:
    a, b, c = E.phi(t - 1), E.phi(t), E.phi(t + 1)
    return (b - a) * (b - c) < 0


def analyze_edge(E: Edge, dp: DoublePartition, overrides=None, strict: bool = True) -> TurningData:
    """Turning points, their types, and the marking with signatures.

    ``overrides`` maps a point label phi(t) to "above" or "below", used
    only where both boundary values are non-nil.  With ``strict`` off the
    geometric turning test is not cross-checked against the arrows (used
    for edges whose signs were altered on purpose).
    """
    overrides = overrides or {}
    e = E.e
    kind = {}
    T0 = []
    for t in range(1, e + 1):
        k = point_kind(E, t)
        internal = 1 < t < e
        if strict and internal and (k is not None) != is_internal_turning(E, t):
            raise StraightenError(f"turning test disagrees with arrows at phi({t})={E.phi(t)}")
        if k is not None:
            kind[t] = k
            if internal:
                T0.append(t)
        elif not internal:
            raise StraightenError(f"end phi({t}) is neither a source nor a sink")
    T = sorted(kind)
    for a, b in zip(T, T[1:]):
        if kind[a] == kind[b]:
            raise StraightenError(f"turning points phi({a}) and phi({b}) have the same type")

    nil = {i: dp.is_nil(E.beta(i)) for i in range(1, e)}
    marked, sg = {}, {}

    runs = []
    for t in T0:
        if runs and runs[-1][-1] == t - 1:
            runs[-1].append(t)
        else:
            runs.append([t])
    for run in runs:
        t = run[0]
        if len(run) == 1:
            up, down = nil[t - 1], nil[t]
            if not up and not down:
                choice = overrides.get(E.phi(t), "above")
                if choice not in ("above", "below"):
                    raise StraightenError(f"override {choice!r} at {E.phi(t)}")
                i = t - 1 if choice == "above" else t
            elif up and not down:
                i = t
            else:
                i = t - 1
            marked[i] = t
            sg[t] = 1 if i == t - 1 else -1
            continue
        last = run[-1]
        for u in run[:-1]:
            marked[u - 1] = u
            sg[u] = 1
        if last < e - 1 and not nil[last]:
            marked[last] = last
            sg[last] = -1
        else:
            marked[last - 1] = last
            sg[last] = 1
    for t in T0:
        if sg[t] == -1 and nil[t]:
            raise StraightenError(f"negative signature at phi({t}) with nil value below")
    return TurningData(T, T0, kind, sg, marked)


@dataclass
class ExternalArc:
    index: int             # replaced value index
    turning: int           # turning index it is assigned to
    side: str              # "left" (type A) | "right" (type B)
    start: int             # phi index where the span starts
    stop: int              # phi index where the span ends (inclusive)
    anchor: int            # phi index of the turning point the arc is attached to
    root: Root

    def support(self) -> range:
        return range(self.start, self.stop)


@dataclass
class StraightenedEdge:
    edge: Edge
    turning: TurningData
    piStar: list[Root]
    chain: PointChain
    external: list[ExternalArc] = field(default_factory=list)
    order: list[int] = field(default_factory=list)

    @property
    def aStar(self) -> int:
        return self.chain.points[0]

    @property
    def bStar(self) -> int:
        return self.chain.points[-1]

    @property
    def value(self) -> Root:
        return Root(self.aStar, self.bStar)


def _eps(E: Edge, i: int) -> int:
    return E.signs[i - 1]


def _signed(sign: int, p: int, q: int) -> Root:
    return Root(p, q) if sign == 1 else Root(q, p)


def external_arcs(E: Edge, td: TurningData) -> list[ExternalArc]:
    out = []
    for i, t in sorted(td.marked.items()):
        x = td.kind[t]
        y = SINK if x == SOURCE else SOURCE
        side = "left" if x == SOURCE else "right"
        if td.signature[t] == -1:
            upper = None
            for u in range(t - 1, 0, -1):
                if u in td.signature and td.kind[u] == x and td.signature[u] == -1:
                    upper = u
                    break
            lo = 0 if upper is None else upper
            cands = [u for u in td.T if u > lo and td.kind[u] == y]
            if not cands or cands[0] >= t:
                raise StraightenError(f"no target above phi({t}) for the external arc")
            s = cands[0]
            root = _signed(_eps(E, t), E.phi(s), E.phi(t + 1))
            out.append(ExternalArc(t, t, side, s, t + 1, s, root))
        else:
            cands = [u for u in td.T if u > t and td.kind[u] == y]
            if not cands:
                raise StraightenError(f"no target below phi({t}) for the external arc")
            s = cands[0]
            root = _signed(_eps(E, t - 1), E.phi(t - 1), E.phi(s))
            out.append(ExternalArc(t - 1, t, side, t - 1, s, s, root))
    return out


def triangular_order(E: Edge, arcs: list[ExternalArc]) -> list[int]:
    """An order on value indices making the change of basis unitriangular.

    Unmarked indices come first.  A marked index follows every marked index
    lying in the support of its external arc.  Raises if the dependency
    relation has a cycle.
    """
    by_index = {a.index: a for a in arcs}
    unmarked = [i for i in range(1, E.e) if i not in by_index]
    deps = {i: {j for j in by_index[i].support() if j in by_index and j != i} for i in by_index}
    order, done = list(unmarked), set()
    pending = sorted(by_index)
    while pending:
        ready = [i for i in pending if deps[i] <= done]
        if not ready:
            raise StraightenError(f"external arc supports are cyclic on {pending}")
        for i in ready:
            order.append(i)
            done.add(i)
        pending = [i for i in pending if i not in done]
    return order


def change_of_basis(E: Edge, arcs: list[ExternalArc]) -> dict:
    """Matrix C with beta*_i = sum_j C[i][j] eps_j beta_j (sparse rows)."""
    C = {i: {i: 1} for i in range(1, E.e)}
    for a in arcs:
        i = a.index
        for j in a.support():
            if j != i:
                C[i][j] = C[i].get(j, 0) + _eps(E, i) * _eps(E, j)
    return C


def straighten(E: Edge, td: TurningData, dp: DoublePartition) -> StraightenedEdge:
    if E.e == 2 or not td.T0:
        chain = simple_system_to_chain(E.values())
        return StraightenedEdge(E, td, E.values(), chain, [], list(range(1, E.e)))
    arcs = external_arcs(E, td)
    star = {i: E.value(i) for i in range(1, E.e)}
    for a in arcs:
        if not dp.in_K(a.root):
            raise StraightenError(
                f"beta*_{a.index} = {a.root} over phi[{a.start}..{a.stop}] is not in K")
        star[a.index] = a.root
    piStar = [star[i] for i in range(1, E.e)]
    try:
        chain = simple_system_to_chain(piStar)
    except RootError as exc:
        raise StraightenError(f"straightened arcs do not form one edge: {exc}") from None
    if sorted(chain.points) != sorted(E.points):
        raise StraightenError("straightened chain misses points of the edge")
    for i in range(1, E.e):
        if not in_positive_cone(E.value(i), chain):
            raise StraightenError(f"eps_{i} beta_{i} = {E.value(i)} is not in N Pi*")
    order = triangular_order(E, arcs)
    return StraightenedEdge(E, td, piStar, chain, arcs, order)


def edge_value(se: StraightenedEdge, dp: DoublePartition) -> Root:
    """eps_{a*} - eps_{b*}, certified in -K (and in -R_* when nothing moved)."""
    v = se.value
    if not dp.in_K(-v):
        raise StraightenError(f"edge value {v} is not in -K")
    if not se.external and not (dp.in_R(v) and not dp.in_R(-v)):
        raise StraightenError(f"edge value {v} of an already straight edge is not in -R_*")
    pa, pb = predicted_ends(se)
    if (pa, pb) != (se.aStar, se.bStar):
        raise StraightenError(
            f"chain ends ({se.aStar},{se.bStar}) differ from the predicted ({pa},{pb})")
    return v


def predicted_ends(se: StraightenedEdge) -> tuple[int, int]:
    """Start and finish of E* read off from the turning data alone.

    The start is the source right after the last sink of negative
    signature (or the first source); the finish is the sink right after
    the last source of negative signature (or the first sink).
    """
    td, E = se.turning, se.edge

    def after_last_negative(neg_kind, want):
        neg = [t for t in td.T0 if td.kind[t] == neg_kind and td.signature[t] == -1]
        lo = neg[-1] if neg else 0
        cands = [t for t in td.T if t > lo and td.kind[t] == want]
        return E.phi(cands[0])

    return after_last_negative(SINK, SOURCE), after_last_negative(SOURCE, SINK)
