"""End-to-end construction for one double partition.

    dp -> half-integer meanders -> marks -> sigma+/- -> edges, S, h
       -> straightened edges -> one chain -> regular nilpotent y
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .assemble import NilpotentLift, lift
from .biparabolic import DoublePartition
from .halfint import MarkingSet, build_extended, halfint_meanders, select_markings
from .modinv import AdaptedPairData, Edge, Replacement, adapted_pair, decompose, modified_involutions
from .straighten import StraightenedEdge, analyze_edge, edge_value, straighten


@dataclass
class Policy:
    marks: list | None = None          # explicit (side, i, j) integer arcs
    shifts: dict = field(default_factory=dict)      # (side, first point) -> shift
    turning: dict = field(default_factory=dict)     # point label -> "above" | "below"
    join: str = "plus"                 # preferred cross join
    fixed_chain: list | None = None    # explicit chain when S is empty

    @classmethod
    def from_dict(cls, d: dict | None) -> "Policy":
        d = dict(d or {})
        shifts = {}
        for key, v in (d.get("shifts") or {}).items():
            side, p = key.split(":") if isinstance(key, str) else key
            shifts[(side, int(p))] = int(v)
        turning = {int(k): v for k, v in (d.get("turning") or {}).items()}
        pol = cls(d.get("marks"), shifts, turning, d.get("join", "plus"), d.get("fixed_chain"))
        if pol.join not in ("plus", "minus"):
            raise ValueError(f"join preference must be 'plus' or 'minus', not {pol.join!r}")
        return pol

    def as_dict(self) -> dict:
        return {
            "marks": self.marks,
            "shifts": {f"{s}:{p}": v for (s, p), v in sorted(self.shifts.items())},
            "turning": {str(k): v for k, v in sorted(self.turning.items())},
            "join": self.join,
            "fixed_chain": self.fixed_chain,
        }


@dataclass
class Construction:
    dp: DoublePartition
    policy: Policy
    marks: MarkingSet
    meander_count: int
    replacements: list[Replacement]
    edges: list[Edge]
    fixed: list[int]
    pair: AdaptedPairData
    straightened: list[StraightenedEdge]
    lift: NilpotentLift


def construct(dp: DoublePartition, policy: Policy | None = None) -> Construction:
    policy = policy or Policy()
    ms = halfint_meanders(build_extended(dp))
    marks = select_markings(ms, dp.n, policy.marks)
    sp, sm, reps = modified_involutions(dp, marks, policy.shifts)
    edges, fixed = decompose(sp, sm)
    pair = adapted_pair(edges, fixed, dp)
    ses = []
    for E in edges:
        td = analyze_edge(E, dp, policy.turning)
        se = straighten(E, td, dp)
        edge_value(se, dp)
        ses.append(se)
    nl = lift(dp, pair.S, ses, fixed, policy.join, policy.fixed_chain)
    return Construction(dp, policy, marks, len(ms), reps, edges, fixed, pair, ses, nl)
