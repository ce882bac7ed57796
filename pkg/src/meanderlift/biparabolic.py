"""Double partitions of [1, n] and the root classification of a biparabolic.

The biparabolic q is fixed by two interval partitions J+ and J- of [1, n].
A simple root alpha_k lies in pi+ when k and k+1 sit in the same block of
J+ (similarly for pi-).  Membership of eps_i - eps_j in R, M, K, ... is
then decided by comparing the blocks of i and j, which is O(1).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

from .rootlat import Root, support


class PartitionError(ValueError):
    """Input does not describe an admissible double partition."""


def normalize(spec, n: int) -> tuple[tuple[int, int], ...]:
    """Accept intervals [[l, r], ...] or part sizes [a, b, ...]."""
    spec = list(spec)
    if not spec:
        raise PartitionError("empty partition")
    if all(isinstance(x, int) for x in spec):
        out, start = [], 1
        for size in spec:
            if size < 1:
                raise PartitionError(f"part size {size} < 1")
            out.append((start, start + size - 1))
            start += size
        ivs = out
    else:
        ivs = [tuple(int(v) for v in x) for x in spec]
    expect = 1
    for iv in ivs:
        if len(iv) != 2 or iv[0] > iv[1]:
            raise PartitionError(f"bad interval {list(iv)}")
        if iv[0] != expect:
            raise PartitionError(f"interval {list(iv)} does not start at {expect} (gap or overlap)")
        expect = iv[1] + 1
    if expect != n + 1:
        raise PartitionError(f"intervals cover [1,{expect - 1}] instead of [1,{n}]")
    return tuple(ivs)


@dataclass(frozen=True)
class RootClass:
    R: bool
    M: bool
    Rstar: bool
    negRstar: bool
    K: bool
    negK: bool
    Kplus: bool
    Kminus: bool

    def names(self) -> list[str]:
        return [k for k, v in self.__dict__.items() if v]


@dataclass(frozen=True)
class ComponentRef:
    jp: int
    jm: int
    interval: tuple[int, int]


class DoublePartition:
    """Admissible pair (J+, J-) of interval partitions of [1, n]."""

    def __init__(self, n: int, jplus, jminus, check: bool = True):
        if n < 2:
            raise PartitionError("n must be at least 2")
        self.n = n
        self.jplus = normalize(jplus, n)
        self.jminus = normalize(jminus, n)
        self._bp = self._block_index(self.jplus)
        self._bm = self._block_index(self.jminus)
        if check:
            both_gap = [k for k in range(1, n) if k in self.gap_plus and k in self.gap_minus]
            if both_gap:
                raise PartitionError(f"alpha_{both_gap[0]} lies in a gap on both sides")
            if self.pi_plus & self.pi_minus == set(range(1, n)):
                raise PartitionError("q equals g (both partitions are the single block)")

    def _block_index(self, ivs):
        idx = [None] * (self.n + 1)
        for b, (l, r) in enumerate(ivs):
            for p in range(l, r + 1):
                idx[p] = b
        return idx

    def __repr__(self):
        return f"DoublePartition({self.n}, {[list(x) for x in self.jplus]}, {[list(x) for x in self.jminus]})"

    def key(self) -> tuple:
        return (self.n, self.jplus, self.jminus)

    def __eq__(self, other):
        return isinstance(other, DoublePartition) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    # simple root subsets -------------------------------------------------
    @cached_property
    def pi_plus(self) -> set[int]:
        return {k for k in range(1, self.n) if self._bp[k] == self._bp[k + 1]}

    @cached_property
    def pi_minus(self) -> set[int]:
        return {k for k in range(1, self.n) if self._bm[k] == self._bm[k + 1]}

    @cached_property
    def gap_plus(self) -> set[int]:
        return set(range(1, self.n)) - self.pi_plus

    @cached_property
    def gap_minus(self) -> set[int]:
        return set(range(1, self.n)) - self.pi_minus

    # blocks --------------------------------------------------------------
    def block(self, side: str, p: int) -> tuple[int, int]:
        if side == "+":
            return self.jplus[self._bp[p]]
        return self.jminus[self._bm[p]]

    def block_index(self, side: str, p: int) -> int:
        return self._bp[p] if side == "+" else self._bm[p]

    def partition(self, side: str):
        return self.jplus if side == "+" else self.jminus

    def kappa(self, side: str, p: int) -> int:
        """Image of p under the cascade involution of its block."""
        l, r = self.block(side, p)
        return l + r - p

    def centre2(self, side: str, p: int) -> int:
        """Doubled centre of the block containing p."""
        l, r = self.block(side, p)
        return l + r

    # classification ------------------------------------------------------
    def same_plus(self, i: int, j: int) -> bool:
        return self._bp[i] == self._bp[j]

    def same_minus(self, i: int, j: int) -> bool:
        return self._bm[i] == self._bm[j]

    def in_R(self, r: Root) -> bool:
        return self.same_plus(r.i, r.j) if r.positive else self.same_minus(r.i, r.j)

    def in_M(self, r: Root) -> bool:
        return self.same_plus(r.i, r.j) and self.same_minus(r.i, r.j)

    def in_K(self, r: Root) -> bool:
        return not self.in_R(r)

    def in_Kplus(self, r: Root) -> bool:
        return r.positive and not self.same_plus(r.i, r.j)

    def in_Kminus(self, r: Root) -> bool:
        return (not r.positive) and not self.same_minus(r.i, r.j)

    def in_Rstar(self, r: Root) -> bool:
        return self.in_R(-r) and not self.in_R(r)

    def is_nil(self, r: Root) -> bool:
        """Support meets a gap on one side or the other."""
        return not self.in_M(r)

    def classify(self, r: Root) -> RootClass:
        R, negR = self.in_R(r), self.in_R(-r)
        return RootClass(
            R=R,
            M=self.in_M(r),
            Rstar=negR and not R,
            negRstar=R and not negR,
            K=not R,
            negK=not negR,
            Kplus=self.in_Kplus(r),
            Kminus=self.in_Kminus(r),
        )

    # components ----------------------------------------------------------
    def component_of(self, p: int) -> ComponentRef:
        jp, jm = self._bp[p], self._bm[p]
        lp, rp = self.jplus[jp]
        lm, rm = self.jminus[jm]
        return ComponentRef(jp, jm, (max(lp, lm), min(rp, rm)))

    def components(self) -> list[ComponentRef]:
        seen, out = set(), []
        for p in range(1, self.n + 1):
            c = self.component_of(p)
            if c.interval not in seen:
                seen.add(c.interval)
                out.append(c)
        return out

    def equicentral(self, p: int) -> bool:
        return self.centre2("+", p) == self.centre2("-", p)

    def same_component(self, p: int, q: int) -> bool:
        return self.same_plus(p, q) and self.same_minus(p, q)

    def linked(self, p: int, q: int) -> bool:
        return self.same_plus(p, q) or self.same_minus(p, q)


def compositions(n: int):
    """All compositions of n as tuples of part sizes."""
    for cuts in itertools.product((False, True), repeat=n - 1):
        parts, size = [], 1
        for c in cuts:
            if c:
                parts.append(size)
                size = 1
            else:
                size += 1
        parts.append(size)
        yield tuple(parts)


def admissible(n: int):
    """All admissible double partitions of [1, n], in a stable order."""
    for cp in compositions(n):
        for cm in compositions(n):
            try:
                yield DoublePartition(n, cp, cm)
            except PartitionError:
                continue


def root_sets_brute(n: int, pi_plus: set[int], pi_minus: set[int]):
    """R enumerated as (N pi+ union -N pi-) intersected with the roots.

    Independent of the block bookkeeping above: builds sums of simple roots
    as coefficient vectors and keeps those that are roots.
    """
    roots = {}
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            coeff = tuple(1 if i <= k < j else 0 for k in range(1, n))
            roots[coeff] = Root(i, j)
    R = set()
    for coeff, r in roots.items():
        supp = {k + 1 for k, c in enumerate(coeff) if c}
        if supp <= pi_plus:
            R.add(r)
        if supp <= pi_minus:
            R.add(-r)
    return R


__all__ = [
    "PartitionError",
    "DoublePartition",
    "RootClass",
    "ComponentRef",
    "normalize",
    "compositions",
    "admissible",
    "support",
]
