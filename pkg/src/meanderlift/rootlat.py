"""Root lattice arithmetic for sl_n (type A_{n-1}).

A root eps_i - eps_j is stored as the ordered pair (i, j) with 1-based
points.  Simple systems of type A are exactly the point chains: the chain
(c_1, ..., c_m) gives the roots (c_1, c_2), ..., (c_{m-1}, c_m).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence


class RootError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Root:
    i: int
    j: int

    def __post_init__(self):
        if self.i == self.j:
            raise RootError(f"trivial root ({self.i},{self.j})")

    @property
    def positive(self) -> bool:
        return self.i < self.j

    def __neg__(self) -> "Root":
        return Root(self.j, self.i)

    def vector(self, n: int) -> list[int]:
        v = [0] * n
        v[self.i - 1] += 1
        v[self.j - 1] -= 1
        return v

    def as_list(self) -> list[int]:
        return [self.i, self.j]

    def __str__(self):
        return f"({self.i},{self.j})"

    def __repr__(self):
        return f"Root({self.i}, {self.j})"


def simple(k: int) -> Root:
    """The simple root alpha_k = eps_k - eps_{k+1}."""
    return Root(k, k + 1)


def support(r: Root) -> set[int]:
    lo, hi = sorted((r.i, r.j))
    return set(range(lo, hi))


def add_roots(a: Root, b: Root) -> Root | None:
    """a + b when it is a root, else None (zero or not a root)."""
    if a.j == b.i and a.i != b.j:
        return Root(a.i, b.j)
    if b.j == a.i and b.i != a.j:
        return Root(b.i, a.j)
    return None


def pairing(a: Root, b: Root) -> int:
    """Standard inner product of eps_a.i - eps_a.j with eps_b.i - eps_b.j."""
    return ((a.i == b.i) - (a.i == b.j)) - ((a.j == b.i) - (a.j == b.j))


def all_roots(n: int) -> list[Root]:
    return [Root(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i != j]


@dataclass(frozen=True)
class PointChain:
    points: tuple[int, ...]

    def __post_init__(self):
        if len(self.points) < 1:
            raise RootError("empty chain")
        if len(set(self.points)) != len(self.points):
            raise RootError(f"chain repeats a point: {self.points}")

    def __len__(self):
        return len(self.points)

    def position(self) -> dict[int, int]:
        return {p: k for k, p in enumerate(self.points)}


def chain_to_simple_system(c: PointChain | Sequence[int]) -> list[Root]:
    pts = c.points if isinstance(c, PointChain) else tuple(c)
    PointChain(tuple(pts))
    return [Root(pts[k], pts[k + 1]) for k in range(len(pts) - 1)]


def simple_system_to_chain(roots: Iterable[Root]) -> PointChain:
    """Recover the point chain of a type-A simple system given in any order.

    Raises RootError naming the offending pair when the roots do not have
    the A_m Cartan pattern (a path with aligned arrows).
    """
    roots = list(roots)
    if not roots:
        raise RootError("empty simple system")
    for x in range(len(roots)):
        for y in range(x + 1, len(roots)):
            p = pairing(roots[x], roots[y])
            if p not in (0, -1):
                raise RootError(f"pairing of {roots[x]} and {roots[y]} is {p}")
    succ, pred = {}, {}
    for r in roots:
        if r.i in succ or r.j in pred:
            raise RootError(f"{r} branches the chain")
        succ[r.i] = r.j
        pred[r.j] = r.i
    starts = [p for p in succ if p not in pred]
    if len(starts) != 1:
        raise RootError(f"not a single chain (starts {sorted(starts)})")
    pts = [starts[0]]
    while pts[-1] in succ:
        pts.append(succ[pts[-1]])
    if len(pts) != len(roots) + 1:
        raise RootError("simple system contains a cycle")
    return PointChain(tuple(pts))


def in_positive_cone(r: Root, chain: PointChain) -> bool:
    """Is r in N Pi where Pi is the simple system of the chain?"""
    pos = chain.position()
    return r.i in pos and r.j in pos and pos[r.i] < pos[r.j]


@dataclass(frozen=True)
class WeylWord:
    letters: tuple[int, ...]
    permutation: tuple[int, ...]

    def __post_init__(self):
        if apply_word(self.letters, len(self.permutation)) != self.permutation:
            raise RootError("word does not multiply to the stored permutation")


def apply_word(letters: Sequence[int], n: int) -> tuple[int, ...]:
    """Product s_{a_1} s_{a_2} ... acting on positions of the identity.

    Right multiplication by s_k swaps the entries in positions k and k+1,
    so w = s_{a_1}...s_{a_t} in one-line notation is obtained by applying
    the position swaps left to right.
    """
    w = list(range(1, n + 1))
    for k in letters:
        if not 1 <= k < n:
            raise RootError(f"letter s_{k} out of range for n={n}")
        w[k - 1], w[k] = w[k], w[k - 1]
    return tuple(w)


def inversions(perm: Sequence[int]) -> int:
    return sum(1 for a in range(len(perm)) for b in range(a + 1, len(perm)) if perm[a] > perm[b])


def reduced_word(perm: Sequence[int]) -> tuple[int, ...]:
    """Reduced word for a one-line permutation via bubble sort."""
    w = list(perm)
    swaps = []
    changed = True
    while changed:
        changed = False
        for k in range(len(w) - 1):
            if w[k] > w[k + 1]:
                w[k], w[k + 1] = w[k + 1], w[k]
                swaps.append(k + 1)
                changed = True
    # sorting perm by swaps s_{k_1},...,s_{k_t} means perm * s_{k_1}...s_{k_t} = id
    return tuple(reversed(swaps))


def weyl_word(target: Sequence[Root]) -> WeylWord:
    """The Weyl group element taking pi to the given full simple system."""
    chain = simple_system_to_chain(target)
    n = len(chain)
    if sorted(chain.points) != list(range(1, n + 1)):
        raise RootError("simple system does not have full rank")
    perm = chain.points
    return WeylWord(reduced_word(perm), tuple(perm))
