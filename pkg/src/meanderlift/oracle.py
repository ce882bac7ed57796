"""Independent exact verification.

Nothing here reuses the construction's shortcuts: ranks come from a
fraction-free elimination on sparse integer rows, brackets are computed on
matrices, and membership claims are re-derived from block indices and
supports.  All failures are reported, never raised, so that a sweep can
keep going.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .biparabolic import DoublePartition
from .halfint import meander_count, product_orbit_count
from .modinv import Edge, drawn_sign
from .rootlat import Root


# exact linear algebra ------------------------------------------------------

def _normalize(row: dict) -> dict:
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            break
    lead = row[min(row)]
    if lead < 0:
        g = -g
    if g not in (0, 1):
        row = {k: v // g for k, v in row.items()}
    return row


def _reduce(row: dict, p: dict, c: int) -> dict:
    a, b = p[c], row[c]
    out = {k: a * v for k, v in row.items()}
    for k, v in p.items():
        w = out.get(k, 0) - b * v
        if w:
            out[k] = w
        else:
            out.pop(k, None)
    return out


def _integral(row: dict) -> dict:
    den = 1
    for v in row.values():
        if isinstance(v, Fraction) and v.denominator != 1:
            den = den * v.denominator // gcd(den, v.denominator)
    return {k: int(v * den) for k, v in row.items() if v}


def echelon(rows) -> dict:
    """Fraction-free row echelon form: {pivot column: integer row}.

    Rational entries are cleared row by row before elimination.
    """
    basis = {}
    for r in rows:
        row = _integral(r)
        while row:
            c = min(row)
            p = basis.get(c)
            if p is None:
                basis[c] = _normalize(row)
                break
            row = _reduce(row, p, c)
            if row:
                row = _normalize(row)
    return basis


def rank(rows) -> int:
    return len(echelon(rows))


def reduced_echelon(rows) -> dict:
    """Echelon form with every pivot column cleared in the other rows."""
    basis = echelon(rows)
    piv = sorted(basis)
    for c in reversed(piv):
        p = basis[c]
        for d in piv:
            if d != c and c in basis[d]:
                basis[d] = _normalize(_reduce(basis[d], p, c))
    return basis


def nullspace(rows, ncols: int) -> list[dict]:
    """Integer basis of {x : row . x = 0 for every row}."""
    basis = reduced_echelon(rows)
    piv = sorted(basis)
    free = [c for c in range(ncols) if c not in basis]
    out = []
    for f in free:
        L = 1
        for c in piv:
            if f in basis[c]:
                a = basis[c][c]
                L = L * abs(a) // gcd(L, a)
        vec = {f: L}
        for c in piv:
            v = basis[c].get(f)
            if v:
                vec[c] = -L * v // basis[c][c]
        out.append(vec)
    return out


def solve_fraction(A: list[list], b: list) -> list[Fraction] | None:
    """Unique solution of a square system by Gauss-Jordan on Fractions."""
    m = len(A)
    M = [[Fraction(x) for x in A[i]] + [Fraction(b[i])] for i in range(m)]
    for c in range(m):
        p = next((r for r in range(c, m) if M[r][c] != 0), None)
        if p is None:
            return None
        M[c], M[p] = M[p], M[c]
        inv = 1 / M[c][c]
        M[c] = [x * inv for x in M[c]]
        for r in range(m):
            if r != c and M[r][c] != 0:
                f = M[r][c]
                M[r] = [x - f * y for x, y in zip(M[r], M[c])]
    return [M[i][m] for i in range(m)]


# matrices ------------------------------------------------------------------

def matmul(a: dict, b: dict) -> dict:
    by_row = {}
    for (k, j), v in b.items():
        by_row.setdefault(k, []).append((j, v))
    out = {}
    for (i, k), u in a.items():
        for j, v in by_row.get(k, ()):
            w = out.get((i, j), 0) + u * v
            if w:
                out[(i, j)] = w
            else:
                out.pop((i, j), None)
    return out


def rank_of(m: dict) -> int:
    rows = {}
    for (i, j), v in m.items():
        if v:
            rows.setdefault(i, {})[j] = v
    return rank(rows.values())


def power_ranks(y: dict, n: int) -> list[int]:
    """rank(y^k) for k = 1..n."""
    out, p = [], dict(y)
    for _ in range(n):
        out.append(rank_of(p))
        p = matmul(p, y)
    return out


def is_regular_nilpotent(y: dict, n: int) -> bool:
    return power_ranks(y, n) == list(range(n - 1, -1, -1))


def root_vector(r: Root, n: int) -> dict:
    return {r.i - 1: 1, r.j - 1: -1}


# truncation and regularity -------------------------------------------------

def _q_roots(dp: DoublePartition):
    """Positions (a, b) with E_ab in q, i.e. eps_b - eps_a in R."""
    n = dp.n
    return [(a, b) for a in range(1, n + 1) for b in range(1, n + 1)
            if a != b and dp.in_R(Root(b, a))]


def _cartan(k: int) -> dict:
    return {(k, k): 1, (k + 1, k + 1): -1}


def _form_rows(xi: dict, basis: list[dict]) -> list[dict]:
    """Rows of B(a, b) = tr(xi [a, b]) on the given basis."""
    left = [matmul(xi, a) for a in basis]
    right = [matmul(a, xi) for a in basis]

    def tr(m, b):
        s = 0
        for (i, j), v in m.items():
            w = b.get((j, i))
            if w:
                s += v * w
        return s

    rows = []
    for ia in range(len(basis)):
        row = {}
        for ib in range(len(basis)):
            if ia == ib:
                continue
            v = tr(left[ia], basis[ib]) - tr(right[ia], basis[ib])
            if v:
                row[ib] = v
        rows.append(row)
    return rows


def _diag_of(c: dict, n: int) -> list[int]:
    """Diagonal of sum c_k H_k (H-coordinates indexed 0..n-2)."""
    d = [0] * n
    for k, v in c.items():
        d[k] += v
        d[k + 1] -= v
    return d


@dataclass
class TruncationCertificate:
    hLambdaBasis: list[list[int]]      # diagonals
    dimension: int
    expected: int
    certified: bool
    status: str                        # certified | indeterminate | falsified
    samples: int
    ranks: list[int]
    index_q: int                       # dim q - max rank of B_xi
    seed: int

    def as_dict(self):
        return {k: getattr(self, k) for k in
                ("hLambdaBasis", "dimension", "expected", "certified", "status", "samples", "ranks", "index_q", "seed")}


def certify_truncation(dp: DoublePartition, S: list[Root], samples: int = 3, seed: int = 0,
                       spread: int = 1000) -> TruncationCertificate:
    n = dp.n
    qroots = _q_roots(dp)
    basis = [_cartan(k) for k in range(1, n)] + [{ab: 1} for ab in qroots]
    dim_q = len(basis)
    rng = random.Random(seed)
    levi = [k - 1 for k in sorted(dp.pi_plus & dp.pi_minus)]
    best_rank, pool, ranks = -1, [], []
    for _ in range(samples):
        xi = {}
        for a, b in qroots:
            xi[(b, a)] = rng.randint(-spread, spread)
        d = [rng.randint(-spread, spread) for _ in range(n)]
        d[-1] = -sum(d[:-1])
        for i, v in enumerate(d, 1):
            if v:
                xi[(i, i)] = v
        rows = _form_rows(xi, basis)
        ech = echelon(rows)
        r = len(ech)
        ranks.append(r)
        h_parts = [{k: v for k, v in vec.items() if k < n - 1} for vec in nullspace(rows, dim_q)]
        h_parts = [v for v in h_parts if v]
        if r > best_rank:
            best_rank, pool = r, h_parts
        elif r == best_rank:
            pool += h_parts
    gens = [{k: 1} for k in levi] + pool
    ech = reduced_echelon(gens)
    cand = [_diag_of(row, n) for _, row in sorted(ech.items())]
    dim = len(cand)
    pairing = [{c: d[g.i - 1] - d[g.j - 1] for c, d in enumerate(cand)} for g in S]
    full = rank(pairing) == len(S)
    if dim > len(S):
        status = "falsified"
    elif dim == len(S) and full:
        status = "certified"
    else:
        status = "indeterminate"
    return TruncationCertificate(cand, dim, len(S), status == "certified", status, samples, ranks,
                                 dim_q - best_rank, seed)


@dataclass
class RegularityReport:
    indexMeander: int                  # orbits of iota+ iota- (index of q_Lambda)
    halfintMeanders: int               # orbits of <iota+, iota-> (number of marks)
    genericIndex: int | None           # dim q_Lambda - max rank of B_xi on q_Lambda
    indexQ: int
    stabilizerDim: int | None
    regular: bool | None
    kappaOrbits: int

    def as_dict(self):
        return dict(self.__dict__)


def kappa_orbit_count(dp: DoublePartition) -> int:
    """Orbits of the cyclic group generated by kappa+ kappa- (independent walk)."""
    n = dp.n
    kp = [0] + [sum(dp.block("+", p)) - p for p in range(1, n + 1)]
    km = [0] + [sum(dp.block("-", p)) - p for p in range(1, n + 1)]
    seen, count = [False] * (n + 1), 0
    for p in range(1, n + 1):
        if seen[p]:
            continue
        count += 1
        while not seen[p]:
            seen[p] = True
            p = kp[km[p]]
    return count


def _truncation_basis(dp, cert):
    basis = [{(i, i): v for i, v in enumerate(d, 1) if v} for d in cert.hLambdaBasis]
    return basis + [{ab: 1} for ab in _q_roots(dp)]


def generic_index(dp: DoublePartition, cert: TruncationCertificate, samples: int = 2,
                  seed: int = 0, spread: int = 1000) -> int:
    """Index of q_Lambda from random forms (an upper bound that is exact generically)."""
    basis = _truncation_basis(dp, cert)
    rng = random.Random(seed + 7919)
    best = 0
    for _ in range(samples):
        xi = {(b, a): rng.randint(-spread, spread) for a, b in _q_roots(dp)}
        d = [rng.randint(-spread, spread) for _ in range(dp.n)]
        d[-1] = -sum(d[:-1])
        for i, v in enumerate(d, 1):
            if v:
                xi[(i, i)] = v
        best = max(best, rank(_form_rows(xi, basis)))
    return len(basis) - best


def regularity(dp: DoublePartition, S: list[Root], cert: TruncationCertificate,
               samples: int = 2, seed: int = 0) -> RegularityReport:
    ell = product_orbit_count(dp)
    groups = meander_count(dp)
    korb = kappa_orbit_count(dp)
    if not cert.certified:
        return RegularityReport(ell, groups, None, cert.index_q, None, None, korb)
    basis = _truncation_basis(dp, cert)
    eta = {(r.i, r.j): 1 for r in S}
    stab = len(basis) - rank(_form_rows(eta, basis))
    gi = generic_index(dp, cert, samples, seed)
    return RegularityReport(ell, groups, gi, cert.index_q, stab, stab == ell, korb)


def h_in_truncation(S: list[Root], cert: TruncationCertificate):
    """The unique h' in the certified h_Lambda with gamma(h') = -1 on S."""
    if not cert.certified:
        return None
    if not S:
        return [Fraction(0)] * (len(cert.hLambdaBasis[0]) if cert.hLambdaBasis else 0)
    A = [[d[r.i - 1] - d[r.j - 1] for d in cert.hLambdaBasis] for r in S]
    coeff = solve_fraction(A, [-1] * len(S))
    n = len(cert.hLambdaBasis[0])
    return [sum((c * d[k] for c, d in zip(coeff, cert.hLambdaBasis)), Fraction(0)) for k in range(n)]


def check_h(S: list[Root], h) -> bool:
    return all(Fraction(h[r.i - 1]) - Fraction(h[r.j - 1]) == -1 for r in S) and sum(h) == 0


def independent(S: list[Root], n: int) -> bool:
    return rank(root_vector(r, n) for r in S) == len(S)


# falsifiers ----------------------------------------------------------------

@dataclass
class Check:
    name: str
    passed: bool = True
    count: int = 0
    counterexample: str | None = None

    def hit(self, ok: bool, detail):
        self.count += 1
        if not ok and self.passed:
            self.passed = False
            self.counterexample = detail() if callable(detail) else str(detail)


@dataclass
class FalsifierReport:
    checks: dict = field(default_factory=dict)

    def check(self, name: str) -> Check:
        return self.checks.setdefault(name, Check(name))

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks.values())

    def failures(self) -> list[Check]:
        return [c for c in self.checks.values() if not c.passed]

    def as_dict(self):
        return {k: {"passed": c.passed, "count": c.count, "counterexample": c.counterexample}
                for k, c in sorted(self.checks.items())}


def _signed(sign: int, r: Root) -> Root:
    return r if sign == 1 else -r


def _in_negR_star(dp, r):
    return dp.in_R(r) and not dp.in_R(-r)


def geometric_turning(E: Edge) -> list[int]:
    e = E.e
    out = [1]
    for t in range(2, e):
        a, b, c = E.points[t - 2], E.points[t - 1], E.points[t]
        if (b - a) * (b - c) < 0:
            out.append(t)
    out.append(e)
    return out


def falsify_edge(dp: DoublePartition, E: Edge, rep: FalsifierReport):
    e = E.e
    eps = lambda i: E.signs[i - 1]                       # noqa: E731
    phi = lambda t: E.points[t - 1]                      # noqa: E731
    beta = lambda i: Root(phi(i), phi(i + 1))            # noqa: E731
    nil = lambda r: dp.in_K(r) or dp.in_K(-r)            # noqa: E731
    T = geometric_turning(E)
    internal = set(T[1:-1])

    c = rep.check("drawn signs and eps_i beta_i in R")
    for i in range(1, e):
        ok = eps(i) == drawn_sign(E.sides[i - 1], phi(i), phi(i + 1)) and dp.in_R(_signed(eps(i), beta(i)))
        c.hit(ok, lambda: f"edge {E.points}: value {i}")
    c = rep.check("sign flips exactly at internal turning points")
    for i in range(1, e - 1):
        c.hit((eps(i) * eps(i + 1) == -1) == (i + 1 in internal), lambda: f"edge {E.points}: at phi({i + 1})")

    c = rep.check("turning-point laws")
    for t in internal:
        p = phi(t)
        cp, cm = dp.centre2("+", p), dp.centre2("-", p)
        src = all(beta_val.i == p for beta_val in (_signed(eps(t - 1), beta(t - 1)), _signed(eps(t), beta(t))))
        if cp == cm:
            ok = False
        elif cp < cm:
            ok = (not src) and cp <= 2 * p <= cm
        else:
            ok = src and cm <= 2 * p <= cp
        c.hit(ok, lambda: f"edge {E.points}: internal turning point {p}")

    simple = rep.check("simple interval value in -R_*")
    l431 = rep.check("nil odd interval value in -K")
    l432 = rep.check("odd interval value in -K unless it spans the edge")
    p56 = rep.check("odd interval value plus non-nil neighbour in K")
    for x in range(len(T)):
        for y in range(x + 1, len(T)):
            k = y - x
            if k % 2 == 0:
                continue
            r, s = T[x], T[y]
            val = _signed(eps(r), Root(phi(r), phi(s)))
            tag = lambda: f"edge {E.points}: interval [{r},{s})"       # noqa: E731
            if k == 1:
                simple.hit(_in_negR_star(dp, val), tag)
            if nil(Root(phi(r), phi(s))):
                l431.hit(dp.in_K(-val), tag)
            if not (r == 1 and s == e):
                l432.hit(dp.in_K(-val), tag)
            if r > 1 and not nil(beta(r - 1)):
                p56.hit(dp.in_K(_signed(eps(r - 1), Root(phi(r - 1), phi(s)))), tag)
            if s < e and not nil(beta(s)):
                p56.hit(dp.in_K(_signed(eps(s), Root(phi(r), phi(s + 1)))), tag)

    c = rep.check("boundary value plus opposite simple interval in K")
    for idx in range(1, len(T) - 1):
        t, tm, tp = T[idx], T[idx - 1], T[idx + 1]
        bm_nil, bp_nil = nil(beta(t - 1)), nil(beta(t))
        lower = _signed(eps(t - 1), Root(phi(t - 1), phi(tp)))
        upper = _signed(eps(t), Root(phi(tm), phi(t + 1)))
        if not bm_nil or (bm_nil and bp_nil):
            c.hit(dp.in_K(lower), lambda: f"edge {E.points}: at phi({t}) lower")
        if not bp_nil or (bm_nil and bp_nil):
            c.hit(dp.in_K(upper), lambda: f"edge {E.points}: at phi({t}) upper")


def _positive_closure(vectors: list[tuple]) -> set:
    """All sums of the given vectors that are roots, built by pairwise closure."""
    out = set(vectors)
    frontier = list(out)
    while frontier:
        nxt = []
        for a in frontier:
            for b in list(out):
                s = tuple(x + y for x, y in zip(a, b))
                if sorted(s) == sorted([1, -1] + [0] * (len(s) - 2)) and s not in out:
                    nxt.append(s)
                    out.add(s)
        frontier = nxt
    return out


def _type_a(vectors: list[tuple]) -> bool:
    m = len(vectors)
    adj = {i: [] for i in range(m)}
    for i in range(m):
        if sum(x * x for x in vectors[i]) != 2:
            return False
        for j in range(i + 1, m):
            d = sum(x * y for x, y in zip(vectors[i], vectors[j]))
            if d not in (0, -1):
                return False
            if d == -1:
                adj[i].append(j)
                adj[j].append(i)
    if m == 0:
        return True
    if any(len(v) > 2 for v in adj.values()) or sum(len(v) for v in adj.values()) != 2 * (m - 1):
        return False
    seen, stack = set(), [0]
    while stack:
        x = stack.pop()
        if x not in seen:
            seen.add(x)
            stack += adj[x]
    return len(seen) == m


def _vec(r: Root, n: int) -> tuple:
    v = [0] * n
    v[r.i - 1] += 1
    v[r.j - 1] -= 1
    return tuple(v)


def falsify_straightened(dp: DoublePartition, se, rep: FalsifierReport):
    E, n = se.edge, dp.n
    vals = E.values()
    star = list(se.piStar)
    c = rep.check("altered values lie in K")
    for i, (a, b) in enumerate(zip(vals, star), 1):
        if a != b:
            c.hit(dp.in_K(b), lambda: f"edge {E.points}: beta*_{i} = {b}")
    c = rep.check("straightened values form one type-A chain")
    c.hit(_type_a([_vec(r, n) for r in star]), lambda: f"edge {E.points}: {[str(r) for r in star]}")
    c = rep.check("values lie in the positive cone of the new system")
    cone = _positive_closure([_vec(r, n) for r in star])
    for i, v in enumerate(vals, 1):
        c.hit(_vec(v, n) in cone, lambda: f"edge {E.points}: eps_{i} beta_{i} = {v}")
    c = rep.check("change of basis is unitriangular")
    pos = {idx: k for k, idx in enumerate(se.order)}
    for a in se.external:
        ok = all(pos[j] < pos[a.index] for j in a.support() if j != a.index)
        total = [0] * n
        for j in a.support():
            v = _vec(vals[j - 1], n)
            coef = 1 if j == a.index else E.signs[a.index - 1] * E.signs[j - 1]
            total = [x + coef * y for x, y in zip(total, v)]
        ok = ok and tuple(total) == _vec(a.root, n)
        c.hit(ok, lambda: f"edge {E.points}: external arc at {a.index}")
    c = rep.check("external arcs meet turning points properly")
    anchored = {}
    for a in se.external:
        anchored.setdefault(a.anchor, []).append(a)
    for t, arcs in anchored.items():
        c.hit(len(arcs) == 1, lambda: f"edge {E.points}: phi({t}) anchors {len(arcs)} external arcs")
    ends = {}
    turning = set(geometric_turning(E))
    for a in se.external:
        for t in (a.start, a.stop):
            if t in turning:
                ends.setdefault(t, set()).add(a.side)
    for t, sides in ends.items():
        c.hit(len(sides) == 1, lambda: f"edge {E.points}: arcs on both sides meet phi({t})")
    c = rep.check("straightened edge value in -K")
    v = Root(se.chain.points[0], se.chain.points[-1])
    ok = dp.in_K(-v) and (se.external or _in_negR_star(dp, v))
    c.hit(bool(ok), lambda: f"edge {E.points}: value {v}")


def falsify_fixed(dp: DoublePartition, F: list[int], rep: FalsifierReport):
    c = rep.check("at most one fully fixed point per equicentral component")
    per = {}
    for f in F:
        comp = dp.component_of(f)
        if dp.equicentral(f):
            per.setdefault(comp.interval, []).append(f)
    for k, v in per.items():
        c.hit(len(v) <= 1, lambda: f"component {k}: {v}")
    c = rep.check("consecutive fully fixed differences are nil")
    F = sorted(F)
    for a, b in zip(F, F[1:]):
        r = Root(a, b)
        c.hit(dp.in_K(r) or dp.in_K(-r), lambda: f"{r}")
    if len(F) >= 2:
        c.hit(rank(root_vector(Root(a, b), dp.n) for a, b in zip(F, F[1:])) == len(F) - 1, "dependent")


def falsify_lemmas(dp: DoublePartition, edges: list[Edge], straightened=(), fixed=(), rep=None) -> FalsifierReport:
    rep = rep or FalsifierReport()
    for E in edges:
        falsify_edge(dp, E, rep)
    for se in straightened:
        falsify_straightened(dp, se, rep)
    falsify_fixed(dp, list(fixed), rep)
    return rep


def check_lift(dp: DoublePartition, S: list[Root], lift, straightened=(), rep=None) -> FalsifierReport:
    """Consistency and correctness of a nilpotent lift."""
    rep = rep or FalsifierReport()
    n = dp.n
    pts = list(lift.chain.points)
    c = rep.check("chain passes through every point")
    c.hit(sorted(pts) == list(range(1, n + 1)), lambda: f"{pts}")
    expect = [Root(a, b) for a, b in zip(pts, pts[1:])]
    c = rep.check("simple system matches the chain")
    c.hit(list(lift.piStar) == expect, lambda: f"{[str(r) for r in lift.piStar]}")
    c.hit(_type_a([_vec(r, n) for r in lift.piStar]), "not of type A")
    roots = set(S) | set(expect)
    for se in straightened:
        roots |= set(se.piStar)
    support = {Root(i, j) for (i, j), v in lift.y.items() if v}
    c = rep.check("y is the sum of the expected root vectors")
    c.hit(support == roots and all(v == 1 for v in lift.y.values()),
          lambda: f"extra {sorted(map(str, support - roots))}, missing {sorted(map(str, roots - support))}")
    c = rep.check("added roots lie in K")
    for r in lift.added:
        c.hit(dp.in_K(r) and r not in set(S), lambda: f"{r}")
    c.hit(set(lift.added) == support - set(S), "added roots differ from the support of y outside S")
    c = rep.check("restriction of y is eta")
    kept = {k: v for k, v in lift.y.items() if v and dp.in_R(Root(*k))}
    c.hit(kept == {(r.i, r.j): 1 for r in S}, lambda: f"{sorted(kept)}")
    c = rep.check("y is regular nilpotent")
    pr = power_ranks(lift.y, n)
    c.hit(pr == list(range(n - 1, -1, -1)), lambda: f"ranks {pr}")
    c = rep.check("Weyl permutation maps the standard chain to the new one")
    c.hit(list(lift.w.permutation) == pts, lambda: f"{lift.w.permutation}")
    return rep
