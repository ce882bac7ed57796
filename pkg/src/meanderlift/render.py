"""SVG and ASCII pictures of a construction.

Two diagrams are drawn.  The horizontal one puts the points 1..n on a line
with the modified arcs above and below it, the half-integer arcs dashed
between them, and a cross on every marked cascade arc.  The vertical one
shows each edge top to bottom with its short arrows and the external arcs
on the left and right.  Every arc element carries data-* attributes so
tests can compare arc sets without parsing geometry.
"""
from __future__ import annotations

from xml.sax.saxutils import quoteattr

from .halfint import ABOVE, BELOW, build_extended

STEP = 60
PAD = 40
ADDED = "#2a9d3a"


def _fmt(x: float) -> str:
    return f"{x:.1f}".rstrip("0").rstrip(".")


def _attrs(**kw) -> str:
    return " ".join(f"{k.replace('_', '-')}={quoteattr(str(v))}" for k, v in kw.items() if v is not None)


def _arc(x1, x2, y, up, height=None, **kw) -> str:
    h = height if height is not None else abs(x2 - x1) / 2
    cy = y - h if up else y + h
    d = f"M {_fmt(x1)} {_fmt(y)} Q {_fmt((x1 + x2) / 2)} {_fmt(cy)} {_fmt(x2)} {_fmt(y)}"
    return f'<path d="{d}" fill="none" {_attrs(**kw)}/>'


def _svg(width, height, body) -> str:
    head = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
            f'viewBox="0 0 {width} {height}">')
    defs = ('<defs><marker id="arrow" viewBox="0 0 10 10" refX="9" refY="5" markerWidth="7" '
            'markerHeight="7" orient="auto-start-reverse"><path d="M 0 0 L 10 5 L 0 10 z"/></marker></defs>')
    return "\n".join([head, defs, *body, "</svg>"]) + "\n"


def horizontal_svg(c) -> str:
    """Meander picture of one construction (see module docstring)."""
    n = c.dp.n
    width = 2 * PAD + STEP * (n - 1)
    span = STEP * (n - 1)
    y0 = PAD + span / 2 + 20
    height = int(2 * y0)
    X = lambda p: PAD + STEP * (p - 1)           # noqa: E731
    body = [f'<line x1="{PAD - 20}" y1="{_fmt(y0)}" x2="{width - PAD + 20}" y2="{_fmt(y0)}" stroke="#888"/>']
    for p in range(1, n + 1):
        body.append(f'<circle cx="{_fmt(X(p))}" cy="{_fmt(y0)}" r="3" data-kind="point" data-at="{p}"/>')
        body.append(f'<text x="{_fmt(X(p))}" y="{_fmt(y0 + 16)}" text-anchor="middle" font-size="11">{p}</text>')
    # modified arcs, oriented as the drawn roots
    for E in c.edges:
        for i in range(1, E.e):
            r = E.value(i)
            side = E.sides[i - 1]
            a, b = r.i, r.j
            body.append(_arc(X(a), X(b), y0, side == ABOVE, stroke="black", marker_end="url(#arrow)",
                             data_kind="sigma", data_side=side, data_from=a, data_to=b))
    # half-integer arcs
    ess = build_extended(c.dp)
    for side in (ABOVE, BELOW):
        done = set()
        for x in ess.real:
            y = ess.iota[side][x]
            if y in done or y not in ess.real:
                continue
            done |= {x, y}
            lo, hi = min(x, y), max(x, y)
            fict = ess.is_fictitious_arc(side, x, y)
            xa, xb = X(lo) + STEP / 2, X(hi) + STEP / 2
            if lo == hi:
                body.append(f'<circle cx="{_fmt(xa)}" cy="{_fmt(y0 - 6 if side == ABOVE else y0 + 6)}" r="4" '
                            f'fill="none" stroke="#c33" stroke-dasharray="2,2" '
                            f'{_attrs(data_kind="half", data_side=side, data_from=lo, data_to=hi, data_fictitious=int(fict))}/>')
            else:
                body.append(_arc(xa, xb, y0, side == ABOVE, height=(xb - xa) / 2 * 0.8, stroke="#c33",
                                 stroke_dasharray="2,2" if fict else "5,3", data_kind="half", data_side=side,
                                 data_from=lo, data_to=hi, data_fictitious=int(fict)))
    # marks: a cross at the apex of the marked cascade arc
    for m in sorted(c.marks.marks):
        xm = (X(m.i) + X(m.j)) / 2
        h = (X(m.j) - X(m.i)) / 2
        ym = y0 - h if m.side == ABOVE else y0 + h
        body.append(_arc(X(m.i), X(m.j), y0, m.side == ABOVE, stroke="#bbb", stroke_dasharray="1,3",
                         data_kind="cascade", data_side=m.side, data_from=m.i, data_to=m.j))
        body.append(f'<path d="M {_fmt(xm - 5)} {_fmt(ym - 5)} L {_fmt(xm + 5)} {_fmt(ym + 5)} '
                    f'M {_fmt(xm - 5)} {_fmt(ym + 5)} L {_fmt(xm + 5)} {_fmt(ym - 5)}" stroke="#c33" '
                    f'{_attrs(data_kind="mark", data_side=m.side, data_from=m.i, data_to=m.j)}/>')
    # roots added by the lift, drawn on the side of their sign
    for r in c.lift.added:
        body.append(_arc(X(r.i), X(r.j), y0, r.positive, stroke=ADDED, marker_end="url(#arrow)",
                         data_kind="added", data_side=ABOVE if r.positive else BELOW,
                         data_from=r.i, data_to=r.j))
    return _svg(width, height, body)


def vertical_svg(se) -> str:
    """Straightening picture of one edge: phi(1) at the top."""
    E = se.edge
    e = E.e
    width = 2 * PAD + 4 * STEP
    height = 2 * PAD + STEP * (e - 1)
    xv = width / 2
    Y = lambda t: PAD + STEP * (t - 1)           # noqa: E731
    body = []
    replaced = {a.index for a in se.external}
    for t in range(1, e + 1):
        kind = se.turning.kind.get(t, "")
        body.append(f'<circle cx="{_fmt(xv)}" cy="{_fmt(Y(t))}" r="3" '
                    f'{_attrs(data_kind="point", data_at=E.phi(t), data_turning=kind or None)}/>')
        body.append(f'<text x="{_fmt(xv + 8)}" y="{_fmt(Y(t) + 4)}" font-size="11">{E.phi(t)}{kind}</text>')
    for i in range(1, e):
        r = E.value(i)
        down = r.i == E.phi(i)
        y1, y2 = (Y(i), Y(i + 1)) if down else (Y(i + 1), Y(i))
        dash = ' stroke-dasharray="3,3"' if i in replaced else ""
        body.append(f'<line x1="{_fmt(xv)}" y1="{_fmt(y1)}" x2="{_fmt(xv)}" y2="{_fmt(y2)}" stroke="black"{dash} '
                    f'marker-end="url(#arrow)" '
                    f'{_attrs(data_kind="short", data_from=r.i, data_to=r.j, data_replaced=int(i in replaced))}/>')
    for a in se.external:
        off = (a.stop - a.start) * 18 + 20
        x = xv - off if a.side == "left" else xv + off
        src, dst = a.root.i, a.root.j
        ts = E.points.index(src) + 1
        td = E.points.index(dst) + 1
        d = f"M {_fmt(xv)} {_fmt(Y(ts))} C {_fmt(x)} {_fmt(Y(ts))} {_fmt(x)} {_fmt(Y(td))} {_fmt(xv)} {_fmt(Y(td))}"
        body.append(f'<path d="{d}" fill="none" stroke="{ADDED}" marker-end="url(#arrow)" '
                    f'{_attrs(data_kind="external", data_side=a.side, data_from=src, data_to=dst, data_anchor=E.phi(a.anchor))}/>')
    return _svg(width, height, body)


def ascii_diagram(c) -> str:
    n = c.dp.n
    lines = ["points  " + " ".join(f"{p:>2}" for p in range(1, n + 1))]
    for side, name in ((ABOVE, "above"), (BELOW, "below")):
        arcs = []
        for E in c.edges:
            for i in range(1, E.e):
                if E.sides[i - 1] == side:
                    r = E.value(i)
                    arcs.append(f"{r.i}->{r.j}")
        lines.append(f"{name:<8}" + " ".join(sorted(arcs)))
    lines.append("marks   " + " ".join(f"{m.side}[{m.i},{m.j}]" for m in sorted(c.marks.marks)))
    lines.append("fixed   " + " ".join(map(str, c.fixed)))
    lines.append("chain   " + " -> ".join(map(str, c.lift.chain.points)))
    lines.append("added   " + " ".join(f"{r.i}->{r.j}" for r in c.lift.added))
    for k, se in enumerate(c.straightened, 1):
        lines.append(f"edge {k}")
        E = se.edge
        ext = {a.index: a for a in se.external}
        for t in range(1, E.e + 1):
            kind = se.turning.kind.get(t, " ")
            lines.append(f"  {E.phi(t):>3} {kind}")
            if t < E.e:
                r = E.value(t)
                arrow = "v" if r.i == E.phi(t) else "^"
                note = ""
                if t in ext:
                    a = ext[t]
                    note = f"  replaced by {a.root.i}->{a.root.j} ({a.side}, anchored at {E.phi(a.anchor)})"
                lines.append(f"      {arrow}{note}")
    return "\n".join(lines) + "\n"
