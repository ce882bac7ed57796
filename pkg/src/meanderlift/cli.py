"""Command line: one instance with a JSON report, or an exhaustive sweep.

Exit codes: 0 all checks pass, 1 usage error, 2 a falsifier fired.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from pathlib import Path

from . import oracle
from .assemble import AssembleError, weierstrass_lift_index_one
from .biparabolic import DoublePartition, PartitionError, admissible
from .halfint import MarkingError
from .modinv import ModinvError
from .pipeline import Policy, construct
from .render import ascii_diagram, horizontal_svg, vertical_svg
from .straighten import StraightenError

EXIT_OK, EXIT_USAGE, EXIT_FALSIFIED = 0, 1, 2
CONSTRUCTION_ERRORS = (AssembleError, StraightenError, ModinvError, MarkingError)


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    n: int
    jplus: list
    jminus: list
    policy: dict = field(default_factory=dict)
    seed: int = 0
    samples: int = 3

    def partition(self) -> DoublePartition:
        try:
            return DoublePartition(self.n, self.jplus, self.jminus)
        except PartitionError as exc:
            raise UsageError(str(exc)) from None

    def as_dict(self, dp: DoublePartition | None = None) -> dict:
        jp = [list(x) for x in dp.jplus] if dp else self.jplus
        jm = [list(x) for x in dp.jminus] if dp else self.jminus
        try:
            pol = Policy.from_dict(self.policy).as_dict()
        except (ValueError, TypeError):
            pol = self.policy
        return {"n": self.n, "jplus": jp, "jminus": jm, "policy": pol, "seed": self.seed, "samples": self.samples}


# serialization ---------------------------------------------------------------

def rational(x) -> dict:
    x = Fraction(x)
    return {"num": str(x.numerator), "den": str(x.denominator)}


def root(r) -> list[int]:
    return [r.i, r.j]


def _sparse(y: dict) -> list:
    return [[i, j, v if isinstance(v, int) else rational(v)] for (i, j), v in sorted(y.items()) if v]


def _straightened(se) -> dict:
    td = se.turning
    return {
        "edge": se.edge.as_dict(),
        "turning": {
            "T": [se.edge.phi(t) for t in td.T],
            "internal": [se.edge.phi(t) for t in td.T0],
            "kind": {str(se.edge.phi(t)): k for t, k in sorted(td.kind.items())},
            "signature": {str(se.edge.phi(t)): s for t, s in sorted(td.signature.items())},
            "marked": {str(i): se.edge.phi(t) for i, t in sorted(td.marked.items())},
        },
        "external": [{"index": a.index, "side": a.side, "anchor": se.edge.phi(a.anchor), "root": root(a.root)}
                     for a in se.external],
        "piStar": [root(r) for r in se.piStar],
        "chain": list(se.chain.points),
        "order": list(se.order),
        "value": root(se.value),
    }


def is_index_one(dp: DoublePartition) -> bool:
    return (dp.jplus == ((1, dp.n),) and len(dp.jminus) == 2
            and gcd(dp.jminus[0][1], dp.n) == 1)


def index_one_section(dp: DoublePartition, eta: dict, samples=(0, 1, -1, 2)) -> dict:
    fam = weierstrass_lift_index_one(dp)
    x = (fam.exceptional.i, fam.exceptional.j)
    rows = []
    for c in samples:
        y = fam.member(c)
        kept = {k: v for k, v in y.items() if v and dp.in_R(oracle.Root(*k))}
        want = dict(eta)
        if c:
            want[x] = want.get(x, 0) + c
        rows.append({"c": c, "regular": oracle.is_regular_nilpotent(y, dp.n), "restricts": kept == want})
    out = {"p": fam.p, "s": fam.s, "exceptional": root(fam.exceptional), "case": fam.case,
           "members": rows, "ell": oracle.product_orbit_count(dp)}
    if fam.artificial is not None:
        y1 = fam.artificial_lift
        kept = {k: v for k, v in y1.items() if v and dp.in_R(oracle.Root(*k))}
        out["artificial"] = {"root": root(fam.artificial), "inK": dp.in_K(fam.artificial),
                             "regular": oracle.is_regular_nilpotent(y1, dp.n), "restricts": kept == eta,
                             "y": _sparse(y1)}
    return out


def run(cfg: RunConfig) -> tuple[dict, object]:
    """Full pipeline plus oracle; returns (report, construction or None)."""
    dp = cfg.partition()
    try:
        policy = Policy.from_dict(cfg.policy)
    except (ValueError, TypeError, KeyError) as exc:
        raise UsageError(f"bad policy: {exc}") from None
    report = {"config": cfg.as_dict(dp)}
    try:
        c = construct(dp, policy)
    except MarkingError as exc:
        if policy.marks is not None:
            raise UsageError(str(exc)) from None
        report.update(status="falsified", error=f"{type(exc).__name__}: {exc}")
        return report, None
    except CONSTRUCTION_ERRORS as exc:
        report.update(status="falsified", error=f"{type(exc).__name__}: {exc}")
        return report, None

    rep = oracle.falsify_lemmas(dp, c.edges, c.straightened, c.fixed)
    oracle.check_lift(dp, c.pair.S, c.lift, c.straightened, rep)
    indep = rep.check("S linearly independent")
    indep.hit(oracle.independent(c.pair.S, dp.n), "dependent")
    hc = rep.check("h scales eta by -1")
    hc.hit(oracle.check_h(c.pair.S, c.pair.h), "gamma(h) != -1")
    cert = oracle.certify_truncation(dp, c.pair.S, cfg.samples, cfg.seed)
    reg = oracle.regularity(dp, c.pair.S, cert, seed=cfg.seed)
    tc = rep.check("truncation candidate not larger than S")
    tc.hit(cert.status != "falsified", lambda: f"dimension {cert.dimension} > {len(c.pair.S)}")
    if reg.regular is not None:
        rc = rep.check("eta regular")
        rc.hit(reg.regular, lambda: f"stabilizer {reg.stabilizerDim} != {reg.indexMeander}")
        gc = rep.check("generic index matches the product orbit count")
        gc.hit(reg.genericIndex == reg.indexMeander, lambda: f"{reg.genericIndex} != {reg.indexMeander}")
    hl = oracle.h_in_truncation(c.pair.S, cert)

    nl = c.lift
    report.update({
        "marks": c.marks.as_list(),
        "halfintMeanders": c.meander_count,
        "replacements": [{"side": r.side, "block": list(r.block), "first": r.first, "last": r.last, "m": r.m,
                          "context": r.context, "shift": r.shift, "after": [list(a) for a in r.arcs_after]}
                         for r in c.replacements],
        "S": [root(r) for r in c.pair.S],
        "eta": _sparse(nl.eta),
        "h": [rational(x) for x in c.pair.h],
        "hTruncation": None if hl is None else [rational(x) for x in hl],
        "fullyFixed": list(c.fixed),
        "edges": [_straightened(se) for se in c.straightened],
        "lift": {
            "chain": list(nl.chain.points),
            "piStar": [root(r) for r in nl.piStar],
            "added": [{"root": root(r), "inK": dp.in_K(r), "class": dp.classify(r).names()} for r in nl.added],
            "y": _sparse(nl.y),
            "w": {"permutation": list(nl.w.permutation), "letters": list(nl.w.letters)},
            "join": None if nl.join is None else {"branch": nl.join.branch, "added": [root(r) for r in nl.join.added]},
            "fixedRule": nl.fixed_rule,
        },
        "truncation": cert.as_dict(),
        "regularity": reg.as_dict(),
    })
    if is_index_one(dp):
        try:
            report["indexOne"] = index_one_section(dp, nl.eta)
        except AssembleError as exc:
            ic = rep.check("index-one family")
            ic.hit(False, str(exc))
    report["falsifiers"] = rep.as_dict()
    report["status"] = "ok" if rep.passed else "falsified"
    return report, c


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=1) + "\n"


def write_svgs(c, outdir: Path, stem: str = "instance"):
    outdir.mkdir(parents=True, exist_ok=True)
    paths = [outdir / f"{stem}_meander.svg"]
    paths[0].write_text(horizontal_svg(c))
    for k, se in enumerate(c.straightened, 1):
        p = outdir / f"{stem}_edge{k}.svg"
        p.write_text(vertical_svg(se))
        paths.append(p)
    return paths


# sweep -----------------------------------------------------------------------

SWEEP_FIELDS = ["n", "jplus", "jminus", "S", "edges", "ell", "marks", "regular", "certified", "invariants", "status"]


def sweep_row(dp: DoublePartition, seed: int = 0, samples: int = 3):
    cfg = RunConfig(dp.n, [list(x) for x in dp.jplus], [list(x) for x in dp.jminus], {}, seed, samples)
    report, c = run(cfg)
    reg = report.get("regularity", {})
    cert = report.get("truncation", {})
    row = {
        "n": dp.n,
        "jplus": json.dumps(report["config"]["jplus"]),
        "jminus": json.dumps(report["config"]["jminus"]),
        "S": len(report.get("S", [])),
        "edges": len(report.get("edges", [])),
        "ell": reg.get("indexMeander", ""),
        "marks": reg.get("halfintMeanders", ""),
        "regular": {True: "yes", False: "no", None: "indeterminate"}[reg.get("regular")],
        "certified": cert.get("status", ""),
        "invariants": "pass" if report["status"] == "ok" else "fail",
        "status": report["status"],
    }
    return row, report


def _sweep_task(args):
    (n, jp, jm), seed, samples = args
    return sweep_row(DoublePartition(n, jp, jm), seed, samples)


def sweep(n_max: int, seed: int = 0, samples: int = 3, jobs: int = 1):
    """All admissible instances for n = 2..n_max; rows in a stable order."""
    keys = [(dp.n, dp.jplus, dp.jminus) for n in range(2, n_max + 1) for dp in admissible(n)]
    tasks = [(k, seed, samples) for k in keys]
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(jobs) as ex:
            results = list(ex.map(_sweep_task, tasks, chunksize=16))
    else:
        results = [_sweep_task(t) for t in tasks]
    rows = [r for r, _ in results]
    failures = [rep for r, rep in results if rep["status"] != "ok"]
    return rows, failures


# entry point -----------------------------------------------------------------

def _parse_partition(text: str):
    text = text.strip()
    if text.startswith("["):
        try:
            return json.loads(text)
        except json.JSONDecodeError as exc:
            raise UsageError(f"cannot parse partition {text!r}: {exc}") from None
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"cannot parse partition {text!r}; use sizes like 2,4,2 or [[1,2],[3,6],[7,8]]") from None


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="meanderlift", description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, help="rank parameter: work in sl_n")
    ap.add_argument("--jplus", help="upper partition: part sizes '2,4,2' or intervals '[[1,2],[3,8]]'")
    ap.add_argument("--jminus", help="lower partition, same formats")
    ap.add_argument("--config", type=Path, help="JSON config (the 'config' block of an earlier report)")
    ap.add_argument("--policy-file", type=Path, help="JSON policy: marks, shifts, turning, join, fixed_chain")
    ap.add_argument("--seed", type=int, default=None, help="seed for the random forms of the oracle")
    ap.add_argument("--samples", type=int, default=None, help="random forms per truncation certificate")
    ap.add_argument("--report", type=Path, help="write the JSON report here (default: stdout)")
    ap.add_argument("--svg", type=Path, help="directory for SVG diagrams")
    ap.add_argument("--ascii", action="store_true", help="print an ASCII diagram to stderr")
    ap.add_argument("--sweep", type=int, metavar="N", help="run every admissible instance with n <= N")
    ap.add_argument("--csv", type=Path, help="sweep summary CSV (default: stdout)")
    ap.add_argument("--jobs", type=int, default=1, help="worker processes for the sweep")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return _main(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def _load_json(path: Path):
    try:
        return json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None


def _main(args) -> int:
    seed = 0 if args.seed is None else args.seed
    samples = 3 if args.samples is None else args.samples
    if samples < 1:
        raise UsageError("--samples must be at least 1")
    if args.sweep is not None:
        if args.sweep < 2 or args.sweep > 10:
            raise UsageError("--sweep needs 2 <= N <= 10")
        t0 = time.perf_counter()
        rows, failures = sweep(args.sweep, seed, samples, args.jobs)
        out = open(args.csv, "w", newline="") if args.csv else sys.stdout
        try:
            w = csv.DictWriter(out, SWEEP_FIELDS)
            w.writeheader()
            w.writerows(rows)
        finally:
            if args.csv:
                out.close()
        if failures:
            dump = (args.csv.with_suffix(".failures.json") if args.csv else Path("sweep_failures.json"))
            dump.write_text(json.dumps(failures, sort_keys=True, indent=1) + "\n")
            print(f"{len(failures)} failing instances written to {dump}", file=sys.stderr)
        print(f"{len(rows)} instances in {time.perf_counter() - t0:.1f}s", file=sys.stderr)
        return EXIT_FALSIFIED if failures else EXIT_OK

    if args.config:
        raw = _load_json(args.config)
        raw = raw.get("config", raw)
        try:
            cfg = RunConfig(int(raw["n"]), raw["jplus"], raw["jminus"], raw.get("policy") or {},
                            int(raw.get("seed", 0)), int(raw.get("samples", 3)))
        except (KeyError, TypeError, ValueError) as exc:
            raise UsageError(f"bad config: {exc}") from None
        if args.seed is not None:
            cfg.seed = args.seed
        if args.samples is not None:
            cfg.samples = args.samples
    else:
        if args.n is None or args.jplus is None or args.jminus is None:
            raise UsageError("give --n, --jplus and --jminus (or --config, or --sweep N)")
        cfg = RunConfig(args.n, _parse_partition(args.jplus), _parse_partition(args.jminus), {}, seed, samples)
    if args.policy_file:
        cfg.policy = _load_json(args.policy_file)
    report, c = run(cfg)
    text = dumps(report)
    if args.report:
        args.report.write_text(text)
    else:
        sys.stdout.write(text)
    if c is not None and args.svg:
        write_svgs(c, args.svg)
    if c is not None and args.ascii:
        sys.stderr.write(ascii_diagram(c))
    if report["status"] != "ok":
        print(f"falsified: {report.get('error') or [k for k, v in report['falsifiers'].items() if not v['passed']]}",
              file=sys.stderr)
        return EXIT_FALSIFIED
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
