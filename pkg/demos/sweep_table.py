"""Tally the exhaustive sweep: per n, instances, edges and index of q_Lambda."""
import sys
from collections import defaultdict

from meanderlift.cli import sweep

n_max = int(sys.argv[1]) if len(sys.argv) > 1 else 6
rows, failures = sweep(n_max)
by_n = defaultdict(list)
for r in rows:
    by_n[r["n"]].append(r)
print(" n  instances  max edges  max index  all pass")
for n, rs in sorted(by_n.items()):
    print(f"{n:2d}  {len(rs):9d}  {max(r['edges'] for r in rs):9d}  {max(r['ell'] for r in rs):9d}  "
          f"{all(r['invariants'] == 'pass' for r in rs)}")
print(f"{len(failures)} failing instances")
