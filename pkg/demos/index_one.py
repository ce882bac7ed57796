"""Index-one truncations: the family of lifts over the Weierstrass line.

For p strictly between 1 and n-1 every point of the line lifts along one
line of regular nilpotents.  For p = 1 and p = n-1 the line lifts only away
from the origin, and the origin gets a separate lift.
"""
import sys
from fractions import Fraction
from math import gcd

from meanderlift import oracle
from meanderlift.assemble import weierstrass_lift_index_one
from meanderlift.biparabolic import DoublePartition

n = int(sys.argv[1]) if len(sys.argv) > 1 else 7
for p in range(1, n):
    if gcd(p, n) != 1:
        continue
    fam = weierstrass_lift_index_one(DoublePartition(n, [n], [p, n - p]))
    regular = [c for c in (0, 1, -1, Fraction(1, 3)) if oracle.is_regular_nilpotent(fam.member(c), n)]
    line = f"p={p}: exceptional {fam.exceptional}, case {fam.case}, regular at c in {[str(c) for c in regular]}"
    if fam.case == "end":
        line += f"; origin lifted with {fam.artificial}"
    print(line)
