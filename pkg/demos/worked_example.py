"""Walk through the eight-point example: marks, modified arcs, straightening,
the joined chain and the regular nilpotent lift."""
from meanderlift import oracle
from meanderlift.biparabolic import DoublePartition
from meanderlift.pipeline import Policy, construct
from meanderlift.render import ascii_diagram

dp = DoublePartition(8, [[1, 8]], [[1, 2], [3, 6], [7, 8]])
c = construct(dp, Policy(marks=[["+", 2, 7], ["+", 4, 5], ["-", 3, 6], ["-", 7, 8]]))

print(ascii_diagram(c))
print("S      ", " ".join(str(r) for r in c.pair.S))
print("h      ", [str(x) for x in c.pair.h])
for se in c.straightened:
    print(f"edge {se.edge.points}: chain {se.chain.points}, value {se.value}")
nl = c.lift
print("Pi*    ", " ".join(str(r) for r in nl.piStar))
print("added  ", " ".join(str(r) for r in nl.added))
print("ranks of y^k:", oracle.power_ranks(nl.y, 8))
print("w      ", nl.w.permutation, "word", nl.w.letters)

cert = oracle.certify_truncation(dp, c.pair.S)
reg = oracle.regularity(dp, c.pair.S, cert)
print(f"h_Lambda: dim {cert.dimension} ({cert.status}); stabilizer of eta: {reg.stabilizerDim}; "
      f"half-integer meanders: {reg.halfintMeanders}; iota+ iota- orbits: {reg.indexMeander}")
