"""One-point invariants of the clutched nef7 fibration, and the recursion they satisfy."""

from toric_seidel.catalog import nef7
from toric_seidel.clutching_cohomology import cohomology_ring, named_classes, pairing_matrices, standard_context
from toric_seidel.gw_localization import (FanData, SplittingContext, gw_closed_form, gw_one_point,
                                          parse_insertion, recursion_verify)

cf = standard_context(nef7(), 1)
ring = cohomology_ring(cf)
print("betti", ring.betti)

pm = pairing_matrices(ring)
print("B-block rows against (Z1Z2, Z1Zb, Z2Zb)")
for r in ("1", "2", "3", "b"):
    print("  Z%s" % r, " ".join(str(v) for v in pm.block([r], ["12", "1b", "2b"])[0]))

fd = FanData(cf)
names = named_classes(cf, ring)
A_max, A_n, A_1 = names["A_max"], names["A_n"], names["A_1"]


def plus(*cs):
    return tuple(map(sum, zip(*cs)))


# localization sums over fixed-point graphs with random torus weights
for label, A in (("A_max+A_n", plus(A_max, A_n)), ("A_max+A_n+A_1", plus(A_max, A_n, A_1)),
                 ("A_max+A_1", plus(A_max, A_1))):
    vals = [gw_one_point(cf, A, parse_insertion(ins), samples=3, fd=fd) for ins in ("Z1Zb", "Z1Z2", "Z2Zb")]
    print(label, " ".join(map(str, vals)))

# closed forms in the section degrees (k, l), checked against the splitting identities
ctx = SplittingContext(cf)
for k in range(4):
    print("k=%d" % k, " ".join(str(gw_closed_form(k, l, "Z1Zb")) for l in range(4)))
print("recursion holds up to (8, 8):", all(recursion_verify(ctx, k, l) for k in range(9) for l in range(9)))
