"""Walk through the Seidel elements of a four-point blow-up and of a NEF surface."""

from fractions import Fraction as Fr

from toric_seidel.catalog import X4_CLASSES, nef7, x4
from toric_seidel.divisor_geometry import classify, facet_class
from toric_seidel.seidel_engine import dispatch_case, render_closed_form, seidel_element

P = x4(2, Fr(1, 4), Fr(1, 3), Fr(1, 5))
cl = classify(P)
print("x4:", cl.kind, "chern pattern", cl.chern_pattern)

# one element per facet, normalized so the weights are centered at the centroid
for m in range(P.n):
    e = seidel_element(P, m, 6, normalized=True)
    print("facet %d  case %-10s" % (m + 1, dispatch_case(P, m)), render_closed_form(e, X4_CLASSES))

# the expansion of facet 2 down to a window of 6 below the leading term
e = seidel_element(P, 1, 6, normalized=True)
names = {facet_class(P, i): name for i, name in X4_CLASSES.items()}
print(e.series.render(lambda c: names[c]))

# a NEF surface whose acting facet sits next to two zero-chern facets
Q = nef7()
print("nef7:", classify(Q).chern_pattern)
e = seidel_element(Q, 1, 6)
print("facet 2  case", dispatch_case(Q, 1))
print(render_closed_form(e))
