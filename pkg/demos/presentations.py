"""Quantum cohomology presentations and superpotentials, including a non-NEF Hirzebruch surface."""

from fractions import Fraction as Fr

from toric_seidel.catalog import hirzebruch_even, x4
from toric_seidel.quantum_algebra import (coefficients_for, hirzebruch4_lifts, hirzebruch_route,
                                          jacobian_ideal, potential_from_lifts, presentation,
                                          psi_kernel_check, render_exact, superpotential)

P = x4(2, Fr(1, 4), Fr(1, 3), Fr(1, 5))
pres = presentation(P)
print(len(pres.relations), "quadratic relations")
for rel in pres.relations[:3]:
    print(" ", pres.render_poly(rel.poly))
print("all in the kernel:", all(psi_kernel_check(pres, r.poly) for r in pres.relations))
print("W =", superpotential(P).render())

# F_4 is not NEF, so its elements come from composing loops of F_0 and F_2
R = hirzebruch_route(2, 3)
for name in ("e1", "e2", "v1", "v2", "v3", "v4"):
    print(name, render_exact(R.exact[name], R.C))

F4 = hirzebruch_even(2, 3)
C = coefficients_for(F4, [Fr(1, 18)])
W = potential_from_lifts(F4, hirzebruch4_lifts(F4, C), C)
print("W =", W.render())
for d in jacobian_ideal(W):
    print("  ", d.render())
