"""Hypothesis strategies: random NEF polygons by repeated corner chopping."""

from fractions import Fraction as Fr

from hypothesis import strategies as st

from toric_seidel.catalog import cp2, hirzebruch_even, hirzebruch_odd
from toric_seidel.lattice_core import MomentPolytope, edge_lengths, require_valid
from toric_seidel.seidel_engine import chern_values

rationals = st.builds(Fr, st.integers(1, 12), st.integers(1, 6))


def chop(P, i, frac):
    """Blow up the vertex between facets i and i+1, cutting a fraction of the shorter edge."""
    n = P.n
    j = (i + 1) % n
    lengths = edge_lengths(P)
    eps = frac * min(lengths[i], lengths[j])
    a, b = P.normal(i), P.normal(j)
    w = (a[0] + b[0], a[1] + b[1])
    normals = list(P.normals)
    supports = list(P.supports)
    normals.insert(i + 1, w)
    supports.insert(i + 1, supports[i] + supports[j] - eps)
    return require_valid(MomentPolytope(tuple(normals), tuple(supports)))


@st.composite
def bases(draw):
    kind = draw(st.sampled_from(["cp2", "f0", "f1", "f2"]))
    if kind == "cp2":
        return cp2(draw(rationals) + 1)
    mu = draw(rationals)
    if kind == "f0":
        return hirzebruch_even(0, mu)
    if kind == "f1":
        return hirzebruch_odd(1, mu)
    return hirzebruch_even(1, mu + 1)


@st.composite
def nef_polytopes(draw, max_chops=4):
    P = draw(bases())
    for _ in range(draw(st.integers(0, max_chops))):
        cs = chern_values(P)
        ok = [i for i in range(P.n) if cs[i] >= 1 and cs[(i + 1) % P.n] >= 1]
        if not ok:
            break
        i = draw(st.sampled_from(ok))
        frac = draw(st.sampled_from([Fr(1, 2), Fr(1, 3), Fr(2, 3), Fr(1, 4), Fr(3, 5)]))
        P = chop(P, i, frac)
    return P
