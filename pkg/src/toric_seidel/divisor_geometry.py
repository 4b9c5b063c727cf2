"""Facet divisors of a toric surface: classes, self-intersections, chern numbers."""

from dataclasses import dataclass
from fractions import Fraction

from .lattice_core import det2, require_valid, _multiple_of
from .errors import InvalidPolytope


@dataclass(frozen=True)
class CurveClass:
    """Integer vector (a_1..a_n) with sum a_i v_i = 0; a_i = D_i . C."""
    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(int(a) for a in self.coeffs))

    def __add__(self, other):
        return CurveClass(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        return CurveClass(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        return CurveClass(tuple(-a for a in self.coeffs))

    def __mul__(self, k):
        return CurveClass(tuple(k * a for a in self.coeffs))

    __rmul__ = __mul__

    def __lt__(self, other):
        return self.coeffs < other.coeffs

    def is_zero(self):
        return not any(self.coeffs)

    @classmethod
    def zero(cls, n):
        return cls((0,) * n)


def in_kernel(P, c):
    x = sum(a * v[0] for a, v in zip(c.coeffs, P.normals))
    y = sum(a * v[1] for a, v in zip(c.coeffs, P.normals))
    return x == 0 and y == 0


def self_intersection_d(P, i):
    n = P.n
    prev, cur, nxt = P.normal(i - 1), P.normal(i), P.normal(i + 1)
    d = _multiple_of((prev[0] + nxt[0], prev[1] + nxt[1]), cur)
    if d is None:
        raise InvalidPolytope("v_%d + v_%d is not a multiple of v_%d"
                              % ((i - 1) % n + 1, (i + 1) % n + 1, i % n + 1))
    return d


def facet_class(P, i):
    n = P.n
    a = [0] * n
    a[(i - 1) % n] += 1
    a[(i + 1) % n] += 1
    a[i % n] -= self_intersection_d(P, i)
    return CurveClass(tuple(a))


def chern_number(c):
    return sum(c.coeffs)


def symplectic_area(P, c):
    return sum((a * k for a, k in zip(c.coeffs, P.supports)), Fraction(0))


@dataclass(frozen=True)
class FacetReport:
    index: int
    d: int
    self_intersection: int
    chern: int
    area: Fraction
    curve: CurveClass


@dataclass(frozen=True)
class Classification:
    kind: str
    facets: tuple

    @property
    def chern_pattern(self):
        return tuple(f.chern for f in self.facets)


FANO, NEF, NON_NEF = "Fano", "NEF-not-Fano", "non-NEF"


def facet_reports(P):
    out = []
    for i in range(P.n):
        d = self_intersection_d(P, i)
        c = facet_class(P, i)
        out.append(FacetReport(i, d, -d, 2 - d, symplectic_area(P, c), c))
    return tuple(out)


def classify(P):
    """Fano / NEF-not-Fano / non-NEF, decided on facet classes."""
    require_valid(P)
    reps = facet_reports(P)
    cherns = [r.chern for r in reps]
    if all(c > 0 for c in cherns):
        kind = FANO
    elif all(c >= 0 for c in cherns):
        kind = NEF
    else:
        kind = NON_NEF
    return Classification(kind, reps)


def is_nef(P):
    return all(2 - self_intersection_d(P, i) >= 0 for i in range(P.n))


def h2_basis(P):
    """Kernel lattice basis: one vector per facet j >= 2.

    v_0, v_1 form a lattice basis (smoothness), so v_j = x v_0 + y v_1 with
    integers and e_j - x e_0 - y e_1 spans the kernel together with its
    siblings.  The expansion of any class is then just its coordinates
    2..n-1.
    """
    n = P.n
    v0, v1 = P.normal(0), P.normal(1)
    dd = det2(v0, v1)
    basis = []
    for j in range(2, n):
        w = P.normal(j)
        x = det2(w, v1) // dd
        y = det2(v0, w) // dd
        a = [0] * n
        a[j] = 1
        a[0] = -x
        a[1] = -y
        basis.append(CurveClass(tuple(a)))
    return basis


def expand_in_basis(P, c):
    """Integer coordinates of c in h2_basis(P)."""
    if not in_kernel(P, c):
        raise ValueError("class is not in the kernel lattice")
    return tuple(c.coeffs[2:])
