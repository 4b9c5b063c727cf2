"""The clutched 3-fold of a facet circle action and its rational cohomology.

Ray indices of a clutched fan: 0..n-1 are the vertical rays (v_i, 0),
index n is the bottom ray (b, -1) and n+1 the top ray (0, 0, 1), where
b = v_m is the acting normal.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement

from .errors import InvalidPolytope, ToricError
from .exact_linalg import inverse, matmul, rref, solve
from .lattice_core import (MomentPolytope, Polytope3, det2, dot, fan_of,
                           require_valid, rotate, vertices)


def standard_labeling(P, m):
    """Relabel so that the acting facet is last and v_{n-1}, v_n = -e2, -e1.

    New facet j is old facet (j + m + 1) mod n.  The lattice change is in
    SL(2, Z) (both frames are clockwise) and the supports do not move.
    """
    P = require_valid(P.oriented())
    n = P.n
    Q = rotate(P, (m + 1) % n)
    a, c = Q.normal(n - 2), Q.normal(n - 1)
    # g [a c] = [-e2 -e1];  [a c]^{-1} = (1/det) [[c1, -c0], [-a1, a0]]
    dd = det2(a, c)
    inv = ((c[1] * dd, -c[0] * dd), (-a[1] * dd, a[0] * dd))
    target = ((0, -1), (-1, 0))  # columns -e2 and -e1
    g = tuple(tuple(sum(target[r][k] * inv[k][s] for k in range(2)) for s in range(2))
              for r in range(2))
    normals = [(g[0][0] * v[0] + g[0][1] * v[1], g[1][0] * v[0] + g[1][1] * v[1])
               for v in Q.normals]
    return MomentPolytope(normals, Q.supports, Q.labels)


@dataclass(frozen=True)
class ClutchedFan:
    base: MomentPolytope
    facet: int
    b: tuple
    c_prime: Fraction
    rays: tuple
    fan: object
    polytope3: Polytope3

    @property
    def n(self):
        return self.base.n

    @property
    def bottom(self):
        return self.n

    @property
    def top(self):
        return self.n + 1

    def ray_name(self, i):
        if i == self.n:
            return "b"
        if i == self.n + 1:
            return "t"
        return str(i + 1)

    def ray_index(self, name):
        name = str(name)
        if name.startswith("Z"):
            name = name[1:]
        if name == "b":
            return self.n
        if name == "t":
            return self.n + 1
        return int(name) - 1

    def is_standard(self):
        """True when the base frame matches the canonical two-facet frame."""
        n = self.n
        return (self.facet == n - 1 and self.base.normal(n - 2) == (0, -1)
                and self.base.normal(n - 1) == (-1, 0))


def clutch(P, m, c_prime=None):
    P = require_valid(P.oriented())
    n = P.n
    m %= n
    b = P.normal(m)
    top = max(dot(b, x) for x in vertices(P))
    c_prime = top + 1 if c_prime is None else Fraction(c_prime)
    if c_prime <= top:
        raise InvalidPolytope("c' must exceed max <x, b> = %s" % top)
    rays = tuple((v[0], v[1], 0) for v in P.normals) + ((b[0], b[1], -1), (0, 0, 1))
    supports = tuple(P.supports) + (c_prime, Fraction(0))
    P3 = Polytope3(rays, supports)
    fan = fan_of(P3)
    if len(fan.max_cones) != 2 * n:
        raise ToricError("clutched polytope has %d vertices, expected %d"
                         % (len(fan.max_cones), 2 * n))
    return ClutchedFan(P, m, b, c_prime, rays, fan, P3)


def standard_context(P, m, c_prime=None):
    """Clutch the action of facet m after the canonical relabeling."""
    Q = standard_labeling(P, m)
    return clutch(Q, Q.n - 1, c_prime)


# -- cohomology ring -------------------------------------------------------

def monomial_name(cf, mono):
    return "".join("Z" + cf.ray_name(i) for i in mono) or "1"


def short_name(cf, mono):
    """Index notation used for matrix entries: (0, n) -> '1b'."""
    return "".join(cf.ray_name(i) for i in mono) or "0"


@dataclass
class GradedRing:
    cf: ClutchedFan
    bases: dict                 # degree -> list of monomials (sorted tuples)
    reductions: dict            # monomial -> {basis index: coeff}
    faces: frozenset
    top_value: Fraction         # integral of bases[3][0]
    betti: tuple = field(default=())

    def is_face(self, mono):
        return frozenset(mono) in self.faces

    def reduce_monomial(self, mono):
        mono = tuple(sorted(mono))
        if not self.is_face(mono):
            return {}
        d = len(mono)
        if d > 3:
            return {}
        return dict(self.reductions[mono])

    def reduce(self, poly):
        """poly: {monomial: coeff} of one degree -> {basis index: coeff}."""
        out = {}
        for mono, c in poly.items():
            for k, v in self.reduce_monomial(mono).items():
                out[k] = out.get(k, 0) + c * v
        return {k: v for k, v in out.items() if v}

    def integral(self, mono):
        mono = tuple(sorted(mono))
        if len(mono) != 3:
            return Fraction(0)
        red = self.reduce_monomial(mono)
        return red.get(0, Fraction(0)) * self.top_value

    def basis_names(self, degree):
        return [monomial_name(self.cf, m) for m in self.bases[degree]]


def _faces(fan):
    faces = set()
    for c in fan.max_cones:
        c = tuple(c)
        for mask in range(1 << len(c)):
            faces.add(frozenset(c[i] for i in range(len(c)) if mask >> i & 1))
    return frozenset(faces)


def _preferred(cf, degree):
    """Preferred basis monomials for the canonical labeling."""
    n, b = cf.n, cf.n
    if degree == 1:
        return [(i,) for i in range(n - 2)] + [(b,)]
    if degree == 2:
        return [(0, 1), (0, b)] + [(i, b) for i in range(1, n - 2)]
    if degree == 3:
        return [(0, 1, b)]
    return [()]


def cohomology_ring(cf):
    rays = cf.rays
    N = len(rays)
    faces = _faces(cf.fan)
    # linear relations: sum_l <eta_l, e_j> Z_l
    lin = [{(l,): Fraction(rays[l][j]) for l in range(N) if rays[l][j]} for j in range(3)]
    bases, reductions, betti = {}, {}, []
    for d in range(0, 5):
        monos = [m for m in combinations_with_replacement(range(N), d) if frozenset(m) in faces]
        pref = [m for m in (_preferred(cf, d) if cf.is_standard() else []) if m in monos]
        order = pref + [m for m in monos if m not in pref]   # most preferred first
        cols = list(reversed(order))
        col_of = {m: i for i, m in enumerate(cols)}
        rows = []
        if d >= 1:
            lower = [m for m in combinations_with_replacement(range(N), d - 1)
                     if frozenset(m) in faces]
            for L in lin:
                for m in lower:
                    row = [Fraction(0)] * len(cols)
                    for (l,), c in L.items():
                        prod = tuple(sorted(m + (l,)))
                        if prod in col_of:
                            row[col_of[prod]] += c
                    if any(row):
                        rows.append(row)
        R, pivots = rref(rows, len(cols)) if cols else ([], ())
        free = [i for i in range(len(cols)) if i not in pivots]
        basis_cols = sorted(free, reverse=True)      # back to preference order
        basis = [cols[i] for i in basis_cols]
        index = {c: k for k, c in enumerate(basis_cols)}
        for c in basis_cols:
            reductions[cols[c]] = {index[c]: Fraction(1)}
        for row, p in zip(R, pivots):
            reductions[cols[p]] = {index[c]: -row[c] for c in basis_cols if row[c]}
        bases[d] = basis
        betti.append(len(basis))
    if betti[4] != 0 or betti[0] != 1 or betti[3] != 1:
        raise ToricError("unexpected Betti numbers %r" % (betti,))
    ring = GradedRing(cf, bases, reductions, faces, Fraction(1), tuple(betti[:4]))
    # normalize: a square-free cone monomial integrates to 1
    cone = tuple(sorted(cf.fan.max_cones[0]))
    c = ring.reduce_monomial(cone).get(0)
    ring.top_value = 1 / c
    if sum(ring.betti) != len(cf.fan.max_cones):
        raise ToricError("sum of Betti numbers differs from the number of maximal cones")
    return ring


def triple_integral(ring, i, j, k):
    cf = ring.cf
    idx = [cf.ray_index(x) if isinstance(x, str) else x for x in (i, j, k)]
    return ring.integral(tuple(idx))


@dataclass
class PairingMatrices:
    basis: list          # monomials, degree ascending
    names: list          # short names ('0', '1', 'b', '12', '1b', ..., top)
    G: list
    Ginv: list

    def _pos(self, name):
        return self.names.index(name)

    def g(self, a, b):
        return self.G[self._pos(a)][self._pos(b)]

    def ginv(self, a, b):
        return self.Ginv[self._pos(a)][self._pos(b)]

    def block(self, rows, cols):
        return [[self.g(r, c) for c in cols] for r in rows]


def pairing_matrices(ring):
    cf = ring.cf
    basis = [m for d in range(4) for m in ring.bases[d]]
    names = [short_name(cf, m) for m in basis]
    names[-1] = "M"
    size = len(basis)
    G = [[Fraction(0)] * size for _ in range(size)]
    for a in range(size):
        for c in range(size):
            mono = basis[a] + basis[c]
            if len(mono) == 3:
                G[a][c] = ring.integral(mono)
            elif len(mono) == 0 or len(mono) == 6:
                pass
    # degree 0 x degree 6 entries
    G[0][size - 1] = G[size - 1][0] = Fraction(1)
    Ginv = inverse(G)
    ident = matmul(G, Ginv)
    if any(ident[r][c] != (1 if r == c else 0) for r in range(size) for c in range(size)):
        raise ToricError("pairing matrix inversion failed")
    return PairingMatrices(basis, names, G, Ginv)


# -- curve classes ---------------------------------------------------------

def _degree_one_basis(ring):
    return [m[0] for m in ring.bases[1]]


def h2_lambda_basis(cf, ring=None):
    """Classes in R(Sigma) dual to the degree-2 basis (lambda_1.., lambda_b)."""
    ring = ring or cohomology_ring(cf)
    chosen = _degree_one_basis(ring)
    N = len(cf.rays)
    others = [i for i in range(N) if i not in chosen]
    out = []
    for j in chosen:
        # gamma_j = 1, other chosen = 0, solve for the rest
        A = [[cf.rays[o][r] for o in others] for r in range(3)]
        rhs = [-cf.rays[j][r] for r in range(3)]
        x = solve(A, rhs)
        g = [Fraction(0)] * N
        g[j] = Fraction(1)
        for o, val in zip(others, x):
            g[o] = val
        out.append(tuple(g))
    return out


def wall_gamma(cf, s1, s2):
    """Full (gamma_1..gamma_n, gamma_b, gamma_t) of the curve joining two cones."""
    s1, s2 = frozenset(s1), frozenset(s2)
    shared = s1 & s2
    if len(shared) != 2 or s1 == s2:
        raise ValueError("cones %s and %s are not adjacent" % (sorted(s1), sorted(s2)))
    (p,), (q,) = tuple(s1 - shared), tuple(s2 - shared)
    a, c = sorted(shared)
    R = cf.rays
    # eta_p + eta_q + alpha eta_a + beta eta_c = 0 (three equations, two unknowns)
    eqs = [(R[a][r], R[c][r], -(R[p][r] + R[q][r])) for r in range(3)]
    sol = None
    for r1 in range(3):
        for r2 in range(r1 + 1, 3):
            d = eqs[r1][0] * eqs[r2][1] - eqs[r1][1] * eqs[r2][0]
            if d:
                al = Fraction(eqs[r1][2] * eqs[r2][1] - eqs[r1][1] * eqs[r2][2], d)
                be = Fraction(eqs[r1][0] * eqs[r2][2] - eqs[r1][2] * eqs[r2][0], d)
                sol = (al, be)
                break
        if sol:
            break
    al, be = sol
    for r in range(3):
        if al * R[a][r] + be * R[c][r] + R[p][r] + R[q][r] != 0:
            raise ToricError("wall relation is inconsistent")
    g = [0] * len(R)
    g[p] += 1
    g[q] += 1
    g[a] += int(al)
    g[c] += int(be)
    return tuple(g)


def wall_class(cf, s1, s2, ring=None):
    """lambda-coordinates of the invariant sphere between adjacent cones."""
    ring = ring or cohomology_ring(cf)
    g = wall_gamma(cf, s1, s2)
    return tuple(g[j] for j in _degree_one_basis(ring))


def gamma_from_lambda(cf, coords, ring=None):
    lam = h2_lambda_basis(cf, ring)
    N = len(cf.rays)
    out = [Fraction(0)] * N
    for c, vec in zip(coords, lam):
        for i in range(N):
            out[i] += c * vec[i]
    return tuple(int(x) for x in out)


def curve_area(cf, gamma):
    return sum((Fraction(g) * k for g, k in zip(gamma, cf.polytope3.supports)), Fraction(0))


def curve_chern(gamma):
    return sum(gamma)


def named_classes(cf, ring=None):
    """A_max, A_n, A_1 as full gamma vectors (canonical labeling only)."""
    ring = ring or cohomology_ring(cf)
    if not cf.is_standard():
        raise ToricError("named classes need the canonical labeling")
    n = cf.n
    m = len(ring.bases[1])
    def lam(**kw):
        v = [0] * m
        for k, val in kw.items():
            v[{"l1": 0, "l2": 1, "lb": m - 1}[k]] = val
        return gamma_from_lambda(cf, v, ring)
    return {"A_max": lam(lb=1), "A_n": lam(l1=1), "A_1": lam(l1=-2, l2=1)}


def cones_by_name(cf):
    """The ten named cones sigma_1..sigma_10 of the canonical labeling."""
    n, b, t = cf.n, cf.n, cf.n + 1
    z = lambda k: n - 1 if k == "n" else (n - 2 if k == "n-1" else (n - 3 if k == "n-2" else k - 1))
    table = {1: ("n-2", "n-1", b), 2: ("n-1", "n", b), 3: (1, "n", b), 4: (1, 2, b),
            5: (2, 3, b), 6: ("n-2", "n-1", t), 7: ("n-1", "n", t), 8: (1, "n", t),
            9: (1, 2, t), 10: (2, 3, t)}
    out = {}
    for k, (x, y, w) in table.items():
        out[k] = frozenset((z(x), z(y), w))
    return out
