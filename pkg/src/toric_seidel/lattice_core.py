"""Integer lattice geometry for Delzant polygons and their 3-d clutchings.

Facets are numbered from 0 in the stored cyclic order.  Most of the
package works with the clockwise convention det(v_i, v_{i+1}) = -1;
`MomentPolytope.oriented()` converts a counter-clockwise listing.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .errors import InvalidPolytope


def det2(u, v):
    return u[0] * v[1] - u[1] * v[0]


def det3(a, b, c):
    return (a[0] * (b[1] * c[2] - b[2] * c[1])
            - a[1] * (b[0] * c[2] - b[2] * c[0])
            + a[2] * (b[0] * c[1] - b[1] * c[0]))


def dot(u, v):
    return sum(x * y for x, y in zip(u, v))


def as_fraction(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        raise TypeError("float supports are not accepted; use Fraction or 'p/q'")
    return Fraction(x)


@dataclass(frozen=True)
class MomentPolytope:
    """P = {x : <v_i, x> <= kappa_i} with cyclically ordered primitive normals."""
    normals: tuple
    supports: tuple
    labels: tuple = None

    def __post_init__(self):
        normals = tuple(tuple(int(c) for c in v) for v in self.normals)
        supports = tuple(as_fraction(k) for k in self.supports)
        object.__setattr__(self, "normals", normals)
        object.__setattr__(self, "supports", supports)
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(str(s) for s in self.labels))

    @property
    def n(self):
        return len(self.normals)

    def label(self, i):
        if self.labels:
            return self.labels[i]
        return "D%d" % (i + 1)

    def normal(self, i):
        return self.normals[i % self.n]

    def support(self, i):
        return self.supports[i % self.n]

    def orientation(self):
        """+1 or -1 when all adjacent determinants agree, else 0."""
        signs = {det2(self.normal(i), self.normal(i + 1)) for i in range(self.n)}
        if signs == {1}:
            return 1
        if signs == {-1}:
            return -1
        return 0

    def oriented(self):
        """Return the clockwise version (det(v_i, v_{i+1}) = -1).

        A counter-clockwise listing is reversed while keeping facet 0 in
        place, so old facet i becomes facet (-i) mod n.
        """
        if self.orientation() != 1:
            return self
        return _reindex(self, [(-i) % self.n for i in range(self.n)])

    def with_supports(self, supports):
        return MomentPolytope(self.normals, supports, self.labels)


def _reindex(P, order):
    labels = tuple(P.labels[j] for j in order) if P.labels else None
    return MomentPolytope(tuple(P.normals[j] for j in order),
                          tuple(P.supports[j] for j in order), labels)


def rotate(P, shift):
    """Cyclic relabeling: new facet j is old facet j + shift."""
    return _reindex(P, [(j + shift) % P.n for j in range(P.n)])


@dataclass
class ValidationReport:
    violations: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.violations

    def add(self, check, index, message):
        self.violations.append((check, index, message))

    def __str__(self):
        if self.ok:
            return "ok"
        return "\n".join("%s at %s: %s" % v for v in self.violations)


def edge_lengths(P):
    """Lattice length of each edge: kappa_{i-1} - d_i kappa_i + kappa_{i+1}."""
    out = []
    for i in range(P.n):
        prev, cur, nxt = P.normal(i - 1), P.normal(i), P.normal(i + 1)
        s = (prev[0] + nxt[0], prev[1] + nxt[1])
        d = _multiple_of(s, cur)
        if d is None:
            out.append(None)
        else:
            out.append(P.support(i - 1) - d * P.support(i) + P.support(i + 1))
    return out


def _multiple_of(s, v):
    # d with s = d*v, or None
    if v[0]:
        if s[0] % v[0]:
            return None
        d = s[0] // v[0]
    elif v[1]:
        if s[1] % v[1]:
            return None
        d = s[1] // v[1]
    else:
        return None
    if (d * v[0], d * v[1]) != tuple(s):
        return None
    return d


def validate_delzant(P):
    rep = ValidationReport()
    n = len(P.normals)
    if n < 3:
        rep.add("size", None, "need at least 3 facets, got %d" % n)
        return rep
    if len(P.supports) != n:
        rep.add("size", None, "%d normals but %d supports" % (n, len(P.supports)))
        return rep

    for i, v in enumerate(P.normals):
        if len(v) != 2:
            rep.add("dimension", i, "normal %r is not 2-dimensional" % (v,))
            return rep
    for i, v in enumerate(P.normals):
        if math.gcd(abs(v[0]), abs(v[1])) != 1:
            rep.add("primitive", i, "normal not primitive: %r" % (v,))
            break

    dets = [det2(P.normal(i), P.normal(i + 1)) for i in range(n)]
    for i, d in enumerate(dets):
        if abs(d) != 1:
            rep.add("smooth", i, "det(v_%d, v_%d) = %d, not +-1" % (i + 1, (i + 1) % n + 1, d))
            break
    if all(abs(d) == 1 for d in dets) and len(set(dets)) > 1:
        i = next(k for k in range(n) if dets[k] != dets[0])
        rep.add("orientation", i, "rotation sense changes at vertex %d" % (i + 1))

    if rep.ok:
        turn = sum(math.atan2(det2(P.normal(i), P.normal(i + 1)),
                              dot(P.normal(i), P.normal(i + 1))) for i in range(n))
        winding = round(turn / (2 * math.pi))
        if abs(winding) != 1:
            rep.add("rotation", None, "normals wind %d times, expected once" % winding)

    if rep.ok:
        for i, ell in enumerate(edge_lengths(P)):
            if ell is None:
                rep.add("smooth", i, "v_{i-1} + v_{i+1} not a multiple of v_i")
                break
            if ell <= 0:
                rep.add("edge", i, "facet %d has edge length %s" % (i + 1, ell))
                break
    return rep


def require_valid(P):
    rep = validate_delzant(P)
    if not rep.ok:
        raise InvalidPolytope(str(rep))
    return P


def vertices(P):
    """Vertex i is the intersection of facets i and i+1."""
    out = []
    for i in range(P.n):
        a, b = P.normal(i), P.normal(i + 1)
        ka, kb = P.support(i), P.support(i + 1)
        d = det2(a, b)
        if d == 0:
            raise InvalidPolytope("parallel adjacent normals at vertex %d" % (i + 1))
        x = (ka * b[1] - kb * a[1]) / Fraction(d)
        y = (a[0] * kb - b[0] * ka) / Fraction(d)
        out.append((x, y))
    return out


def area(P):
    vs = vertices(P)
    s = sum(det2(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs)))
    return abs(s) / 2


def centroid(P):
    vs = vertices(P)
    a = Fraction(0)
    cx = cy = Fraction(0)
    for i in range(len(vs)):
        p, q = vs[i], vs[(i + 1) % len(vs)]
        c = det2(p, q)
        a += c
        cx += (p[0] + q[0]) * c
        cy += (p[1] + q[1]) * c
    a /= 2
    return (cx / (6 * a), cy / (6 * a))


def normalize_supports(P):
    c = centroid(P)
    return P.with_supports([k - dot(v, c) for v, k in zip(P.normals, P.supports)])


def reflect(P):
    """Mirror by (a, b) -> (a, -b); old facet i becomes facet (-i) mod n."""
    Q = _reindex(P, [(-i) % P.n for i in range(P.n)])
    return MomentPolytope(tuple((a, -b) for a, b in Q.normals), Q.supports, Q.labels)


def mirror_index(n, i):
    return (-i) % n


@dataclass(frozen=True)
class Polytope3:
    normals: tuple
    supports: tuple

    def __post_init__(self):
        object.__setattr__(self, "normals", tuple(tuple(int(c) for c in v) for v in self.normals))
        object.__setattr__(self, "supports", tuple(as_fraction(k) for k in self.supports))

    def vertices(self):
        """(point, tight facet indices) for every vertex."""
        out = []
        N = self.normals
        for trip in combinations(range(len(N)), 3):
            a, b, c = (N[i] for i in trip)
            d = det3(a, b, c)
            if d == 0:
                continue
            x = _solve3(a, b, c, [self.supports[i] for i in trip], d)
            vals = [dot(v, x) for v in N]
            if all(val <= k for val, k in zip(vals, self.supports)):
                tight = tuple(i for i, (val, k) in enumerate(zip(vals, self.supports)) if val == k)
                out.append((x, tight))
        seen = {}
        for x, tight in out:
            seen[x] = tight
        return sorted(seen.items(), key=lambda kv: kv[1])


def _solve3(a, b, c, rhs, d):
    # Cramer's rule for rows a, b, c
    cols = []
    for j in range(3):
        m = [list(a), list(b), list(c)]
        for r in range(3):
            m[r][j] = rhs[r]
        cols.append(Fraction(det3(*m), d))
    return tuple(cols)


@dataclass(frozen=True)
class Fan:
    rays: tuple
    max_cones: tuple
    dimension: int

    def cone_set(self):
        return {frozenset(c) for c in self.max_cones}

    def is_cone(self, rays):
        s = set(rays)
        return any(s <= set(c) for c in self.max_cones)


def fan_of(P):
    if isinstance(P, MomentPolytope):
        P = P.oriented()
        require_valid(P)
        cones = tuple(tuple(sorted((i, (i + 1) % P.n))) for i in range(P.n))
        return Fan(P.normals, cones, 2)
    verts = P.vertices()
    cones = []
    for x, tight in verts:
        if len(tight) != 3:
            raise InvalidPolytope("vertex %r is not simple (%d facets)" % (x, len(tight)))
        cones.append(tuple(sorted(tight)))
    fan = Fan(P.normals, tuple(sorted(cones)), 3)
    for c in fan.max_cones:
        if abs(det3(*(P.normals[i] for i in c))) != 1:
            raise InvalidPolytope("cone %r is not smooth" % (c,))
    return fan


def primitive_collections(F):
    """Minimal ray subsets spanning no cone (sizes 2 .. dim+1)."""
    out = []
    nr = len(F.rays)
    for size in range(2, F.dimension + 2):
        for sub in combinations(range(nr), size):
            if F.is_cone(sub):
                continue
            if all(F.is_cone(s) for s in combinations(sub, size - 1)):
                out.append(sub)
    return out
