"""Genus-0 one-point invariants of the clutched 3-fold by torus localization.

Fixed-point graphs are trees whose vertices are maximal cones and whose
edges are invariant spheres.  A graph with one marked point is stored as
a tree rooted at the marked vertex:

    Tree = (cone, ((neighbor_cone, multiplicity, Tree), ...))

with branches sorted, so equal trees have equal representations.  Only
multiplicity-one edges are evaluated.
"""

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from collections import Counter
from math import factorial

from .clutching_cohomology import (cohomology_ring, curve_area, named_classes,
                                   wall_gamma, pairing_matrices)
from .errors import (DatabaseMiss, MultiplicityUnsupported, ToricError,
                     WeightDependence)
from .exact_linalg import solve
from .lattice_core import dot


@dataclass(frozen=True)
class DecoratedGraph:
    tree: tuple

    def vertices(self):
        out = []

        def walk(t):
            out.append(t[0])
            for _, _, child in t[1]:
                walk(child)
        walk(self.tree)
        return out

    def edges(self):
        out = []

        def walk(t):
            for nb, d, child in t[1]:
                out.append((t[0], nb, d))
                walk(child)
        walk(self.tree)
        return out

    @property
    def marked_cone(self):
        return self.tree[0]

    def automorphisms(self):
        return _aut(self.tree)


def _aut(t):
    counts = Counter(t[1])
    out = 1
    for branch, k in counts.items():
        out *= factorial(k) * _aut(branch[2]) ** k
    return out


class FanData:
    """Adjacency, wall classes and cached dual bases of a clutched fan.

    Cones are sorted tuples of ray indices.
    """

    def __init__(self, cf):
        self.cf = cf
        self.cones = sorted(tuple(sorted(c)) for c in cf.fan.max_cones)
        self.adj = {c: [] for c in self.cones}
        for i, a in enumerate(self.cones):
            for b in self.cones[i + 1:]:
                if len(set(a) & set(b)) == 2:
                    self.adj[a].append(b)
                    self.adj[b].append(a)
        self.gamma = {}
        for a in self.cones:
            for b in self.adj[a]:
                self.gamma[(a, b)] = wall_gamma(self.cf, a, b)
        self._dual = {}

    def dual_vector(self, s1, s2):
        """u with <u, eta_p> = 1 for the ray p of s1 not in s2, 0 on the shared rays."""
        key = (s1, s2)
        if key not in self._dual:
            R = self.cf.rays
            shared = sorted(set(s1) & set(s2))
            (p,) = tuple(set(s1) - set(s2))
            A = [R[shared[0]], R[shared[1]], R[p]]
            self._dual[key] = tuple(solve(A, [0, 0, 1]))
        return self._dual[key]


def _cone(c):
    return tuple(sorted(c))


def fixed_weight(fd, s1, s2, w):
    """Tangent weight at the fixed point s1 along the sphere towards s2."""
    u = fd.dual_vector(_cone(s1), _cone(s2))
    return sum((dot(eta, u) * wl for eta, wl in zip(fd.cf.rays, w)), Fraction(0))


def flag_weight(fd, s1, s2, d, w):
    return fixed_weight(fd, s1, s2, w) / d


def _effective_sums(fd, target_area):
    """All sums of wall classes with total area <= target_area."""
    walls = {}
    for g in fd.gamma.values():
        ar = curve_area(fd.cf, g)
        if ar <= 0:
            raise ToricError("invariant sphere with nonpositive area")
        walls[g] = ar
    zero = tuple([0] * len(fd.cf.rays))
    seen = {zero: Fraction(0)}
    frontier = [zero]
    while frontier:
        nxt = []
        for c in frontier:
            for g, ar in walls.items():
                s = tuple(x + y for x, y in zip(c, g))
                a = seen[c] + ar
                if a <= target_area and s not in seen:
                    seen[s] = a
                    nxt.append(s)
        frontier = nxt
    return seen


def enumerate_trees(fd, target, root_cones=None, max_mult=3):
    """All rooted fixed-point trees of class `target` (gamma tuple).

    Edges of multiplicity up to max_mult are generated so that callers can
    detect (and refuse) classes that need them.
    """
    target = tuple(target)
    eff = _effective_sums(fd, curve_area(fd.cf, target))
    if target not in eff:
        return []
    zero = tuple([0] * len(target))

    def sub(c, g):
        return tuple(x - y for x, y in zip(c, g))

    @lru_cache(maxsize=None)
    def branches(cone, cls):
        # (neighbor, d, subtree) whose edge plus subtree carry class cls
        out = []
        for nb in fd.adj[cone]:
            g = fd.gamma[(cone, nb)]
            for d in range(1, max_mult + 1):
                rest = sub(cls, tuple(d * x for x in g))
                if rest in eff:
                    out.extend((nb, d, t) for t in trees(nb, rest))
        return tuple(out)

    @lru_cache(maxsize=None)
    def trees(cone, cls):
        if cls == zero:
            return ((cone, ()),)
        cands = []
        for B in eff:
            if B != zero and sub(cls, B) in eff:
                cands.extend((B, br) for br in branches(cone, B))
        cands.sort(key=repr)
        out = []

        def rec(start, remaining, chosen):
            if remaining == zero:
                out.append((cone, tuple(sorted(chosen, key=repr))))
                return
            for i in range(start, len(cands)):
                B, br = cands[i]
                rest = sub(remaining, B)
                if rest in eff:
                    rec(i, rest, chosen + [br])
        rec(0, cls, [])
        return tuple(out)

    roots = fd.cones if root_cones is None else [_cone(c) for c in root_cones]
    found = set()
    for r in roots:
        found.update(trees(r, target))
    return sorted(found, key=repr)


def enumerate_graphs(cf, A, marked_cones=None, fd=None):
    fd = fd or FanData(cf)
    graphs = [DecoratedGraph(t) for t in enumerate_trees(fd, A, marked_cones)]
    for g in graphs:
        if any(d != 1 for _, _, d in g.edges()):
            raise MultiplicityUnsupported(
                "class %r has a fixed-point graph with a multiple edge" % (tuple(A),))
    return graphs


def _unrooted_form(tree):
    # adjacency of the labeled tree, then the smallest rooted canonical form
    labels, nbrs = [], []

    def walk(t, parent):
        me = len(labels)
        labels.append(t[0])
        nbrs.append([])
        if parent is not None:
            nbrs[me].append(parent)
            nbrs[parent].append(me)
        for _, _, child in t[1]:
            walk(child, me)
    walk(tree, None)

    def rooted(v, parent):
        return (labels[v], tuple(sorted(rooted(u, v) for u in nbrs[v] if u != parent)))
    return min(rooted(v, None) for v in range(len(labels)))


def distinct_unmarked(graphs):
    """Forget the marked point; return the distinct underlying graphs."""
    return sorted({_unrooted_form(g.tree) for g in graphs}, key=repr)


def _total_weight(fd, cone, w):
    out = Fraction(1)
    for nb in fd.adj[cone]:
        out *= fixed_weight(fd, cone, nb, w)
    return out


def _edge_factor(fd, s1, s2, w):
    """Multiplicity-one edge: normal bundle and tangent contributions."""
    wt = fixed_weight(fd, s1, s2, w)
    out = -1 / (wt * wt)
    gamma = fd.gamma[(s1, s2)]
    for alpha in fd.adj[s1]:
        if alpha == s2:
            continue
        (i_alpha,) = tuple(set(s1) - set(alpha))
        lam = gamma[i_alpha]
        wa = fixed_weight(fd, s1, alpha, w)
        num = Fraction(1)
        for i in range(lam + 1, 0):
            num *= wa - i * wt
        den = Fraction(1)
        for i in range(0, lam + 1):
            den *= wa - i * wt
        out *= num / den
    return out


def restriction(fd, cone, ray, w):
    """Z_ray restricted to the fixed point of `cone`."""
    if ray not in cone:
        return Fraction(0)
    for nb in fd.adj[cone]:
        if ray not in nb:
            return fixed_weight(fd, cone, nb, w)
    raise ToricError("no neighbor cone without ray %d" % ray)


def graph_term(fd, graph, insertion, w):
    """(1/|Aut|) T S for one graph; insertion is a tuple of ray indices."""
    value = Fraction(1)
    marked = True

    def vertex(cone, flags, marks):
        val = len(flags)
        inv = [1 / f for f in flags]
        s = sum(inv, Fraction(0))
        out = _total_weight(fd, cone, w) ** (val - 1)
        for f in inv:
            out *= f
        e = val + marks - 3
        if e >= 0:
            out *= s ** e
        else:
            if s == 0:
                raise ZeroDivisionError
            out /= s ** (-e)
        return out

    def walk(t, parent):
        nonlocal value
        cone, brs = t
        flags = [fixed_weight(fd, cone, nb, w) for nb, d, _ in brs]
        if parent is not None:
            flags.append(fixed_weight(fd, cone, parent, w))
        value *= vertex(cone, flags, 1 if parent is None else 0)
        for nb, d, child in brs:
            if d != 1:
                raise MultiplicityUnsupported("edge of multiplicity %d" % d)
            value *= _edge_factor(fd, cone, nb, w)
            walk(child, cone)
    walk(graph.tree, None)
    for ray in insertion:
        value *= restriction(fd, graph.marked_cone, ray, w)
    return value / graph.automorphisms()


def random_weights(n_rays, rng):
    out = []
    while len(out) < n_rays:
        x = rng.randint(-10 ** 4, 10 ** 4)
        if x:
            out.append(Fraction(x))
    return out


def _marked_filter(fd, insertion):
    need = set(insertion)
    return [c for c in fd.cones if need <= set(c)]


def gw_one_point(cf, A, insertion, samples=3, seed=0, fd=None):
    """Localization sum, checked for independence of the weight sample."""
    fd = fd or FanData(cf)
    insertion = tuple(cf.ray_index(x) if isinstance(x, str) else x for x in insertion)
    graphs = enumerate_graphs(cf, A, _marked_filter(fd, insertion), fd)
    rng = random.Random(seed)
    values = []
    attempts = 0
    while len(values) < samples:
        attempts += 1
        if attempts > 50 * samples:
            raise ToricError("could not find a generic weight sample")
        w = random_weights(len(cf.rays), rng)
        try:
            values.append(sum((graph_term(fd, g, insertion, w) for g in graphs), Fraction(0)))
        except ZeroDivisionError:
            continue
    if len(set(values)) != 1:
        raise WeightDependence("localization sums disagree: %s" % values)
    return values[0]


def parse_insertion(text):
    """'Z1Zb' -> ('1', 'b')."""
    parts = [p for p in str(text).split("Z") if p]
    if not parts:
        raise ValueError("empty insertion %r" % text)
    return tuple(parts)


# -- closed forms ------------------------------------------------------------

CLOSED_FORM = {
    "Z1Z2": (0, 2),
    "Z1Zb": (1, 2),
    "Z2Zb": (0, -1),
}


def gw_closed_form(k, l, insertion):
    """GW of the section class A_max + k A_n + l A_1 (canonical context)."""
    if k < 0 or l < 0:
        raise ValueError("k, l must be nonnegative")
    key = insertion if isinstance(insertion, str) else "".join("Z" + str(x) for x in insertion)
    if key not in CLOSED_FORM:
        if key.startswith("Z") and key.endswith("Zb") and key[1:-2].isdigit() and int(key[1:-2]) >= 3:
            return Fraction(0)
        raise DatabaseMiss("no closed form for insertion %s" % key)
    ge, lt = CLOSED_FORM[key]
    return Fraction(ge if k >= l else lt)


def gw_zero_point(k, l):
    """Unmarked invariant of the fiber class k A_n + l A_1."""
    if k < 0 or l < 0 or (k == 0 and l == 0):
        raise ValueError("need (k, l) != (0, 0) with k, l >= 0")
    if l == 0:
        return Fraction(-1, k ** 3)
    if k == 0:
        return Fraction(-1, l ** 3)
    if k == l:
        return Fraction(-1, k ** 3)
    return Fraction(0)


@dataclass
class GWDatabase:
    """One- and zero-point data for the canonical two-facet context."""
    one_point: dict = field(default_factory=dict)
    zero_point: dict = field(default_factory=dict)

    def one(self, k, l, insertion):
        key = (k, l, insertion)
        if key not in self.one_point:
            self.one_point[key] = gw_closed_form(k, l, insertion)
        return self.one_point[key]

    def zero(self, k, l):
        key = (k, l)
        if key not in self.zero_point:
            self.zero_point[key] = gw_zero_point(k, l)
        return self.zero_point[key]


class SplittingContext:
    """Ring, pairing and class data needed by the splitting identities."""

    def __init__(self, cf, db=None):
        if not cf.is_standard():
            raise ToricError("splitting identities need the canonical labeling")
        self.cf = cf
        self.ring = cohomology_ring(cf)
        self.pm = pairing_matrices(self.ring)
        self.db = db or GWDatabase()
        self.classes = named_classes(cf, self.ring)
        self.d2 = self._d(1)

    def _d(self, i):
        from .divisor_geometry import self_intersection_d
        return self_intersection_d(self.cf.base, i)

    def pair_class(self, gamma, ray):
        return Fraction(gamma[ray])

    def gamma(self, section, k, l):
        c = self.classes
        g = [k * a + l * b for a, b in zip(c["A_n"], c["A_1"])]
        if section:
            g = [x + y for x, y in zip(g, c["A_max"])]
        return tuple(g)

    def three_point(self, section, k, l, x, y, e):
        """GW_{C,3}(x, y, e): x, y rays; e a basis monomial."""
        ring, cf = self.ring, self.cf
        if not section and k == 0 and l == 0:
            if len(e) != 1:
                return Fraction(0)
            return ring.integral((x, y) + e)
        g = self.gamma(section, k, l)
        px, py = self.pair_class(g, x), self.pair_class(g, y)
        if section:
            if len(e) != 2:
                return Fraction(0)
            return px * py * self.db.one(k, l, "".join("Z" + cf.ray_name(i) for i in e))
        if len(e) != 1:
            return Fraction(0)
        return px * py * self.pair_class(g, e[0]) * self.db.zero(k, l)


def splitting_sum(ctx, k, l, insertions, partition):
    """Splitting expansion of the four-point invariant of A_max + kA_n + lA_1.

    insertions: four ray names; partition: two index pairs, e.g. ((0,1),(2,3)).
    """
    cf, pm = ctx.cf, ctx.pm
    ins = [cf.ray_index(x) if isinstance(x, str) else x for x in insertions]
    (i, j), (p, r) = partition
    basis = pm.basis
    total = Fraction(0)
    for k0 in range(k + 1):
        for l0 in range(l + 1):
            for sec0 in (True, False):
                sec1 = not sec0
                k1, l1 = k - k0, l - l0
                for a, ea in enumerate(basis):
                    left = ctx.three_point(sec0, k0, l0, ins[i], ins[j], ea)
                    if not left:
                        continue
                    for b, eb in enumerate(basis):
                        gi = pm.Ginv[a][b]
                        if not gi:
                            continue
                        right = ctx.three_point(sec1, k1, l1, ins[p], ins[r], eb)
                        total += left * gi * right
    return total


def recursion_checks(ctx, k, l):
    """Evaluate the recursion identities; returns {name: (lhs, rhs)}.

    Here a = k - 2l.  The right-hand sides differ between k >= l and k < l.
    """
    g = lambda ins: gw_closed_form(k, l, ins)
    a, b, c = g("Z1Zb"), g("Z1Z2"), g("Z2Zb")
    d2 = ctx.d2
    out = {}
    if k >= l:
        out["aZ1Zb+Z1Z2"] = ((k - 2 * l) * a + b, Fraction(k - 2 * l))
        out["lZ1Zb+aZ2Zb-Z1Z2"] = (l * a + (k - 2 * l) * c - b, Fraction(l))
        out["Z2Zb-vs-Z1Z2"] = ((2 * l + 2 * d2 - 1) * c + d2 * b, Fraction(0))
    else:
        out["aZ1Zb+Z1Z2"] = ((k - 2 * l) * a + b, Fraction(2 * k - 4 * l + 2))
        out["lZ1Zb+aZ2Zb-Z1Z2"] = (l * a + (k - 2 * l) * c - b, Fraction(4 * l - k - 2))
        out["Z2Zb-vs-Z1Z2"] = ((2 * l + 2 * d2 - 1) * c + d2 * b, Fraction(1 - 2 * l))
    pm = ctx.pm
    out["ginv-1-1b"] = (pm.ginv("1", "1b"), Fraction(-2))
    out["ginv-12-2b"] = (2 * pm.ginv("1", "12") - pm.ginv("1", "2b"), Fraction(3))
    return out


def recursion_verify(ctx, k, l):
    return all(lhs == rhs for lhs, rhs in recursion_checks(ctx, k, l).values())
