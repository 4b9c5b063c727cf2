"""Quantum products, Seidel-element composition, presentations and potentials.

Two coefficient layers coexist.  Windowed NovikovSeries (homological
direction) are used for quantum products and inversion, matching the
output of the Seidel engine.  Exact rational functions (exact_field) are
used wherever an identity has to hold on the nose: lifted generators,
ring presentations, normal forms and Landau-Ginzburg potentials.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement

from sympy.polys.rings import ring

from .catalog import hirzebruch_even
from .divisor_geometry import CurveClass, chern_number, facet_class, symplectic_area
from .errors import IntegrationError, NotNEF, UncoveredPattern
from .exact_field import Coefficients, Laurent
from .exact_linalg import rref
from .lattice_core import dot, fan_of, normalize_supports, primitive_collections, require_valid
from .novikov import HOM, NovikovSeries, QuantumClass, fmt_rational, invert_unit
from .seidel_engine import chern_values, seidel_element


# --- quantum products from a GW table ------------------------------------

def _conv(a, b):
    out = {}
    for (q1, t1), c1 in a.items():
        for (q2, t2), c2 in b.items():
            k = (q1 + q2, t1 + t2)
            out[k] = out.get(k, 0) + c1 * c2
    return {k: c for k, c in out.items() if c}


def _add_into(acc, key, terms):
    cur = acc.setdefault(key, {})
    for k, c in terms.items():
        cur[k] = cur.get(k, 0) + c
        if not cur[k]:
            del cur[k]


@dataclass(frozen=True)
class GWTable:
    """Structure constants: products[(a, b)] = {key: {(q, t): coeff}}."""
    basis: tuple
    unit: str
    products: dict
    name: str = ""

    def entry(self, a, b):
        if a == self.unit:
            return {b: {(0, Fraction(0)): Fraction(1)}}
        if b == self.unit:
            return {a: {(0, Fraction(0)): Fraction(1)}}
        if (a, b) in self.products:
            return self.products[(a, b)]
        return self.products[(b, a)]

    def max_shift(self):
        out = Fraction(0)
        for val in self.products.values():
            for terms in val.values():
                for (_, te) in terms:
                    out = max(out, abs(te))
        return out

    def times(self, x, b):
        """x * b for x = {key: terms} and a basis key b."""
        acc = {}
        for a, terms in x.items():
            for k, tt in self.entry(a, b).items():
                _add_into(acc, k, _conv(terms, tt))
        return {k: v for k, v in acc.items() if v}


def s2xs2_table(mu):
    """Quantum homology of S2 x S2 with areas (mu, 1); basis 1, F, B, p.

    Seeded by F*F = 1 q^-2 t^-mu, B*B = 1 q^-2 t^-1, F*B = p; the products
    with p follow by associativity.
    """
    mu = Fraction(mu)
    one = {(0, Fraction(0)): Fraction(1)}
    seeds = {("F", "F"): {"1": {(-2, -mu): Fraction(1)}},
             ("B", "B"): {"1": {(-2, Fraction(-1)): Fraction(1)}},
             ("F", "B"): {"p": one}}
    T = GWTable(("1", "F", "B", "p"), "1", dict(seeds), "S2xS2(mu=%s)" % fmt_rational(mu))
    FF = T.entry("F", "F")
    T.products[("F", "p")] = T.times(FF, "B")                   # F*(F*B) = (F*F)*B
    T.products[("B", "p")] = T.times(T.entry("B", "B"), "F")    # B*(B*F) = (B*B)*F
    T.products[("p", "p")] = T.times(T.times(FF, "B"), "B")     # (F*F)*(B*B)
    return T


def _check_keys(x, table):
    bad = set(x.keys()) - set(table.basis)
    if bad:
        raise ValueError("basis mismatch: %s not in %s" % (sorted(map(str, bad)), table.basis))


def quantum_product(x, y, table, E=None):
    """Bilinear extension of the table; truncated to window E if given."""
    _check_keys(x, table)
    _check_keys(y, table)
    comps = {}
    for a, xa in x.components.items():
        for b, yb in y.components.items():
            coef = xa * yb
            for k, terms in table.entry(a, b).items():
                term = coef * NovikovSeries(terms, None, x.direction)
                comps[k] = comps[k] + term if k in comps else term
    out = QuantumClass(comps, x.direction)
    return out.truncate(E) if E is not None else out


def unit_class(table, direction=HOM):
    return QuantumClass.basis(table.unit, None, direction)


def _mult_matrix(x, table):
    """M[k][j] = component k of x * basis_j (series entries)."""
    cols = []
    for b in table.basis:
        col = quantum_product(x, QuantumClass.basis(b, None, x.direction), table)
        cols.append([col.get(k) for k in table.basis])
    n = len(table.basis)
    return [[cols[j][k] for j in range(n)] for k in range(n)]


def qh_invert(x, table, E=6):
    """Inverse of x in quantum homology, exact on a window of width E.

    Solves (x *) y = [M] by Gaussian elimination over the Novikov field,
    pivoting on the entry with the largest leading exponent; truncation
    errors are tracked by the series bounds.
    """
    _check_keys(x, table)
    E = Fraction(E)
    lead = x.leading_exponent()
    if lead is None:
        raise ValueError("cannot invert zero")
    depth = E + 4 * (table.max_shift() + 1)
    M = _mult_matrix(x, table)
    n = len(M)
    rhs = [NovikovSeries.one(x.direction) if b == table.unit else NovikovSeries.zero(x.direction)
           for b in table.basis]
    for c in range(n):
        best = None
        for r in range(c, n):
            e = M[r][c]
            if e.is_zero():
                continue
            if best is None or e.leading_exponent() > M[best][c].leading_exponent():
                best = r
        if best is None:
            raise ValueError("non-invertible quantum class")
        M[c], M[best] = M[best], M[c]
        rhs[c], rhs[best] = rhs[best], rhs[c]
        try:
            inv = invert_unit(M[c][c], depth)
        except ValueError:
            raise ValueError("pivot has no invertible leading term") from None
        M[c] = [e * inv for e in M[c]]
        rhs[c] = rhs[c] * inv
        for r in range(n):
            if r != c and not M[r][c].is_zero():
                f = M[r][c]
                M[r] = [a - f * b for a, b in zip(M[r], M[c])]
                rhs[r] = rhs[r] - f * rhs[c]
    y = QuantumClass({b: rhs[i] for i, b in enumerate(table.basis)}, x.direction)
    return y.truncate(E)


def qc_power(x, k, table, E):
    if k < 0:
        return qc_power(qh_invert(x, table, E), -k, table, E)
    out = unit_class(table, x.direction)
    for _ in range(k):
        out = quantum_product(out, x, table, E)
    return out


def seidel_compose(coeffs, base, table, E=6):
    """Product of base[name]^coeff (negative powers through qh_invert)."""
    E = Fraction(E)
    total = sum(abs(int(c)) for c in coeffs.values())
    inner = E + (total + 1) * (table.max_shift() + 1)
    out = None
    for name in sorted(coeffs):
        k = int(coeffs[name])
        if k == 0:
            continue
        if name not in base:
            raise KeyError("no base element named %r" % name)
        part = qc_power(base[name], k, table, inner)
        out = part if out is None else quantum_product(out, part, table, inner)
    if out is None:
        return unit_class(table)
    return out.truncate(E)


# exact counterparts: classes are {key: K element}

def exact_product(x, y, table, C):
    out = {}
    for a, xa in x.items():
        for b, yb in y.items():
            for k, terms in table.entry(a, b).items():
                out[k] = out.get(k, C.zero()) + xa * yb * C.from_terms(terms)
    return {k: v for k, v in out.items() if v != 0}


def exact_invert(x, table, C):
    n = len(table.basis)
    cols = []
    for b in table.basis:
        prod = exact_product(x, {b: C.one()}, table, C)
        cols.append([prod.get(k, C.zero()) for k in table.basis])
    rows = [[cols[j][i] for j in range(n)] for i in range(n)]
    rhs = [C.one() if b == table.unit else C.zero() for b in table.basis]
    try:
        sol, = C.solve(rows, [rhs])
    except ValueError:
        raise ValueError("non-invertible quantum class") from None
    return {b: v for b, v in zip(table.basis, sol) if v != 0}


def exact_compose(coeffs, base, table, C):
    out = {table.unit: C.one()}
    for name in sorted(coeffs):
        k = int(coeffs[name])
        x = base[name] if k >= 0 else exact_invert(base[name], table, C)
        for _ in range(abs(k)):
            out = exact_product(out, x, table, C)
    return out


def exact_to_series(x, C, E, direction=HOM):
    """Expand an exact class on a common window of width E below its top."""
    comps = {k: C.to_series(v, E + 8, direction) for k, v in x.items()}
    return QuantumClass(comps, direction).truncate(E)


def render_exact(x, C, order=None):
    keys = order or sorted(x)
    parts = ["(%s) %s" % (C.render(x[k]), k) for k in keys if k in x]
    return " + ".join(parts) if parts else "0"


# --- named classes --------------------------------------------------------

def express_class(P, c, named):
    """Coordinates of CurveClass c in the named classes {name: CurveClass}."""
    names = sorted(named)
    n = P.n
    rows = [[named[nm].coeffs[i] for nm in names] + [c.coeffs[i]] for i in range(n)]
    R, piv = rref(rows, len(names) + 1)
    if len(names) in piv:
        raise ValueError("class %s is not a combination of %s" % (c.coeffs, names))
    if len(piv) < len(names):
        raise ValueError("named classes are not independent")
    return {names[p]: R[i][-1] for i, p in enumerate(piv) if R[i][-1] != 0}


def rename_series(qc, P, named):
    return qc.map_keys(lambda key: express_class(P, key, named))


def exact_seidel(e, C, named=None):
    """Closed form of a SeidelElement as an exact class (homological)."""
    P = e.polytope
    out = {}
    for term in e.terms:
        val = C.const(term.sign) * C.q * C.t(e.phi_max + term.offset)
        for w in term.factors:
            val = val / (1 - C.t(-w))
        keys = express_class(P, facet_class(P, term.facet), named) if named else {term.facet: 1}
        for k, a in keys.items():
            out[k] = out.get(k, C.zero()) + C.const(a) * val
    return {k: v for k, v in out.items() if v != 0}


def hirzebruch_named(P, k):
    """B and F on the F_{2k} polygon: A_2 = F, A_1 = B + kF."""
    A1, A2 = facet_class(P, 0), facet_class(P, 1)
    return {"F": A2, "B": A1 - A2 * k}


@dataclass
class HirzebruchRoute:
    k: int
    mu: Fraction
    table: GWTable
    C: Coefficients
    base_exact: dict
    base_series: dict
    loops: dict           # facet/axis name -> {base loop: coefficient}
    exact: dict
    series: dict


def axis_loops(k):
    """Axis loops of F_{2k} in terms of the three base loops (taken as data)."""
    e1 = {"L2e1": k, "L0e1": k - 1, "L0e2": 0}
    e2 = {"L2e1": 0, "L0e1": k, "L0e2": 1}

    def comb(a, b):
        return {n: a * e1[n] + b * e2[n] for n in e1}
    return {"e1": comb(1, 0), "e2": comb(0, 1), "v1": comb(1, 0), "v3": comb(-1, 0),
            "v2": comb(-k, -1), "v4": comb(-k, 1)}


def hirzebruch_route(k, mu, E=6):
    """Seidel elements of F_{2k} from those of F_0 and F_2 by composition."""
    k, mu = int(k), Fraction(mu)
    F0, F2 = hirzebruch_even(0, mu), hirzebruch_even(1, mu)
    inner = Fraction(E) + 4 * (mu + 2)
    elems = {"L0e1": (F0, 0, 0), "L0e2": (F0, 3, 0), "L2e1": (F2, 0, 1)}
    computed = {name: (seidel_element(P, m, inner, normalized=True), kk)
                for name, (P, m, kk) in elems.items()}
    exps = [mu, 1]
    for e, _ in computed.values():
        exps += [e.phi_max + t.offset for t in e.terms] + [w for t in e.terms for w in t.factors]
    C = Coefficients.for_exponents(exps)
    table = s2xs2_table(mu)
    base_exact, base_series = {}, {}
    for name, (e, kk) in computed.items():
        named = hirzebruch_named(e.polytope, kk)
        base_exact[name] = exact_seidel(e, C, named)
        base_series[name] = rename_series(e.series, e.polytope, named)
    loops = axis_loops(k)
    exact = {n: exact_compose(c, base_exact, table, C) for n, c in loops.items()}
    series = {n: seidel_compose(c, base_series, table, E) for n, c in loops.items()}
    return HirzebruchRoute(k, mu, table, C, base_exact, base_series, loops, exact, series)


# --- lifted generators ----------------------------------------------------

@dataclass
class LiftedGenerator:
    """Y_facet = sum_j coeffs[j] Z_j, cohomological coefficients."""
    facet: int
    coeffs: dict
    C: Coefficients

    def check_leading(self):
        for j, c in self.coeffs.items():
            if c == 0:
                continue
            order, lc = self.C.lowest(c)
            if j == self.facet:
                if order != 0 or lc != 1:
                    raise ValueError("Y_%d: coefficient of Z_%d does not start with 1"
                                     % (self.facet + 1, j + 1))
            elif order <= 0:
                raise ValueError("Y_%d: Z_%d appears at order %s" % (self.facet + 1, j + 1, order))
        if self.coeffs.get(self.facet, 0) == 0:
            raise ValueError("Y_%d has no Z_%d term" % (self.facet + 1, self.facet + 1))
        return True

    def render(self):
        parts = []
        for j in sorted(self.coeffs):
            c = self.coeffs[j]
            if c == 0:
                continue
            txt = self.C.render(c)
            parts.append("Z%d" % (j + 1) if txt == "1" else "(%s)*Z%d" % (txt, j + 1))
        return "Y%d = %s" % (self.facet + 1, " + ".join(parts) or "0")


def lift_Y(P, m, s=None, C=None):
    """Lift of the Seidel element of facet m: drop q t^{kappa_m}, A_j -> Z_j."""
    P = require_valid(P.oriented())
    m %= P.n
    if s is None:
        s = seidel_element(P, m, 0)
    if C is None:
        C = coefficients_for(P)
    coeffs = {}
    for term in s.terms:
        val = C.const(term.sign) * C.t(-term.offset)
        for w in term.factors:
            val = val * C.geometric(w)
        coeffs[term.facet] = coeffs.get(term.facet, C.zero()) + val
    lift = LiftedGenerator(m, {j: c for j, c in coeffs.items() if c != 0}, C)
    lift.check_leading()
    return lift


def trivial_lift(m, C):
    return LiftedGenerator(m, {m: C.one()}, C)


def coefficients_for(P, extra=()):
    vals = list(P.supports) + list(extra)
    return Coefficients.for_exponents(vals)


def hirzebruch4_lifts(P, C):
    """Lifts on F_4 assembled from the composed Seidel elements.

    Y1 = Z1 + (Z2+Z3+Z4) u, Y3 = (Z3 + (Z2+Z3+Z4) u)/(1-u)^2,
    Y2 = (Z2 - 4u Y3)/(1-u)^2, Y4 = (Z4 - 4u Y3)/(1-u)^2, u = t^{mu-1}.
    """
    if P.normals != ((1, 0), (-2, -1), (-1, 0), (-2, 1)):
        raise UncoveredPattern("composed lifts are only assembled for F_4")
    mu = P.support(3) + 2
    u = C.t(mu - 1)
    d = (1 - u) ** 2
    one = C.one()
    Y1 = {0: one, 1: u, 2: u, 3: u}
    Y3 = {1: u / d, 2: (1 + u) / d, 3: u / d}
    Y2 = {j: -4 * u * c / d for j, c in Y3.items()}
    Y2[1] = Y2[1] + 1 / d
    Y4 = {j: -4 * u * c / d for j, c in Y3.items()}
    Y4[3] = Y4[3] + 1 / d
    return [LiftedGenerator(i, y, C) for i, y in enumerate((Y1, Y2, Y3, Y4))]


def lift_image(P, lift, named):
    """Homology image sum_j coeff_j(t^-1) A_j in the named basis (no q t^kappa)."""
    out = {}
    for j, c in lift.coeffs.items():
        for nm, a in express_class(P, facet_class(P, j), named).items():
            out[nm] = out.get(nm, lift.C.zero()) + lift.C.const(a) * lift.C.invert_t(c)
    return {k: v for k, v in out.items() if v != 0}


def proportional(x, y, C):
    """Monomial factor f with x = f*y (None if not monomially proportional)."""
    if set(x) != set(y):
        return None
    ratio = None
    for k in x:
        r = x[k] / y[k]
        if ratio is None:
            ratio = r
        elif r != ratio:
            return None
    if ratio is None or not C.is_laurent(ratio) or len(ratio.numer.terms()) != 1:
        return None
    return ratio


# --- Batyrev data and presentations ---------------------------------------

@dataclass(frozen=True)
class BatyrevDatum:
    I: tuple
    J: tuple
    c: tuple
    beta: CurveClass
    chern: int
    area: Fraction


def _face_of(P, w):
    n = P.n
    if w == (0, 0):
        return (), ()
    for j in range(n):
        v = P.normal(j)
        cr = v[0] * w[1] - v[1] * w[0]
        if cr == 0 and dot(v, w) > 0:
            k = dot(v, w) // dot(v, v)
            return (j,), (k,)
    for j in range(n):
        a, b = P.normal(j), P.normal((j + 1) % n)
        det = a[0] * b[1] - a[1] * b[0]
        x = Fraction(w[0] * b[1] - w[1] * b[0], det)
        y = Fraction(a[0] * w[1] - a[1] * w[0], det)
        if x > 0 and y > 0:
            jj = (j + 1) % n
            return tuple(sorted((j, jj))), tuple(int(v) for v in ((x, y) if j < jj else (y, x)))
    raise ValueError("no cone contains %r" % (w,))


def batyrev_data(P, I):
    P = require_valid(P.oriented())
    I = tuple(sorted(int(i) % P.n for i in I))
    w = tuple(sum(P.normal(i)[a] for i in I) for a in range(2))
    J, c = _face_of(P, w)
    if set(I) & set(J):
        raise ValueError("%r is not primitive" % (I,))
    a = [0] * P.n
    for i in I:
        a[i] += 1
    for j, cj in zip(J, c):
        a[j] -= cj
    beta = CurveClass(tuple(a))
    chern = len(I) - sum(c)
    area = sum((P.support(i) for i in I), Fraction(0)) - sum(cj * P.support(j) for j, cj in zip(J, c))
    if chern != chern_number(beta) or area != symplectic_area(P, beta):
        raise AssertionError("Batyrev class bookkeeping mismatch")
    return BatyrevDatum(I, J, c, beta, chern, area)


@dataclass
class Relation:
    datum: BatyrevDatum
    poly: object

    def render(self, pres):
        return pres.render_poly(pres.cleared(self.poly))


@dataclass
class RingPresentation:
    P: object
    C: Coefficients
    R: object
    Z: tuple
    lifts: list
    linear: list
    relations: list = field(default_factory=list)

    def lift_poly(self, j):
        return sum((c * self.Z[i] for i, c in self.lifts[j].coeffs.items()), self.R.zero)

    def cleared(self, poly):
        """Multiply through by the distinct coefficient denominators.

        A true lcm would factor 1 - t^a against 1 - t^b over the s-lattice and
        print cyclotomic noise, so denominators are kept whole.
        """
        dens = []
        for _, c in poly.terms():
            d = c.denom
            if any(e.rem(d) == 0 for e in dens):
                continue
            dens = [e for e in dens if d.rem(e) != 0] + [d]
        if not dens:
            return poly
        out = poly
        for d in dens:
            out = out * self.C.K(d)
        _, lead = max(out.terms())
        if self.C.lowest(lead)[1] < 0:
            out = -out
        return out

    def render_poly(self, poly):
        parts = []
        for mono, c in sorted(poly.terms(), key=lambda kv: tuple(-e for e in kv[0])):
            z = "*".join(("Z%d" % (i + 1)) + ("^%d" % e if e > 1 else "")
                         for i, e in enumerate(mono) if e)
            txt = self.C.render(c)
            if not z:
                parts.append("(%s)" % txt)
            elif txt == "1":
                parts.append(z)
            else:
                parts.append("(%s)*%s" % (txt, z))
        return " + ".join(parts) + " = 0" if parts else "0 = 0"

    def generator_count(self):
        return len(self.relations) + len(self.linear)


def default_lifts(P, C):
    cs = chern_values(P)
    if min(cs) < 0:
        raise NotNEF("lifts of a non-NEF polygon must be supplied")
    if min(cs) > 0:
        return [trivial_lift(m, C) for m in range(P.n)]
    return [lift_Y(P, m, None, C) for m in range(P.n)]


def presentation(P, lifts=None, C=None):
    P = require_valid(P.oriented())
    if C is None:
        C = lifts[0].C if lifts else coefficients_for(P)
    if lifts is None:
        lifts = default_lifts(P, C)
    R, *Z = ring(",".join("Z%d" % (j + 1) for j in range(P.n)), C.domain)
    Z = tuple(Z)
    linear = [sum((P.normal(j)[i] * Z[j] for j in range(P.n)), R.zero) for i in range(2)]
    pres = RingPresentation(P, C, R, Z, lifts, linear)
    for I in primitive_collections(fan_of(P)):
        d = batyrev_data(P, I)
        lhs = R.one
        for i in d.I:
            lhs = lhs * pres.lift_poly(i)
        rhs = R.one
        for j, cj in zip(d.J, d.c):
            rhs = rhs * pres.lift_poly(j) ** cj
        rhs = rhs * (C.q ** d.chern * C.t(d.area))
        pres.relations.append(Relation(d, lhs - rhs))
    return pres


def eliminate_linear(pres, poly):
    """Use the two linear relations to remove Z_{n-1}, Z_n (0-based n-2, n-1)."""
    P = pres.P
    n = P.n
    a, b = P.normal(n - 2), P.normal(n - 1)
    det = a[0] * b[1] - a[1] * b[0]
    # sum_j v_j Z_j = 0 ->  a Z_{n-2} + b Z_{n-1} = -sum_{j<n-2} v_j Z_j
    rest = [-sum((P.normal(j)[i] * pres.Z[j] for j in range(n - 2)), pres.R.zero) for i in range(2)]
    # det = +-1 by smoothness, so dividing by det is multiplying by it
    za = (rest[0] * b[1] - rest[1] * b[0]) * det
    zb = (a[0] * rest[1] - a[1] * rest[0]) * det
    return poly.compose([(pres.Z[n - 2], za), (pres.Z[n - 1], zb)])


def same_relation(pres, f, g):
    """f and g agree up to a nonzero scalar after removing the linear relations."""
    f, g = eliminate_linear(pres, f), eliminate_linear(pres, g)
    if f == 0 or g == 0:
        return f == g
    mono, cf = max(f.terms())
    cg = dict(g.terms()).get(mono)
    if not cg:
        return False
    return f * cg == g * cf


class QuotientAlgebra:
    """Exact normal forms in Q[Z]/(Lin + SR_Y) for a surface with n >= 4.

    Variables Z_{n-1}, Z_n are eliminated linearly; the 2-dimensional
    quotient of degree-2 monomials by the relations leaves one monomial b,
    and the products Z_i b are solved from the degree-3 overlaps.  Every
    step is an ideal operation, so a zero normal form certifies membership.
    """

    def __init__(self, pres):
        if pres.P.n < 4:
            raise ValueError("normal forms need at least four facets")
        self.pres = pres
        C = pres.C
        self.C = C
        n = pres.P.n
        self.r = r = n - 2
        self.free = list(range(r))
        deg2 = [tuple(sorted(p)) for p in combinations_with_replacement(range(r), 2)]
        self.deg2 = deg2
        cols = deg2 + [(i,) for i in range(r)] + [()]
        index = {c: i for i, c in enumerate(cols)}
        rows = []
        for rel in pres.relations:
            f = eliminate_linear(pres, rel.poly)
            row = [C.zero()] * len(cols)
            for mono, c in f.terms():
                key = tuple(i for i, e in enumerate(mono) for _ in range(e))
                if len(key) > 2:
                    raise UncoveredPattern("relation of degree %d" % len(key))
                row[index[key]] += c
            rows.append(row)
        M = C.matrix(rows)
        R, pivots = M.rref()
        R = R.to_list()
        free2 = [c for c in range(len(deg2)) if c not in pivots]
        if len(free2) != 1 or any(p >= len(deg2) for p in pivots):
            raise ValueError("relations do not cut degree 2 down to one class")
        self.b = deg2[free2[0]]
        # basis: 1, Z_1 .. Z_r, b
        self.dim = r + 2
        self.nf2 = {}
        for i, p in enumerate(pivots):
            vec = [C.zero()] * self.dim
            row = R[i]
            for c in range(len(cols)):
                if c == p or row[c] == 0:
                    continue
                key = cols[c]
                vec[self._slot(key)] -= row[c]
            self.nf2[deg2[p]] = vec
        bvec = [C.zero()] * self.dim
        bvec[-1] = C.one()
        self.nf2[self.b] = bvec
        self._solve_top()
        self.mats = [self._matrix(i) for i in range(r)]
        for i in range(r):
            for j in range(i + 1, r):
                if self.mats[i] * self.mats[j] != self.mats[j] * self.mats[i]:
                    raise ValueError("inconsistent multiplication table")
        self._cache = {}

    def _slot(self, key):
        if key == ():
            return 0
        if len(key) == 1:
            return 1 + key[0]
        if key == self.b:
            return self.dim - 1
        raise KeyError(key)

    def _times_known(self, i, vec):
        """Z_i * vec with the b-coefficient left symbolic: (known, coeff of X_i)."""
        C = self.C
        out = [C.zero()] * self.dim
        if vec[0] != 0:
            out[1 + i] += vec[0]
        for d in range(self.r):
            c = vec[1 + d]
            if c != 0:
                nf = self.nf2[tuple(sorted((i, d)))]
                out = [a + c * x for a, x in zip(out, nf)]
        return out, vec[-1]

    def _solve_top(self):
        C = self.C
        r = self.r
        A, B = [], []
        for mono in combinations_with_replacement(range(r), 3):
            splits = []
            for x in sorted(set(mono)):
                rest = list(mono)
                rest.remove(x)
                known, g = self._times_known(x, self.nf2[tuple(sorted(rest))])
                splits.append((x, known, g))
            x0, k0, g0 = splits[0]
            for x1, k1, g1 in splits[1:]:
                row = [C.zero()] * r
                row[x0] += g0
                row[x1] -= g1
                if all(v == 0 for v in row):
                    if any(a != b for a, b in zip(k0, k1)):
                        raise ValueError("inconsistent degree-3 overlap")
                    continue
                A.append(row)
                B.append([b - a for a, b in zip(k0, k1)])
        M = C.matrix([a + b for a, b in zip(A, B)])
        R, piv = M.rref()
        R = R.to_list()
        if list(piv[:r]) != list(range(r)) or any(p >= r for p in piv):
            raise ValueError("could not determine the top products")
        self.top = [R[i][r:] for i in range(r)]

    def _matrix(self, i):
        C = self.C
        cols = []
        e0 = [C.zero()] * self.dim
        e0[1 + i] = C.one()
        cols.append(e0)
        for d in range(self.r):
            cols.append(self.nf2[tuple(sorted((i, d)))])
        cols.append(self.top[i])
        rows = [[cols[c][k] for c in range(self.dim)] for k in range(self.dim)]
        return C.matrix(rows)

    def _vec(self, mono):
        if mono in self._cache:
            return self._cache[mono]
        if not any(mono):
            v = [self.C.zero()] * self.dim
            v[0] = self.C.one()
        else:
            i = next(k for k, e in enumerate(mono) if e)
            prev = list(mono)
            prev[i] -= 1
            pv = self._vec(tuple(prev))
            col = self.C.matrix([[x] for x in pv])
            v = [row[0] for row in (self.mats[i] * col).to_list()]
        self._cache[mono] = v
        return v

    def normal_form(self, poly):
        f = eliminate_linear(self.pres, poly)
        out = [self.C.zero()] * self.dim
        for mono, c in f.terms():
            v = self._vec(tuple(mono[:self.r]))
            out = [a + c * x for a, x in zip(out, v)]
        return out

    def is_zero(self, poly):
        return all(x == 0 for x in self.normal_form(poly))


# --- potentials -----------------------------------------------------------

def _zero_runs(P):
    cs = chern_values(P)
    n = P.n
    if min(cs) < 0:
        raise NotNEF("superpotential formula needs a NEF polygon")
    if all(c == 0 for c in cs):
        raise UncoveredPattern("every facet has zero chern number")
    start = next(i for i in range(n) if cs[i] != 0)
    runs, cur = [], []
    for s in range(1, n + 1):
        i = (start + s) % n
        if cs[i] == 0:
            cur.append(i)
        elif cur:
            runs.append(cur)
            cur = []
    return runs


def superpotential(P, C=None):
    """Fano sum plus the corrections attached to runs of zero-chern facets."""
    P = require_valid(P.oriented())
    C = C or coefficients_for(P)
    n = P.n
    v, kap = P.normal, P.support
    W = Laurent(C)
    for j in range(n):
        W = W + Laurent.monomial(C, v(j), C.t(kap(j)))
    for run in _zero_runs(P):
        if len(run) == 1:
            k = run[0]
            W = W + Laurent.monomial(C, v(k), C.t(kap((k + 1) % n) + kap((k - 1) % n) - kap(k)))
        elif len(run) == 2:
            k1, k = run             # k1 = k - 1
            km2, kp1 = (k - 2) % n, (k + 1) % n
            for vec, ex in ((v(k), kap(kp1) + kap(k1) - kap(k)),
                            (v(k1), kap(k) + kap(km2) - kap(k1)),
                            (v(k), kap(kp1) + kap(km2) - kap(k1)),
                            (v(k1), kap(kp1) + kap(km2) - kap(k))):
                W = W + Laurent.monomial(C, vec, C.t(ex))
        else:
            raise UncoveredPattern("run of %d adjacent zero-chern facets" % len(run))
    return W


def psi_images(P, lifts, C):
    """Psi(Z_j) from Psi(Y_m) = q z^{v_m} t^{kappa_m} (lifts are linear in Z)."""
    n = P.n
    rows = [[lifts[m].coeffs.get(j, C.zero()) for j in range(n)] for m in range(n)]
    targets = [Laurent.monomial(C, P.normal(m), C.q * C.t(P.support(m))) for m in range(n)]
    # Y = rows . Z  ->  Z = rows^{-1} . Y
    inv_cols = C.solve(rows, [[C.one() if i == m else C.zero() for i in range(n)] for m in range(n)])
    # inv_cols[m] is column m of rows^{-1}
    out = []
    for j in range(n):
        acc = Laurent(C)
        for m in range(n):
            c = inv_cols[m][j]
            if c != 0:
                acc = acc + targets[m].scale(c)
        out.append(acc)
    return out


def linear_images(P, psi):
    """Psi of the additive relations x = e_1, e_2."""
    C = psi[0].C
    outs = []
    for i in range(2):
        acc = Laurent(C)
        for j in range(P.n):
            a = P.normal(j)[i]
            if a:
                acc = acc + psi[j].scale(C.const(a))
        outs.append(acc)
    return outs


def potential_from_lifts(P, lifts, C=None):
    """Integrate the additive-relation images into a potential W."""
    P = require_valid(P.oriented())
    C = C or lifts[0].C
    psi = psi_images(P, lifts, C)
    derivs = linear_images(P, psi)
    inv_q = 1 / C.q
    W = {}
    for i, d in enumerate(derivs):
        for w, c in d.terms.items():
            c = c * inv_q
            if w[i] == 0:
                raise IntegrationError("z%d-derivative image has a term with zero z%d-exponent at %r"
                                       % (i + 1, i + 1, w))
            val = c / w[i]
            if w in W and W[w] != val:
                raise IntegrationError("derivatives disagree on the coefficient of z^%r" % (w,))
            W[w] = val
    for w in W:
        for i, d in enumerate(derivs):
            if w[i] != 0 and w not in d.terms:
                raise IntegrationError("coefficient of z^%r missing from derivative %d" % (w, i + 1))
    return Laurent(C, W)


def jacobian_ideal(W):
    """The two generators q z_i dW/dz_i."""
    C = W.C
    return [Laurent(C, {w: C.q * C.const(w[i]) * c for w, c in W.terms.items()}) for i in range(2)]


def psi_substitute(pres, poly, psi):
    C = pres.C
    out = Laurent(C)
    for mono, c in poly.terms():
        term = Laurent(C, {(0, 0): c})
        for j, e in enumerate(mono):
            if e:
                term = term * psi[j] ** e
        out = out + term
    return out


def psi_kernel_check(pres, poly, psi=None):
    if psi is None:
        psi = psi_images(pres.P, pres.lifts, pres.C)
    return psi_substitute(pres, poly, psi).is_zero()
