"""Seidel elements of the circle actions that fix a facet.

Notation inside this module follows the local picture around the acting
facet m: position offset 0 is m itself, +1 the next facet in clockwise
order, -1 the previous one.  A case is "mirrored" when the pattern only
matches after reversing the direction, and every formula below takes the
direction as a parameter instead of physically reflecting the polytope.
"""

from dataclasses import dataclass
from fractions import Fraction

from .divisor_geometry import (CurveClass, facet_class, self_intersection_d,
                               symplectic_area, is_nef)
from .errors import NotNEF, UncoveredPattern
from .lattice_core import normalize_supports, require_valid
from .novikov import HOM, NovikovSeries, QuantumClass, geom_expand, fmt_rational

TABLE_CODES = ("1", "2a", "2b", "3a", "3b", "3c")
EXTENDED_CODES = ("2c", "2d", "3d", "3e")

# (zero run before m, zero run after m) -> code
_ACTING_ZERO = {(0, 0): "2a", (0, 1): "2b", (0, 2): "2c", (1, 1): "2d"}
_ACTING_NONZERO = {(0, 0): "1", (0, 1): "3a", (0, 2): "3b", (1, 1): "3c",
                   (0, 3): "3d", (1, 2): "3e"}


@dataclass(frozen=True)
class SeidelCase:
    code: str
    mirrored: bool = False

    def __str__(self):
        return self.code + ("-mirror" if self.mirrored else "")


@dataclass(frozen=True)
class ClosedTerm:
    """sign * A_facet (x) q t^{phi_max + offset} * prod 1/(1 - t^{-w})."""
    sign: int
    facet: int
    offset: Fraction
    factors: tuple


@dataclass
class SeidelElement:
    facet: int
    case: SeidelCase
    phi_max: Fraction
    terms: list
    series: QuantumClass
    polytope: object
    cutoff: Fraction

    def closed_form(self, name=None):
        return render_closed_form(self, name)

    def collapsed(self):
        """Series as a vector in Z^n (the facet-class coordinates merged)."""
        return collapse(self.series)


def chern_values(P):
    return [2 - self_intersection_d(P, i) for i in range(P.n)]


def _run(cherns, m, step):
    n = len(cherns)
    k = 0
    while k < n and cherns[(m + step * (k + 1)) % n] == 0:
        k += 1
    return k


def dispatch_case(P, m):
    P = require_valid(P.oriented())
    if not is_nef(P):
        raise NotNEF("polytope has a facet with negative chern number")
    n = P.n
    if n < 3:
        raise UncoveredPattern("need at least 3 facets")
    c = chern_values(P)
    m %= n
    before, after = _run(c, m, -1), _run(c, m, +1)
    zero = c[m] == 0
    table = _ACTING_ZERO if zero else _ACTING_NONZERO
    if before + after + 1 >= n:
        raise UncoveredPattern("zero-chern run wraps around the polygon")
    if (before, after) in table:
        code, mirrored = table[(before, after)], False
    elif (after, before) in table:
        code, mirrored = table[(after, before)], True
    else:
        raise UncoveredPattern(
            "facet %d: %d zero-chern facets before and %d after (acting facet chern %d)"
            % (m + 1, before, after, c[m]))
    return SeidelCase(code, mirrored)


def _local(P, m, mirrored):
    """Functions giving facet index, class and area at a signed offset."""
    n = P.n
    step = -1 if mirrored else 1

    def idx(o):
        return (m + step * o) % n

    def area(o):
        return symplectic_area(P, facet_class(P, idx(o)))
    return idx, area


def closed_terms(P, m, case):
    idx, w = _local(P, m, case.mirrored)
    T = ClosedTerm
    F = Fraction
    wn, w1, w2, w3, wp = w(0), w(1), w(2), w(3), w(-1)
    n_, one, two, three, prev = idx(0), idx(1), idx(2), idx(3), idx(-1)
    code = case.code
    z = F(0)
    if code == "1":
        return [T(1, n_, z, ())]
    if code == "2a":
        return [T(1, n_, z, (wn,))]
    if code == "2b":
        s = wn + w1
        return [T(1, n_, z, (wn, s)), T(-1, one, -w1, (w1, s))]
    if code == "3a":
        return [T(1, n_, z, ()), T(-1, one, -w1, (w1,))]
    if code == "3b":
        s = w1 + w2
        return [T(1, n_, z, ()), T(-1, one, -w1, (w1,)),
                T(-1, one, -s, (w1, s)), T(1, two, -w1 - 2 * w2, (w2, s))]
    if code == "3c":
        return [T(1, n_, z, ()), T(-1, prev, -wp, (wp,)), T(-1, one, -w1, (w1,))]
    if code == "2c":
        W = wn + w1 + w2
        return [T(1, n_, z, (wn, wn + w1, W)), T(-1, one, -w1, (w1, wn + w1, W)),
                T(-1, one, -w1 - w2, (w1, w1 + w2, W)),
                T(1, two, -w1 - 2 * w2, (w2, w1 + w2, W))]
    if code == "2d":
        V = wn + wp + w1
        return [T(1, n_, z, (wn, wn + wp, V)), T(-1, prev, -wp, (wp, wn + wp, V)),
                T(1, n_, z, (wn, wn + w1, V)), T(-1, one, -w1, (w1, wn + w1, V)),
                T(-1, n_, z, (wn, V))]
    if code == "3d":
        s12, s123, s23 = w1 + w2, w1 + w2 + w3, w2 + w3
        return [T(1, n_, z, ()), T(-1, one, -w1, (w1,)),
                T(-1, one, -s12, (w1, s12)), T(1, two, -w1 - 2 * w2, (w2, s12)),
                T(-1, one, -s123, (w1, s123, s12)),
                T(1, two, -w1 - 2 * w2 - w3, (w2, s123, s12)),
                T(1, two, -w1 - 2 * w2 - 2 * w3, (w2, s23, s123)),
                T(-1, three, -w1 - 2 * w2 - 3 * w3, (w3, s23, s123))]
    if code == "3e":
        s12 = w1 + w2
        return [T(1, n_, z, ()), T(-1, prev, -wp, (wp,)), T(-1, one, -w1, (w1,)),
                T(-1, one, -s12, (w1, s12)), T(1, two, -w1 - 2 * w2, (w2, s12))]
    raise UncoveredPattern("no closed form for case %s" % code)


def phi_max(P, m, normalized=False):
    Q = normalize_supports(P) if normalized else P
    return Q.support(m)


def expand_terms(P, terms, phi, E):
    """Expand closed-form terms into a class-keyed QuantumClass, window E."""
    E = Fraction(E)
    comps = {}
    for term in terms:
        ser = NovikovSeries.monomial(term.sign, 1, phi + term.offset)
        depth = E + term.offset  # room left below the top exponent
        if depth < 0:
            continue
        for w in term.factors:
            if w <= 0:
                raise ValueError("geometric factor with nonpositive weight %s" % w)
            ser = ser * geom_expand(w, depth)
        ser = ser.with_bound(phi - E)
        key = facet_class(P, term.facet)
        comps[key] = comps[key] + ser if key in comps else ser
    full = {k: v.with_bound(phi - E) for k, v in comps.items()}
    return QuantumClass(full, HOM)


def seidel_element(P, m, E=6, normalized=False):
    P = require_valid(P.oriented())
    m %= P.n
    case = dispatch_case(P, m)
    terms = closed_terms(P, m, case)
    phi = phi_max(P, m, normalized)
    series = expand_terms(P, terms, phi, E)
    return SeidelElement(m, case, phi, terms, series, P, Fraction(E))


def expand_closed_form(e, E):
    return expand_terms(e.polytope, e.terms, e.phi_max, E)


def contributions(P, m, E):
    """Pairs (B, (sign, facet)) from the contribution table, area(B) <= E."""
    P = require_valid(P.oriented())
    m %= P.n
    case = dispatch_case(P, m)
    if case.code not in TABLE_CODES:
        raise UncoveredPattern("case %s has no contribution table" % case.code)
    idx, w = _local(P, m, case.mirrored)
    E = Fraction(E)
    cls = lambda o: facet_class(P, idx(o))
    zero = CurveClass.zero(P.n)
    out = []

    def multiples(area):
        k = 0
        while k * area <= E:
            yield k
            k += 1
    code = case.code
    if code == "1":
        return [(zero, (1, idx(0)))]
    if code == "2a":
        return [(k * cls(0), (1, idx(0))) for k in multiples(w(0))]
    if code == "2b":
        for k in multiples(w(0)):
            for l in multiples(w(1)):
                if k * w(0) + l * w(1) <= E:
                    a = (1, idx(0)) if k >= l else (-1, idx(1))
                    out.append((k * cls(0) + l * cls(1), a))
        return out
    out.append((zero, (1, idx(0))))
    if code in ("3a", "3b"):
        for k in multiples(w(1)):
            if k >= 1:
                out.append((k * cls(1), (-1, idx(1))))
    if code == "3b":
        for k in multiples(w(1)):
            for l in multiples(w(2)):
                if k >= 1 and l >= 1 and k * w(1) + l * w(2) <= E:
                    a = (-1, idx(1)) if k >= l else (1, idx(2))
                    out.append((k * cls(1) + l * cls(2), a))
    if code == "3c":
        for k in multiples(w(-1)):
            if k >= 1:
                out.append((k * cls(-1), (-1, idx(-1))))
        for l in multiples(w(1)):
            if l >= 1:
                out.append((l * cls(1), (-1, idx(1))))
    return out


def contribution_sum(P, m, E, normalized=False):
    P = require_valid(P.oriented())
    m %= P.n
    phi = phi_max(P, m, normalized)
    comps = {}
    for B, (sign, facet) in contributions(P, m, E):
        ser = NovikovSeries.monomial(sign, 1, phi - symplectic_area(P, B))
        key = facet_class(P, facet)
        comps[key] = comps[key] + ser if key in comps else ser
    return QuantumClass({k: v.with_bound(phi - Fraction(E)) for k, v in comps.items()}, HOM)


def collapse(qc):
    """Merge class-keyed components into coordinates e_1..e_n of Z^n."""
    def fn(key):
        return {i: a for i, a in enumerate(key.coeffs) if a}
    return qc.map_keys(fn)


def facet_name(P, names=None):
    """Naming function CurveClass -> text, using facet labels when possible."""
    table = {}
    for i in range(P.n):
        c = facet_class(P, i)
        label = names.get(i) if names else None
        table.setdefault(c, label or "A%d" % (i + 1))
    return lambda c: table.get(c, str(c.coeffs))


def render_closed_form(e, names=None):
    P = e.polytope
    parts = []
    for term in e.terms:
        label = (names or {}).get(term.facet) or "A%d" % (term.facet + 1)
        body = "%s (x) q t^{%s}" % (label, fmt_rational(e.phi_max + term.offset))
        for w in term.factors:
            body += " / (1 - t^{-%s})" % fmt_rational(w)
        sign = "+" if term.sign > 0 else "-"
        parts.append("%s %s" % (sign, body))
    return " + ".join(parts)
