"""Exact Novikov coefficients as rational functions of q and t.

Real exponents are restricted to a lattice (1/L)Z, so t = s^L turns every
coefficient into an honest rational function of (q, s).  That is enough for
all identities checked here: they live at fixed rational parameters.
"""

from fractions import Fraction
from functools import reduce
from math import lcm

from sympy import QQ
from sympy.polys.fields import field
from sympy.polys.matrices import DomainMatrix

from .novikov import COH, HOM, NovikovSeries, fmt_rational, invert_unit, render_terms


def common_denominator(values):
    return reduce(lcm, (Fraction(v).denominator for v in values), 1)


class Coefficients:
    """The field Q(q, s) together with the exponent scale L (t = s^L)."""

    def __init__(self, L=1):
        self.L = int(L)
        self.K, self.q, self.s = field("q,s", QQ)
        self.domain = self.K.to_domain()

    @classmethod
    def for_exponents(cls, values, extra=1):
        return cls(lcm(common_denominator(values), int(extra)))

    def one(self):
        return self.K.one

    def zero(self):
        return self.K.zero

    def const(self, c):
        c = Fraction(c)
        return self.K(QQ(c.numerator, c.denominator))

    def t(self, a):
        k = Fraction(a) * self.L
        if k.denominator != 1:
            raise ValueError("exponent %s not in (1/%d)Z" % (fmt_rational(a), self.L))
        return self.s ** int(k)

    def monomial(self, c=1, qd=0, te=0):
        return self.const(c) * self.q ** int(qd) * self.t(te)

    def geometric(self, w):
        """1 / (1 - t^w)."""
        return 1 / (1 - self.t(w))

    def invert_t(self, x):
        """Apply t -> t^{-1}, q -> q^{-1} (the homology/cohomology dictionary)."""
        return self._flip(x.numer) / self._flip(x.denom)

    def _flip(self, p):
        out = self.K.zero
        for (a, b), c in p.terms():
            out += self.K(c) * self.q ** (-a) * self.s ** (-b)
        return out

    def is_laurent(self, x):
        return len(x.denom.terms()) == 1

    def lowest(self, x):
        """(t-order, coefficient) of the lowest s-power (q ignored, assumes q-free)."""
        def low(p):
            (a, b), c = min(p.terms(), key=lambda kv: kv[0][1])
            return b, c
        bn, cn = low(x.numer)
        bd, cd = low(x.denom)
        return Fraction(bn - bd, self.L), Fraction(int((cn / cd).numerator), int((cn / cd).denominator))

    def laurent_terms(self, x):
        """{(q, t): c} for a coefficient whose denominator is a monomial."""
        if x == 0:
            return {}
        if not self.is_laurent(x):
            raise ValueError("coefficient is not a Laurent polynomial")
        ((a0, b0), c0), = x.denom.terms()
        out = {}
        for (a, b), c in x.numer.terms():
            v = c / c0
            out[(a - a0, Fraction(b - b0, self.L))] = Fraction(int(v.numerator), int(v.denominator))
        return out

    def from_terms(self, terms):
        out = self.K.zero
        for (qd, te), c in terms.items():
            out += self.monomial(c, qd, te)
        return out

    def from_series(self, x):
        """Exact value of a finite NovikovSeries (its truncation is ignored)."""
        return self.from_terms(x.terms)

    def to_series(self, x, E, direction=HOM):
        """Expand a coefficient as a series exact on a window of width E."""
        if x == 0:
            return NovikovSeries.zero(direction)
        num = NovikovSeries(self._poly_terms(x.numer), None, direction)
        den = NovikovSeries(self._poly_terms(x.denom), None, direction)
        if len(den.terms) == 1:
            ((qd, te), c), = den.terms.items()
            return num.shift(-qd, -te).scale(1 / c)
        inv = invert_unit(den, Fraction(E) + _spread(num))
        out = num * inv
        return out.truncate(E)

    def _poly_terms(self, p):
        return {(a, Fraction(b, self.L)): Fraction(int(c.numerator), int(c.denominator))
                for (a, b), c in p.terms()}

    def render(self, x):
        if x == 0:
            return "0"
        if self.is_laurent(x):
            return render_terms(_sorted_coh(self.laurent_terms(x)))
        n, d = x.numer, x.denom
        # show denominators as 1 - ..., not -1 + ...
        (_, lead), = _sorted_coh(self._poly_terms(d))[:1]
        if lead < 0:
            n, d = -n, -d
        num = render_terms(_sorted_coh(self._poly_terms(n)))
        den = render_terms(_sorted_coh(self._poly_terms(d)))
        return "(%s)/(%s)" % (num, den)

    def matrix(self, rows):
        n = len(rows)
        m = len(rows[0]) if rows else 0
        return DomainMatrix([[self.domain.convert(v) for v in r] for r in rows], (n, m), self.domain)

    def solve(self, rows, rhs_cols):
        """Solve A X = R over the field; rhs_cols is a list of right-hand columns."""
        A = self.matrix(rows)
        B = self.matrix([[col[i] for col in rhs_cols] for i in range(len(rows))])
        try:
            inv = A.inv()
        except Exception as exc:
            raise ValueError("singular system over Q(q,t)") from exc
        X = (inv * B).to_list()
        return [[X[i][j] for i in range(len(X))] for j in range(len(rhs_cols))]


def _spread(x):
    if not x.terms:
        return Fraction(0)
    ts = [te for (_, te) in x.terms]
    return max(ts) - min(ts)


def _sorted_coh(terms):
    # increasing t-exponent, then q-degree
    return sorted(terms.items(), key=lambda kv: (kv[0][1], kv[0][0]))


class Laurent:
    """Laurent polynomial in z_1, z_2 with exact coefficients."""

    def __init__(self, C, terms=None):
        self.C = C
        self.terms = {}
        for w, c in (terms or {}).items():
            if c != 0:
                w = tuple(int(a) for a in w)
                self.terms[w] = self.terms.get(w, C.zero()) + c
        self.terms = {w: c for w, c in self.terms.items() if c != 0}

    @classmethod
    def monomial(cls, C, w, c):
        return cls(C, {tuple(w): c})

    def __add__(self, other):
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, self.C.zero()) + c
        return Laurent(self.C, out)

    def __neg__(self):
        return Laurent(self.C, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return Laurent(self.C, {w: c * v for w, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Laurent):
            return self.scale(other)
        out = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = tuple(a + b for a, b in zip(w1, w2))
                out[w] = out.get(w, self.C.zero()) + c1 * c2
        return Laurent(self.C, out)

    def __pow__(self, k):
        out = Laurent(self.C, {(0, 0): self.C.one()})
        for _ in range(k):
            out = out * self
        return out

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        return isinstance(other, Laurent) and (self - other).is_zero()

    def term_count(self):
        """Number of (z-monomial, t-monomial) pairs, when coefficients are Laurent."""
        return sum(len(self.C.laurent_terms(c)) if self.C.is_laurent(c) else 1
                   for c in self.terms.values())

    def expanded(self):
        """List of (z-exponent, (q, t), coefficient), sorted."""
        out = []
        for w in sorted(self.terms):
            for k, c in _sorted_coh(self.C.laurent_terms(self.terms[w])):
                out.append((w, k, c))
        return out

    def render(self):
        if not self.terms:
            return "0"
        parts = []
        for w in sorted(self.terms):
            z = "*".join(_zpow(i + 1, a) for i, a in enumerate(w) if a)
            coeff = self.C.render(self.terms[w])
            if not z:
                parts.append("(%s)" % coeff)
            elif coeff == "1":
                parts.append(z)
            else:
                parts.append("(%s)*%s" % (coeff, z))
        return " + ".join(parts)

    def __repr__(self):
        return "Laurent(%s)" % self.render()


def _zpow(i, a):
    return "z%d" % i if a == 1 else "z%d^{%d}" % (i, a)


__all__ = ["Coefficients", "Laurent", "common_denominator", "COH", "HOM"]
