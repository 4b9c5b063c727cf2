"""Truncated Novikov series in q (integer) and t (rational exponents).

A homological series keeps exponents bounded above and is known exactly
for every t-exponent >= `bound`; a cohomological one is the mirror image
(exact for exponents <= bound).  `bound=None` means the series is exact
and finite.  Terms outside the exact region are never stored.
"""

from fractions import Fraction

from .errors import PrecisionError

HOM = "homological"
COH = "cohomological"


def _sign(direction):
    if direction == HOM:
        return 1
    if direction == COH:
        return -1
    raise ValueError("unknown direction %r" % (direction,))


def fmt_rational(x):
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return "%d/%d" % (x.numerator, x.denominator)


class NovikovSeries:
    __slots__ = ("terms", "bound", "direction")

    def __init__(self, terms=None, bound=None, direction=HOM):
        s = _sign(direction)
        self.direction = direction
        self.bound = None if bound is None else Fraction(bound)
        clean = {}
        for (qd, te), c in (terms or {}).items():
            c = Fraction(c)
            te = Fraction(te)
            if c == 0:
                continue
            if self.bound is not None and s * te < s * self.bound:
                continue
            clean[(int(qd), te)] = clean.get((int(qd), te), 0) + c
        self.terms = {k: c for k, c in clean.items() if c != 0}

    # construction helpers
    @classmethod
    def monomial(cls, coeff=1, q=0, t=0, direction=HOM):
        return cls({(q, Fraction(t)): coeff}, None, direction)

    @classmethod
    def one(cls, direction=HOM):
        return cls.monomial(1, 0, 0, direction)

    @classmethod
    def zero(cls, direction=HOM, bound=None):
        return cls({}, bound, direction)

    def _s(self):
        return _sign(self.direction)

    def is_exact(self):
        return self.bound is None

    def is_zero(self):
        return not self.terms

    def leading_exponent(self):
        """Largest (homological) or smallest (cohomological) t-exponent."""
        if not self.terms:
            return None
        s = self._s()
        return s * max(s * te for (_, te) in self.terms)

    def _sup(self):
        # best known estimate of the extreme exponent, for window bookkeeping
        lead = self.leading_exponent()
        return self.bound if lead is None else lead

    def leading_terms(self):
        lead = self.leading_exponent()
        return {k: c for k, c in self.terms.items() if k[1] == lead}

    @property
    def cutoff(self):
        """Width of the guaranteed window below the leading term."""
        if self.bound is None:
            return None
        lead = self.leading_exponent()
        if lead is None:
            return Fraction(0)
        return self._s() * (lead - self.bound)

    def _check(self, other):
        if not isinstance(other, NovikovSeries):
            raise TypeError("expected NovikovSeries")
        if other.direction != self.direction:
            raise ValueError("cannot combine homological and cohomological series")

    def _tighter(self, a, b):
        # the less permissive of two bounds
        if a is None:
            return b
        if b is None:
            return a
        s = self._s()
        return a if s * a > s * b else b

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = NovikovSeries.monomial(other, direction=self.direction)
        self._check(other)
        terms = dict(self.terms)
        for k, c in other.terms.items():
            terms[k] = terms.get(k, 0) + c
        return NovikovSeries(terms, self._tighter(self.bound, other.bound), self.direction)

    __radd__ = __add__

    def __neg__(self):
        return NovikovSeries({k: -c for k, c in self.terms.items()}, self.bound, self.direction)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = NovikovSeries.monomial(other, direction=self.direction)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        c = Fraction(c)
        if c == 0:
            return NovikovSeries.zero(self.direction, self.bound)
        return NovikovSeries({k: c * v for k, v in self.terms.items()}, self.bound, self.direction)

    def shift(self, q=0, t=0):
        """Multiply by q^q t^t."""
        t = Fraction(t)
        b = None if self.bound is None else self.bound + t
        return NovikovSeries({(qd + q, te + t): c for (qd, te), c in self.terms.items()},
                             b, self.direction)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        self._check(other)
        s = self._s()
        bounds = []
        if self.bound is not None:
            sup = other._sup()
            if sup is not None:
                bounds.append(self.bound + sup)
        if other.bound is not None:
            sup = self._sup()
            if sup is not None:
                bounds.append(other.bound + sup)
        bound = None
        for b in bounds:
            bound = self._tighter(bound, b)
        terms = {}
        for (q1, t1), c1 in self.terms.items():
            for (q2, t2), c2 in other.terms.items():
                te = t1 + t2
                if bound is not None and s * te < s * bound:
                    continue
                k = (q1 + q2, te)
                terms[k] = terms.get(k, 0) + c1 * c2
        return NovikovSeries(terms, bound, self.direction)

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0:
            raise ValueError("use invert_unit for negative powers")
        out = NovikovSeries.one(self.direction)
        for _ in range(k):
            out = out * self
        return out

    def truncate(self, E):
        """Keep the window of width E below the leading exponent."""
        lead = self.leading_exponent()
        if lead is None:
            return self
        b = lead - self._s() * Fraction(E)
        return NovikovSeries(self.terms, self._tighter(self.bound, b), self.direction)

    def with_bound(self, b):
        return NovikovSeries(self.terms, self._tighter(self.bound, b), self.direction)

    def coefficient(self, q, t):
        return self.terms.get((q, Fraction(t)), Fraction(0))

    def q_degrees(self):
        return sorted({qd for qd, _ in self.terms})

    def __eq__(self, other):
        if not isinstance(other, NovikovSeries):
            return NotImplemented
        return (self.direction == other.direction and self.terms == other.terms
                and self.bound == other.bound)

    def __hash__(self):
        return hash((self.direction, frozenset(self.terms.items()), self.bound))

    def render(self):
        return render_series(self)

    def __repr__(self):
        extra = "" if self.bound is None else " [exact for t-exponents %s %s]" % (
            ">=" if self.direction == HOM else "<=", fmt_rational(self.bound))
        return "NovikovSeries(%s)%s" % (self.render(), extra)


def _monomial_text(qd, te):
    parts = []
    if qd == 1:
        parts.append("q")
    elif qd > 1:
        parts.append("q^%d" % qd)
    elif qd < 0:
        parts.append("q^{%d}" % qd)
    if te == 1:
        parts.append("t")
    elif te != 0:
        parts.append("t^{%s}" % fmt_rational(te))
    return "*".join(parts)


def render_terms(items):
    """items: iterable of ((q, t), coeff), already ordered."""
    out = []
    for (qd, te), c in items:
        mono = _monomial_text(qd, te)
        mag = abs(c)
        if mono and mag == 1:
            body = mono
        elif mono:
            body = "%s*%s" % (fmt_rational(mag), mono)
        else:
            body = fmt_rational(mag)
        if not out:
            out.append(("-" if c < 0 else "") + body)
        else:
            out.append((" - " if c < 0 else " + ") + body)
    return "".join(out) if out else "0"


def sorted_terms(terms):
    # decreasing t-exponent, then increasing q-degree
    return sorted(terms.items(), key=lambda kv: (-kv[0][1], kv[0][0]))


def render_series(x):
    return render_terms(sorted_terms(x.terms))


def geom_expand(a, E, direction=HOM):
    """sum_{0 <= k <= E/a} t^{-ka} (homological) or t^{+ka} (cohomological)."""
    a = Fraction(a)
    E = Fraction(E)
    if a <= 0:
        raise ValueError("geometric factor needs a positive exponent, got %s" % a)
    s = _sign(direction)
    kmax = int(E // a)
    terms = {(0, -s * k * a): 1 for k in range(kmax + 1)}
    return NovikovSeries(terms, -s * E, direction)


def invert_unit(x, E):
    """Inverse of a series whose leading term is a single monomial."""
    lead = x.leading_terms()
    if len(lead) != 1:
        raise ValueError("series has no invertible leading term")
    ((qd, te), c), = lead.items()
    E = Fraction(E)
    if x.cutoff is not None:
        E = min(E, x.cutoff)
    s = x._s()
    # x = c q^qd t^te (1 + r),  r has exponents strictly on the small side
    norm = x.shift(-qd, -te).scale(1 / c)
    r = norm - NovikovSeries.one(x.direction)
    r = NovikovSeries(r.terms, -s * E, x.direction)
    out = NovikovSeries(NovikovSeries.one(x.direction).terms, -s * E, x.direction)
    if not r.is_zero():
        gap = s * (0 - r.leading_exponent())  # > 0
        power = NovikovSeries(out.terms, -s * E, x.direction)
        for k in range(1, int(E // gap) + 1):
            power = power * (-r)
            if power.is_zero():
                break
            out = out + power
    return out.shift(-qd, -te).scale(1 / c)


def eq_upto(x, y, E):
    """Compare every term within E of the larger leading exponent."""
    if x.direction != y.direction:
        raise ValueError("direction mismatch")
    s = x._s()
    leads = [l for l in (x.leading_exponent(), y.leading_exponent()) if l is not None]
    if not leads:
        return True
    top = s * max(s * l for l in leads)
    floor = top - s * Fraction(E)
    for z in (x, y):
        if z.bound is not None and s * z.bound > s * floor:
            raise PrecisionError("series only exact down to %s, asked for %s"
                                 % (fmt_rational(z.bound), fmt_rational(floor)))

    def window(z):
        return {k: c for k, c in z.terms.items() if s * k[1] >= s * floor}
    return window(x) == window(y)


class QuantumClass:
    """Finite sum of basis elements with Novikov series coefficients."""

    def __init__(self, components=None, direction=HOM):
        self.direction = direction
        comps = {}
        for key, ser in (components or {}).items():
            if ser.direction != direction:
                raise ValueError("component direction mismatch")
            if key in comps:
                ser = comps[key] + ser
            comps[key] = ser
        self.components = {k: v for k, v in comps.items() if not (v.is_zero() and v.is_exact())}

    @classmethod
    def basis(cls, key, coeff=None, direction=HOM):
        if coeff is None:
            coeff = NovikovSeries.one(direction)
        return cls({key: coeff}, direction)

    def keys(self):
        return list(self.components)

    def get(self, key):
        return self.components.get(key, NovikovSeries.zero(self.direction))

    def __add__(self, other):
        out = dict(self.components)
        for k, v in other.components.items():
            out[k] = out[k] + v if k in out else v
        return QuantumClass(out, self.direction)

    def __neg__(self):
        return QuantumClass({k: -v for k, v in self.components.items()}, self.direction)

    def __sub__(self, other):
        return self + (-other)

    def times_series(self, s):
        return QuantumClass({k: v * s for k, v in self.components.items()}, self.direction)

    def scale(self, c):
        return QuantumClass({k: v.scale(c) for k, v in self.components.items()}, self.direction)

    def shift(self, q=0, t=0):
        return QuantumClass({k: v.shift(q, t) for k, v in self.components.items()}, self.direction)

    def map_keys(self, fn):
        """Linear change of basis: fn(key) -> dict new_key -> rational."""
        out = {}
        for k, v in self.components.items():
            for nk, c in fn(k).items():
                term = v.scale(c)
                out[nk] = out[nk] + term if nk in out else term
        return QuantumClass(out, self.direction)

    def truncate(self, E):
        lead = self.leading_exponent()
        if lead is None:
            return self
        s = _sign(self.direction)
        b = lead - s * Fraction(E)
        return QuantumClass({k: v.with_bound(b) for k, v in self.components.items()},
                            self.direction)

    def leading_exponent(self):
        s = _sign(self.direction)
        leads = [v.leading_exponent() for v in self.components.values() if not v.is_zero()]
        if not leads:
            return None
        return s * max(s * l for l in leads)

    def leading_part(self):
        lead = self.leading_exponent()
        out = {}
        for k, v in self.components.items():
            lt = {kk: c for kk, c in v.terms.items() if kk[1] == lead}
            if lt:
                out[k] = NovikovSeries(lt, None, self.direction)
        return QuantumClass(out, self.direction)

    def bound(self):
        s = _sign(self.direction)
        bs = [v.bound for v in self.components.values() if v.bound is not None]
        if not bs:
            return None
        return s * max(s * b for b in bs)

    def render(self, name=str):
        if not self.components:
            return "0"
        parts = []
        for k in sorted(self.components, key=lambda k: str(name(k))):
            parts.append("(%s) %s" % (self.components[k].render(), name(k)))
        return " + ".join(parts)

    def __repr__(self):
        return "QuantumClass(%s)" % self.render()


def qc_eq_upto(x, y, E):
    """Componentwise eq_upto, using one common window for all keys."""
    s = _sign(x.direction)
    leads = [l for l in (x.leading_exponent(), y.leading_exponent()) if l is not None]
    if not leads:
        return True
    top = s * max(s * l for l in leads)
    floor = top - s * Fraction(E)
    for k in set(x.components) | set(y.components):
        a, b = x.get(k), y.get(k)
        for z in (a, b):
            if z.bound is not None and s * z.bound > s * floor:
                raise PrecisionError("component %r only exact down to %s"
                                     % (k, fmt_rational(z.bound)))
        wa = {kk: c for kk, c in a.terms.items() if s * kk[1] >= s * floor}
        wb = {kk: c for kk, c in b.terms.items() if s * kk[1] >= s * floor}
        if wa != wb:
            return False
    return True
