"""Built-in surfaces and the JSON polytope file format.

File format (rationals are always strings):

    {"normals": [[0, 1], [1, 1]], "supports": ["2", "9/5"],
     "labels": ["D1", "D2"], "classes": {"1": "F-E2-E3"}}

`labels` and `classes` are optional; class keys are 1-based facet numbers.
"""

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import InvalidPolytope, PolytopeParseError
from .lattice_core import MomentPolytope, require_valid
from .novikov import fmt_rational


def cp2(size=1):
    size = Fraction(size)
    if size <= 0:
        raise InvalidPolytope("CP2 needs a positive size")
    return MomentPolytope(((1, 1), (0, -1), (-1, 0)), (size, 0, 0))


def hirzebruch_even(k, mu):
    """F_{2k} as 0 <= x1 <= 1, x2 + k x1 >= 0, x2 - k x1 <= mu - k."""
    k, mu = int(k), Fraction(mu)
    if k < 0 or mu <= 0 or (k > 0 and mu <= k):
        raise InvalidPolytope("need mu > k (and mu > 0), got k=%d mu=%s" % (k, fmt_rational(mu)))
    return MomentPolytope(((1, 0), (-k, -1), (-1, 0), (-k, 1)), (1, 0, 0, mu - k))


def hirzebruch_even_classes(k):
    k = int(k)
    if k == 0:
        return {0: "B", 1: "F", 2: "B", 3: "F"}
    b = "B+F" if k == 1 else "B+%dF" % k
    m = "B-F" if k == 1 else "B-%dF" % k
    return {0: b, 1: "F", 2: m, 3: "F"}


def hirzebruch_odd(k, mu):
    """F_{2k-1}: 0 <= x1 + x2 <= 1, (k-1) x2 + k x1 >= 0, k x2 + (k-1) x1 >= k - mu - 1."""
    k, mu = int(k), Fraction(mu)
    if k < 1 or mu <= k - 1 or mu <= 0:
        raise InvalidPolytope("need k >= 1 and mu > k - 1, got k=%d mu=%s" % (k, fmt_rational(mu)))
    return MomentPolytope(((1, 1), (-(k - 1), -k), (-1, -1), (-k, -(k - 1))),
                          (1, mu + 1 - k, 0, 0))


def x4(mu, c1, c2, c3):
    mu, c1, c2, c3 = (Fraction(x) for x in (mu, c1, c2, c3))
    normals = ((0, 1), (1, 1), (1, 0), (1, -1), (0, -1), (-1, 0), (-1, 1))
    supports = (mu, mu - c3, 0, -c1, 0, 1, mu + 1 - c2)
    return MomentPolytope(normals, supports)


X4_CLASSES = {0: "F-E2-E3", 1: "E3", 2: "B-E1-E3", 3: "E1", 4: "F-E1", 5: "B-E2", 6: "E2"}


def x5(mu, c1, c2, c3, c4):
    mu, c1, c2, c3, c4 = (Fraction(x) for x in (mu, c1, c2, c3, c4))
    normals = ((0, 1), (1, 1), (1, 0), (1, -1), (0, -1), (-1, -1), (-1, 0), (-1, 1))
    supports = (mu, mu - c3, 0, -c1, 0, 1 - c4, 1, mu + 1 - c2)
    return MomentPolytope(normals, supports)


X5_CLASSES = {0: "F-E2-E3", 1: "E3", 2: "B-E1-E3", 3: "E1", 4: "F-E1-E4", 5: "E4",
              6: "B-E2-E4", 7: "E2"}


def example31(mu=2):
    mu = Fraction(mu)
    if mu <= 1:
        raise InvalidPolytope("need mu > 1")
    return MomentPolytope(((0, -1), (-1, 0), (-2, 1), (1, 0)), (0, 0, mu - 1, 1))


def nef7():
    normals = ((0, -1), (-1, 0), (-2, 1), (-3, 2), (-1, 1), (1, 0), (1, -1))
    return MomentPolytope(normals, (0, 2, 5, 9, 5, 2, 0), ("w1", "w2", "w3", "w4", "w5", "w6", "w7"))


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    params: tuple          # ((name, default), ...)
    builder: object
    classes: object = None  # params -> {facet: name}
    summary: str = ""

    def build(self, **kw):
        args = self._args(kw)
        return require_valid(self.builder(*args))

    def class_names(self, **kw):
        if self.classes is None:
            return {}
        return self.classes(*self._args(kw))

    def _args(self, kw):
        out = []
        for pname, default in self.params:
            v = kw.get(pname)
            out.append(default if v is None else v)
        unknown = set(kw) - {p for p, _ in self.params}
        if unknown:
            raise ValueError("unknown parameter(s) for %s: %s" % (self.name, ", ".join(sorted(unknown))))
        return out


CATALOG = {
    "cp2": CatalogEntry("cp2", (("size", 1),), cp2, None, "projective plane, line area `size`"),
    "hirzebruch-even": CatalogEntry("hirzebruch-even", (("k", 1), ("mu", 2)), hirzebruch_even,
                                    lambda k, mu: hirzebruch_even_classes(k),
                                    "F_{2k} identified with S2 x S2 (areas mu, 1)"),
    "hirzebruch-odd": CatalogEntry("hirzebruch-odd", (("k", 1), ("mu", 2)), hirzebruch_odd, None,
                                   "F_{2k-1}, exceptional area mu"),
    "x4": CatalogEntry("x4", (("mu", 2), ("c1", Fraction(1, 4)), ("c2", Fraction(1, 3)),
                              ("c3", Fraction(1, 5))), x4, lambda *a: dict(X4_CLASSES),
                       "CP2 blown up at four points (S2 x S2 at three)"),
    "x5": CatalogEntry("x5", (("mu", 2), ("c1", Fraction(1, 4)), ("c2", Fraction(1, 3)),
                              ("c3", Fraction(1, 5)), ("c4", Fraction(1, 6))), x5,
                       lambda *a: dict(X5_CLASSES), "CP2 blown up at five points"),
    "example31": CatalogEntry("example31", (("mu", 2),), example31, None,
                              "four-facet base with a zero-chern facet"),
    "nef7": CatalogEntry("nef7", (), nef7, None,
                         "seven-facet NEF surface with two adjacent zero-chern facets"),
}


def catalog_entry(name):
    try:
        return CATALOG[name]
    except KeyError:
        raise ValueError("unknown catalog entry %r (known: %s)" % (name, ", ".join(sorted(CATALOG))))


# --- file format --------------------------------------------------------

_RATIONAL = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*([+-]?\d+))?\s*$")


def parse_rational(text):
    if isinstance(text, bool):
        raise ValueError("not a rational: %r" % (text,))
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise ValueError("rationals must be strings or integers, got %r" % (text,))
    m = _RATIONAL.match(text)
    if not m:
        raise ValueError("malformed rational %r" % text)
    num, den = int(m.group(1)), int(m.group(2) or 1)
    if den == 0:
        raise ValueError("zero denominator in %r" % text)
    return Fraction(num, den)


def _line_col(text, pos):
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, col


def _locate_item(text, key, index):
    """Offset of the index-th element of the top-level array `key` (best effort)."""
    m = re.search(r'"%s"\s*:\s*\[' % re.escape(key), text)
    if not m:
        return 0
    pos = m.end()
    dec = json.JSONDecoder()
    for i in range(index + 1):
        while pos < len(text) and text[pos] in " \t\r\n,":
            pos += 1
        if i == index:
            return pos
        try:
            _, pos = dec.raw_decode(text, pos)
        except json.JSONDecodeError:
            return pos
    return pos


def _fail(text, pos, msg):
    line, col = _line_col(text, pos)
    raise PolytopeParseError(msg, line, col)


@dataclass
class PolytopeFile:
    polytope: MomentPolytope
    classes: dict = field(default_factory=dict)


def parse_polytope(text, validate=True):
    """Parse the JSON format into a PolytopeFile (validated unless told not to)."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PolytopeParseError(exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(data, dict):
        _fail(text, 0, "top level must be an object")
    for key in ("normals", "supports"):
        if key not in data:
            _fail(text, 0, "missing key %r" % key)
        if not isinstance(data[key], list):
            _fail(text, _locate_item(text, key, 0), "%r must be a list" % key)
    normals = []
    for i, v in enumerate(data["normals"]):
        if (not isinstance(v, list) or len(v) != 2
                or not all(isinstance(a, int) and not isinstance(a, bool) for a in v)):
            _fail(text, _locate_item(text, "normals", i), "normal %d must be a pair of integers" % (i + 1))
        normals.append(tuple(v))
    supports = []
    for i, s in enumerate(data["supports"]):
        try:
            supports.append(parse_rational(s))
        except ValueError as exc:
            _fail(text, _locate_item(text, "supports", i), "support %d: %s" % (i + 1, exc))
    if len(normals) != len(supports):
        _fail(text, 0, "%d normals but %d supports" % (len(normals), len(supports)))
    labels = data.get("labels")
    if labels is not None:
        if not isinstance(labels, list) or len(labels) != len(normals) or not all(isinstance(x, str) for x in labels):
            _fail(text, _locate_item(text, "labels", 0), "labels must be one string per facet")
        labels = tuple(labels)
    classes = {}
    for key, name in (data.get("classes") or {}).items():
        if not (isinstance(key, str) and key.isdigit() and 1 <= int(key) <= len(normals)):
            _fail(text, 0, "class key %r is not a facet number" % (key,))
        classes[int(key) - 1] = str(name)
    P = MomentPolytope(tuple(normals), tuple(supports), labels)
    if not validate:
        return PolytopeFile(P, classes)
    try:
        require_valid(P)
    except InvalidPolytope as exc:
        raise PolytopeParseError("not a Delzant polygon: %s" % exc, 1, 1) from None
    return PolytopeFile(P, classes)


def render_polytope(P, classes=None):
    """Canonical text of the file format (used for round trips)."""
    lines = ["{"]
    lines.append('  "normals": [%s],' % ", ".join("[%d, %d]" % tuple(v) for v in P.normals))
    body = ", ".join('"%s"' % fmt_rational(k) for k in P.supports)
    tail = "," if (P.labels or classes) else ""
    lines.append('  "supports": [%s]%s' % (body, tail))
    if P.labels:
        tail = "," if classes else ""
        lines.append('  "labels": [%s]%s' % (", ".join(json.dumps(x) for x in P.labels), tail))
    if classes:
        items = ", ".join('"%d": %s' % (i + 1, json.dumps(classes[i])) for i in sorted(classes))
        lines.append('  "classes": {%s}' % items)
    lines.append("}")
    return "\n".join(lines) + "\n"
