"""Command-line front end.

A SOURCE is either a polytope file (see catalog.py for the format) or the
name of a built-in surface, whose parameters come from --mu, --k, --c and
--size.  Facets are numbered from 1 on the command line.  Counter-clockwise
listings are turned clockwise on load (facet 1 stays put, facet i becomes
facet n + 2 - i).
"""

import contextlib
import io
import json
import os
import sys
from fractions import Fraction

import click

from . import catalog as cat
from .clutching_cohomology import (cohomology_ring, named_classes, pairing_matrices,
                                   standard_context)
from .divisor_geometry import classify
from .errors import PolytopeParseError, ToricError
from .gw_localization import FanData, gw_closed_form, gw_one_point, parse_insertion
from .lattice_core import edge_lengths, validate_delzant, vertices
from .novikov import fmt_rational, sorted_terms
from .quantum_algebra import (coefficients_for, hirzebruch4_lifts, potential_from_lifts,
                              presentation, superpotential)
from .seidel_engine import facet_name, seidel_element


class Source:
    def __init__(self, polytope, classes, origin):
        self.polytope = polytope
        self.classes = classes
        self.origin = origin


def _rat(text, what):
    try:
        return cat.parse_rational(text)
    except ValueError as exc:
        raise click.UsageError("%s: %s" % (what, exc))


def _params(entry, mu, k, c, size):
    names = [p for p, _ in entry.params]
    kw = {}
    if mu is not None:
        kw["mu"] = _rat(mu, "--mu")
    if k is not None:
        kw["k"] = k
    if size is not None:
        kw["size"] = _rat(size, "--size")
    if c is not None:
        vals = [_rat(x, "--c") for x in c.split(",")]
        cs = [p for p in names if p.startswith("c")]
        if len(vals) != len(cs):
            raise click.UsageError("%s takes %d capacities, got %d" % (entry.name, len(cs), len(vals)))
        kw.update(zip(cs, vals))
    bad = [p for p in kw if p not in names]
    if bad:
        raise click.UsageError("%s does not take %s" % (entry.name, ", ".join("--" + b for b in bad)))
    return kw


def load_source(source, mu=None, k=None, c=None, size=None, validate=True):
    if os.path.exists(source):
        with open(source, encoding="utf-8") as fh:
            text = fh.read()
        pf = cat.parse_polytope(text, validate=validate)
        P, classes = pf.polytope, pf.classes
    elif source in cat.CATALOG:
        entry = cat.CATALOG[source]
        kw = _params(entry, mu, k, c, size)
        P = entry.build(**kw)
        classes = entry.class_names(**kw)
    else:
        raise click.UsageError("%r is neither a file nor a catalog entry (%s)"
                               % (source, ", ".join(sorted(cat.CATALOG))))
    if P.orientation() == 1:
        n = P.n
        classes = {(-i) % n: v for i, v in classes.items()}
        P = P.oriented()
    return Source(P, classes, source)


def source_options(f):
    f = click.option("--size", default=None, help="Line area (cp2).")(f)
    f = click.option("--c", "c", default=None, help="Comma-separated capacities c1,c2,...")(f)
    f = click.option("--k", "k", default=None, type=int, help="Hirzebruch index.")(f)
    f = click.option("--mu", default=None, help="Area parameter mu (rational).")(f)
    f = click.argument("source")(f)
    return f


def json_option(f):
    return click.option("--json", "as_json", is_flag=True, help="Structured output.")(f)


def _facet(src, facet):
    n = src.polytope.n
    if not 1 <= facet <= n:
        raise click.UsageError("--facet must be between 1 and %d" % n)
    return facet - 1


def emit(text, data, as_json):
    if as_json:
        click.echo(json.dumps(data, indent=2, sort_keys=True))
    else:
        click.echo(text)


def series_terms(x):
    return [[qd, fmt_rational(te), fmt_rational(c)] for (qd, te), c in sorted_terms(x.terms)]


def _fr(x):
    return fmt_rational(Fraction(x))


@click.group()
def main():
    """Seidel elements and quantum homology of toric surfaces."""


@main.command()
@source_options
@json_option
def validate(source, mu, k, c, size, as_json):
    """Check the Delzant conditions."""
    src = load_source(source, mu, k, c, size, validate=False)
    rep = validate_delzant(src.polytope)
    data = {"valid": rep.ok, "facets": src.polytope.n,
            "violations": [{"check": ch, "index": ix, "message": msg}
                           for ch, ix, msg in rep.violations]}
    text = "valid (%d facets)" % src.polytope.n if rep.ok else "invalid\n%s" % rep
    emit(text, data, as_json)
    if not rep.ok:
        sys.exit(1)


@main.command()
@source_options
@json_option
def info(source, mu, k, c, size, as_json):
    """Classification and per-facet data."""
    src = load_source(source, mu, k, c, size)
    P = src.polytope
    cl = classify(P)
    lengths = edge_lengths(P)
    rows = []
    for r in cl.facets:
        i = r.index
        rows.append({"facet": i + 1, "label": P.label(i), "normal": list(P.normal(i)),
                     "support": _fr(P.support(i)), "length": _fr(lengths[i]),
                     "self_intersection": r.self_intersection, "chern": r.chern,
                     "area": _fr(r.area), "class": src.classes.get(i)})
    verts = [[_fr(x), _fr(y)] for x, y in vertices(P)]
    data = {"classification": cl.kind, "facets": rows, "vertices": verts}
    lines = ["classification: %s" % cl.kind,
             "facet  label  normal     support  length  self-int  chern  area"]
    for r in rows:
        lines.append("%-6d %-6s %-10s %-8s %-7s %-9d %-6d %s%s" % (
            r["facet"], r["label"], "(%d,%d)" % tuple(r["normal"]), r["support"], r["length"],
            r["self_intersection"], r["chern"], r["area"],
            "  [%s]" % r["class"] if r["class"] else ""))
    lines.append("vertices: " + ", ".join("(%s,%s)" % tuple(v) for v in verts))
    emit("\n".join(lines), data, as_json)


@main.command()
@source_options
@click.option("--facet", type=int, required=True, help="Acting facet (1-based).")
@click.option("--cutoff", default="6", help="Window below the leading exponent.")
@click.option("--normalize", is_flag=True, help="Use the centroid-normalized moment map.")
@json_option
def seidel(source, mu, k, c, size, facet, cutoff, normalize, as_json):
    """Closed form and expansion of a Seidel element."""
    src = load_source(source, mu, k, c, size)
    m = _facet(src, facet)
    E = _rat(cutoff, "--cutoff")
    e = seidel_element(src.polytope, m, E, normalized=normalize)
    name = facet_name(src.polytope, src.classes)
    comps = [{"class": name(key), "terms": series_terms(e.series.components[key]),
              "bound": _fr(e.series.components[key].bound)
              if e.series.components[key].bound is not None else None}
             for key in sorted(e.series.components, key=lambda k: str(name(k)))]
    data = {"facet": facet, "case": str(e.case), "phi_max": _fr(e.phi_max),
            "closed_form": e.closed_form(src.classes), "expansion": comps, "cutoff": _fr(E)}
    text = "\n".join(["case: %s" % e.case, "phi_max: %s" % _fr(e.phi_max),
                      "closed form: %s" % e.closed_form(src.classes),
                      "expansion (window %s): %s" % (_fr(E), e.series.render(name))])
    emit(text, data, as_json)


def _context(src, facet):
    P = src.polytope
    if facet is None:
        m = _canonical_facet(P)
    else:
        m = _facet(src, facet)
    return m, standard_context(P, m)


def _canonical_facet(P):
    """The facet whose predecessor and itself are -e2, -e1 (else the last one)."""
    for m in range(P.n):
        if P.normal(m - 1) == (0, -1) and P.normal(m) == (-1, 0):
            return m
    return P.n - 1


@main.command()
@source_options
@click.option("--facet", type=int, default=None, help="Acting facet (1-based).")
@json_option
def clutch(source, mu, k, c, size, facet, as_json):
    """Fan of the clutched 3-fold."""
    src = load_source(source, mu, k, c, size)
    m, cf = _context(src, facet)
    rays = [{"name": cf.ray_name(i), "ray": list(r), "support": _fr(cf.polytope3.supports[i])}
            for i, r in enumerate(cf.rays)]
    cones = sorted(tuple(sorted(cf.ray_name(i) for i in cone)) for cone in cf.fan.max_cones)
    data = {"facet": m + 1, "c_prime": _fr(cf.c_prime), "rays": rays, "cones": [list(x) for x in cones]}
    lines = ["acting facet: %d (relabelled last)" % (m + 1), "c': %s" % _fr(cf.c_prime), "rays:"]
    for r in rays:
        lines.append("  Z%-3s (%d,%d,%d)  support %s" % ((r["name"],) + tuple(r["ray"]) + (r["support"],)))
    lines.append("maximal cones: " + " ".join("{%s}" % ",".join(x) for x in cones))
    emit("\n".join(lines), data, as_json)


@main.command()
@source_options
@click.option("--facet", type=int, default=None, help="Acting facet (1-based).")
@json_option
def cohomology(source, mu, k, c, size, facet, as_json):
    """Cohomology ring and pairing of the clutched 3-fold."""
    src = load_source(source, mu, k, c, size)
    m, cf = _context(src, facet)
    ring = cohomology_ring(cf)
    pm = pairing_matrices(ring)
    bases = {str(d): ring.basis_names(d) for d in sorted(ring.bases) if ring.bases[d]}
    data = {"facet": m + 1, "betti": list(ring.betti), "bases": bases, "pairing_names": pm.names,
            "G": [[_fr(x) for x in r] for r in pm.G], "Ginv": [[_fr(x) for x in r] for r in pm.Ginv]}
    lines = ["betti: %s" % " ".join(str(b) for b in ring.betti)]
    for d in sorted(ring.bases):
        if ring.bases[d]:
            lines.append("degree %d: %s" % (d, " ".join(ring.basis_names(d))))
    lines.append("pairing basis: %s" % " ".join(pm.names))
    width = max(len(_fr(x)) for r in pm.G + pm.Ginv for x in r)
    lines.append("G:")
    lines += ["  " + " ".join(_fr(x).rjust(width) for x in r) for r in pm.G]
    lines.append("G^-1:")
    lines += ["  " + " ".join(_fr(x).rjust(width) for x in r) for r in pm.Ginv]
    emit("\n".join(lines), data, as_json)


@main.command()
@source_options
@click.option("--facet", type=int, default=None, help="Acting facet (1-based).")
@click.option("--class", "klass", required=True, help="k,l for the section class A_max + k A_n + l A_1.")
@click.option("--insertion", required=True, help="Point-class insertion, e.g. Z1Zb.")
@click.option("--samples", default=3, type=int, help="Random weight samples.")
@click.option("--closed-form", is_flag=True, help="Also print the closed-form value.")
@json_option
def gw(source, mu, k, c, size, facet, klass, insertion, samples, closed_form, as_json):
    """One-point section-class invariant by localization."""
    src = load_source(source, mu, k, c, size)
    try:
        kk, ll = (int(x) for x in klass.split(","))
    except ValueError:
        raise click.UsageError("--class expects two integers k,l")
    try:
        ins = parse_insertion(insertion)
    except ValueError as exc:
        raise click.UsageError(str(exc))
    m, cf = _context(src, facet)
    known = {cf.ray_name(i) for i in range(len(cf.rays))}
    if any(x not in known for x in ins):
        raise click.UsageError("--insertion uses rays %s; known rays are Z1..Z%d, Zb, Zt"
                               % (insertion, cf.n))
    ring = cohomology_ring(cf)
    cls = named_classes(cf, ring)
    gamma = tuple(a + kk * b + ll * d for a, b, d in zip(cls["A_max"], cls["A_n"], cls["A_1"]))
    value = gw_one_point(cf, gamma, ins, samples=samples, fd=FanData(cf))
    data = {"facet": m + 1, "class": [kk, ll], "insertion": insertion, "value": _fr(value)}
    text = _fr(value)
    if closed_form:
        cfv = gw_closed_form(kk, ll, insertion)
        data["closed_form"] = _fr(cfv)
        text += "\nclosed form: %s" % _fr(cfv)
    emit(text, data, as_json)


def _lifts_for(P):
    cl = classify(P)
    if cl.kind == "non-NEF":
        C = coefficients_for(P)
        return hirzebruch4_lifts(P, C), C
    return None, None


@main.command(name="presentation")
@source_options
@json_option
def presentation_cmd(source, mu, k, c, size, as_json):
    """Lifted generators and multiplicative relations."""
    src = load_source(source, mu, k, c, size)
    P = src.polytope
    lifts, C = _lifts_for(P)
    pres = presentation(P, lifts, C)
    lift_text = [y.render() for y in pres.lifts]
    rels = [{"collection": [i + 1 for i in r.datum.I], "relation": r.render(pres)}
            for r in pres.relations]
    lin = [pres.render_poly(x) for x in pres.linear]
    data = {"lifts": lift_text, "linear": lin, "relations": rels}
    lines = ["lifts:"] + ["  " + x for x in lift_text] + ["linear:"] + ["  " + x for x in lin]
    lines.append("relations:")
    lines += ["  {%s}: %s" % (",".join(str(i) for i in r["collection"]), r["relation"]) for r in rels]
    emit("\n".join(lines), data, as_json)


@main.command()
@source_options
@json_option
def potential(source, mu, k, c, size, as_json):
    """Landau-Ginzburg superpotential."""
    src = load_source(source, mu, k, c, size)
    P = src.polytope
    lifts, C = _lifts_for(P)
    W = potential_from_lifts(P, lifts, C) if lifts else superpotential(P)
    terms = [{"z": list(w), "q": qd, "t": _fr(te), "coeff": _fr(cv)} for w, (qd, te), cv in W.expanded()]
    emit("W = " + W.render(), {"potential": W.render(), "terms": terms}, as_json)


@main.command(name="catalog")
@click.argument("name", required=False)
@click.option("--mu", default=None)
@click.option("--k", "k", default=None, type=int)
@click.option("--c", "c", default=None)
@click.option("--size", default=None)
@json_option
def catalog_cmd(name, mu, k, c, size, as_json):
    """List built-in surfaces, or print one in the file format."""
    if name is None:
        data = [{"name": e.name, "params": [[p, _fr(d)] for p, d in e.params], "summary": e.summary}
                for e in cat.CATALOG.values()]
        text = "\n".join("%-16s %-40s %s" % (e["name"], " ".join("%s=%s" % tuple(p) for p in e["params"]),
                                             e["summary"]) for e in data)
        emit(text, data, as_json)
        return
    src = load_source(name, mu, k, c, size)
    text = cat.render_polytope(src.polytope, src.classes).rstrip("\n")
    emit(text, json.loads(text), as_json)


def run(args):
    """Run a command in-process; returns (exit code, combined output)."""
    buf = io.StringIO()
    code = 0
    with contextlib.redirect_stdout(buf), contextlib.redirect_stderr(buf):
        try:
            _dispatch(args)
        except SystemExit as exc:
            code = exc.code if isinstance(exc.code, int) else (0 if exc.code is None else 1)
    return code, buf.getvalue()


def _dispatch(args):
    try:
        code = main.main(args=list(args), prog_name="toric-seidel", standalone_mode=False)
    except click.exceptions.Abort:
        click.echo("aborted", err=True)
        sys.exit(1)
    except click.UsageError as exc:
        exc.show()
        sys.exit(2)
    except click.ClickException as exc:
        exc.show()
        sys.exit(exc.exit_code)
    except PolytopeParseError as exc:
        click.echo("parse error: %s" % exc, err=True)
        sys.exit(2)
    except ToricError as exc:
        click.echo("error: %s: %s" % (type(exc).__name__, exc), err=True)
        sys.exit(1)
    except ValueError as exc:
        click.echo("invalid input: %s" % exc, err=True)
        sys.exit(2)
    if isinstance(code, int) and code:
        sys.exit(code)


def console():
    _dispatch(sys.argv[1:])
    sys.exit(0)
