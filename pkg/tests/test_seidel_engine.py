from fractions import Fraction as Fr

import pytest
from hypothesis import assume, given, strategies as st

from toric_seidel.catalog import X4_CLASSES, hirzebruch_even, hirzebruch_even_classes, hirzebruch_odd
from toric_seidel.divisor_geometry import CurveClass, chern_number, facet_class, symplectic_area
from toric_seidel.errors import NotNEF, UncoveredPattern
from toric_seidel.lattice_core import MomentPolytope, edge_lengths, mirror_index, reflect
from toric_seidel.novikov import NovikovSeries, QuantumClass, geom_expand, qc_eq_upto
from toric_seidel.seidel_engine import (TABLE_CODES, chern_values, closed_terms, contribution_sum,
                                        contributions, dispatch_case, expand_closed_form,
                                        render_closed_form, seidel_element)

from conftest import X4_PARAMS, eps_x4
from strategies import nef_polytopes

E = 6


def named(P, names):
    """Inverse of a facet -> name dictionary: name -> CurveClass."""
    return {name: facet_class(P, i) for i, name in names.items()}


def oracle(P, names, terms):
    """Class-keyed series from (sign, name, exponent, geometric weights) tuples."""
    cls = named(P, names)
    out = QuantumClass()
    for sign, name, te, weights in terms:
        ser = NovikovSeries.monomial(sign, 1, te)
        for w in weights:
            ser = ser * geom_expand(w, 40)
        out = out + QuantumClass.basis(cls[name], ser)
    return out


def same(e, expected):
    return qc_eq_upto(e.series, expected, E)


# --- dispatch ----------------------------------------------------------------

@pytest.mark.parametrize("facet,code", [(4, "1"), (0, "2a"), (1, "3c"), (2, "2a"),
                                        (3, "3a-mirror"), (5, "1"), (6, "3a")])
def test_x4_dispatch(X4, facet, code):
    assert str(dispatch_case(X4, facet)) == code


def test_nef7_acting_facet_is_2b(NEF7):
    assert str(dispatch_case(NEF7, 1)) == "2b"


def test_dispatch_rejects_non_nef():
    with pytest.raises(NotNEF):
        dispatch_case(hirzebruch_even(2, 3), 0)


def test_dispatch_rejects_double_zero_runs():
    # every third facet has chern 1 and sits between two runs of two zero-chern facets
    normals = ((-1, 0), (-1, 1), (-1, 2), (0, 1), (1, 0), (2, -1), (1, -1), (0, -1), (-1, -1))
    P = MomentPolytope(normals, (7, 6, 11, 8, 6, 11, 7, 8, 12))
    assert chern_values(P) == [0, 0, 1] * 3
    for m in (2, 5, 8):
        with pytest.raises(UncoveredPattern):
            dispatch_case(P, m)
    assert str(dispatch_case(P, 0)) == "2b"
    assert str(dispatch_case(P, 1)) == "2b-mirror"


# --- contribution table --------------------------------------------------------

def test_case1_single_pair(X4):
    pairs = contributions(X4, 4, E)
    assert len(pairs) == 1
    B, a = pairs[0]
    assert B.is_zero() and a == (1, 4)


def test_case2b_mixed_class(NEF7):
    table = dict((B, a) for B, a in contributions(NEF7, 1, E))
    A_n, A_1 = facet_class(NEF7, 1), facet_class(NEF7, 2)
    assert table[2 * A_n + 3 * A_1] == (-1, 2)
    assert table[3 * A_n + 2 * A_1] == (1, 1)
    assert table[2 * A_n + 2 * A_1] == (1, 1)


def test_case3c_classes_unmixed(X4):
    A_prev, A_next = facet_class(X4, 0), facet_class(X4, 2)
    for B, a in contributions(X4, 1, E):
        if B.is_zero():
            continue
        multiples = [k * A_prev for k in range(1, 40)] + [k * A_next for k in range(1, 40)]
        assert B in multiples


# --- regressions: X4 -----------------------------------------------------------

def x4_expected(X4):
    mu, c1, c2, c3 = X4_PARAMS
    e1, e2 = eps_x4(*X4_PARAMS)
    w1 = 1 - c2 - c3        # area of F-E2-E3
    w3 = mu - c1 - c3       # area of B-E1-E3
    return {
        0: [(1, "F-E2-E3", mu - e2, [w1])],
        1: [(1, "E3", mu - c3 + e1 - e2, []),
            (-1, "F-E2-E3", mu + c2 - 1 + e1 - e2, [w1]),
            (-1, "B-E1-E3", c1 + e1 - e2, [w3])],
        2: [(1, "B-E1-E3", e1, [w3])],
        3: [(1, "E1", e1 + e2 - c1, []),
            (-1, "B-E1-E3", e1 + e2 + c3 - mu, [w3])],
        4: [(1, "F-E1", e2, [])],
        5: [(1, "B-E2", 1 - e1, [])],
        6: [(1, "E2", mu + 1 - c2 - e1 - e2, []),
            (-1, "F-E2-E3", mu + c3 - e1 - e2, [w1])],
    }


@pytest.mark.parametrize("facet", range(7))
def test_x4_elements(X4, facet):
    e = seidel_element(X4, facet, E, normalized=True)
    assert same(e, oracle(X4, X4_CLASSES, x4_expected(X4)[facet]))


def test_x4_facet4_phi(X4):
    mu, c1, c2, c3 = X4_PARAMS
    e1, e2 = eps_x4(*X4_PARAMS)
    e = seidel_element(X4, 3, E, normalized=True)
    assert e.phi_max == e1 + e2 - c1
    assert e.closed_form(X4_CLASSES).startswith("+ E1 (x) q t^{")


def test_x4_facet1_phi_is_mu_minus_eps2(X4):
    assert seidel_element(X4, 0, E, normalized=True).phi_max == Fr(2504647, 2453580)


# --- regressions: F2 ------------------------------------------------------------

def test_f2_elements(F2):
    mu, eps = Fr(2), Fr(1, 12)
    names = hirzebruch_even_classes(1)
    expected = {
        0: [(1, "B+F", Fr(1, 2) - eps, [])],
        2: [(1, "B-F", Fr(1, 2) + eps, [mu - 1])],
        1: [(1, "F", mu / 2 + eps, []), (-1, "B-F", 1 - mu / 2 + eps, [mu - 1])],
        3: [(1, "F", mu / 2 + eps, []), (-1, "B-F", 1 - mu / 2 + eps, [mu - 1])],
    }
    for facet, terms in expected.items():
        e = seidel_element(F2, facet, E, normalized=True)
        assert same(e, oracle(F2, names, terms)), facet


# --- nef7 ---------------------------------------------------------------------

def test_nef7_raw_closed_form(NEF7):
    e = seidel_element(NEF7, 1, E)
    assert e.phi_max == 2
    assert render_closed_form(e) == ("+ A2 (x) q t^{2} / (1 - t^{-1}) / (1 - t^{-2}) + "
                                     "- A3 (x) q t^{1} / (1 - t^{-1}) / (1 - t^{-2})")


def test_nef7_collision_coefficients(NEF7):
    e = seidel_element(NEF7, 1, E)
    A_n, A_1 = facet_class(NEF7, 1), facet_class(NEF7, 2)
    # coefficient of q t^{2-j}: #{k >= l, k+l=j} on A_n and -#{k < l} on A_1
    for j in range(E + 1):
        ge = sum(1 for k in range(j + 1) if k >= j - k)
        assert e.series.get(A_n).coefficient(1, 2 - j) == ge
        assert e.series.get(A_1).coefficient(1, 2 - j) == -(j + 1 - ge)


def test_case2a_expansion(X4):
    e = seidel_element(X4, 0, E)
    w = symplectic_area(X4, facet_class(X4, 0))
    ser = e.series.get(facet_class(X4, 0))
    k = 0
    while k * w <= E:
        assert ser.coefficient(1, e.phi_max - k * w) == 1
        k += 1
    assert len(e.series.keys()) == 1


def test_case1_expansion_unchanged(X4):
    e = seidel_element(X4, 4, E)
    assert e.series.get(facet_class(X4, 4)).terms == {(1, e.phi_max): 1}


def test_rejects_nonpositive_weight(X4):
    from toric_seidel.seidel_engine import ClosedTerm, expand_terms
    with pytest.raises(ValueError):
        expand_terms(X4, [ClosedTerm(1, 0, Fr(0), (Fr(0),))], Fr(1), E)


# --- properties ---------------------------------------------------------------

def covered_facets(P, table_only=False):
    out = []
    for m in range(P.n):
        try:
            case = dispatch_case(P, m)
        except UncoveredPattern:
            continue
        if table_only and case.code not in TABLE_CODES:
            continue
        out.append(m)
    return out


@given(nef_polytopes())
def test_expansion_matches_contributions(P):
    # enumeration is quadratic in E / area; tiny facets make a single example take a minute
    assume(min(edge_lengths(P)) >= Fr(1, 3))
    for m in covered_facets(P, table_only=True):
        e = seidel_element(P, m, E)
        assert qc_eq_upto(e.series, contribution_sum(P, m, E), E)


@given(nef_polytopes())
def test_leading_term_law(P):
    for m in covered_facets(P):
        e = seidel_element(P, m, E)
        lead = e.series.leading_part()
        assert lead.keys() == [facet_class(P, m)]
        assert lead.get(facet_class(P, m)).terms == {(1, e.phi_max): 1}


@given(nef_polytopes())
def test_degree_law(P):
    for m in covered_facets(P):
        e = seidel_element(P, m, E)
        for key, ser in e.series.components.items():
            assert isinstance(key, CurveClass)
            for (qd, te) in ser.terms:
                assert qd == 1
                assert te <= e.phi_max
        facets = {facet_class(P, i) for i in range(P.n)}
        assert set(e.series.keys()) <= facets
        if dispatch_case(P, m).code in TABLE_CODES:
            # lower-order terms shift by classes of zero chern number
            for B, _ in contributions(P, m, E):
                assert chern_number(B) == 0


def mirrored_class(P, c):
    n = P.n
    out = [0] * n
    for j, a in enumerate(c.coeffs):
        out[mirror_index(n, j)] = a
    return CurveClass(tuple(out))


@given(nef_polytopes())
def test_mirror_consistency(P):
    R = reflect(P)
    assert R.orientation() == P.orientation()
    for m in covered_facets(P):
        e = seidel_element(P, m, E)
        f = seidel_element(R, mirror_index(P.n, m), E)
        moved = e.series.map_keys(lambda c: {mirrored_class(P, c): 1})
        assert qc_eq_upto(moved, f.series, E)
        assert f.phi_max == e.phi_max


def cyclic_distance(n, i, j):
    d = (i - j) % n
    return min(d, n - d)


@given(nef_polytopes())
def test_locality(P):
    for m in covered_facets(P, table_only=True):
        for B, (_, facet) in contributions(P, m, E):
            for j, a in enumerate(B.coeffs):
                if a:
                    assert cyclic_distance(P.n, j, m) <= 3
            assert cyclic_distance(P.n, facet, m) <= 2
