import re
from fractions import Fraction as Fr

from hypothesis import given, strategies as st

from toric_seidel.catalog import (CATALOG, X4_CLASSES, X5_CLASSES, cp2, hirzebruch_even,
                                  hirzebruch_even_classes, hirzebruch_odd)
from toric_seidel.divisor_geometry import (FANO, NEF, NON_NEF, CurveClass, chern_number, classify,
                                           expand_in_basis, facet_class, h2_basis, in_kernel,
                                           self_intersection_d, symplectic_area)
from toric_seidel.lattice_core import edge_lengths, reflect

from conftest import X4_PARAMS
from strategies import nef_polytopes


def test_f2_facet_class(F2):
    assert facet_class(F2, 2).coeffs == (0, 1, -2, 1)


def test_cp2_facet_class():
    P = cp2()
    assert [facet_class(P, i).coeffs for i in range(3)] == [(1, 1, 1)] * 3
    assert [self_intersection_d(P, i) for i in range(3)] == [-1, -1, -1]


def test_x4_facet1_class(X4):
    assert facet_class(X4, 0).coeffs == (-2, 1, 0, 0, 0, 0, 1)


def test_self_intersections(F2, X4):
    assert self_intersection_d(F2, 2) == 2
    assert self_intersection_d(X4, 2) == 2


def test_x4_facet1_chern_and_area(X4):
    mu, c1, c2, c3 = X4_PARAMS
    c = facet_class(X4, 0)
    assert chern_number(c) == 0
    assert symplectic_area(X4, c) == 1 - c2 - c3


def test_zero_class(X4):
    z = CurveClass.zero(7)
    assert chern_number(z) == 0 and symplectic_area(X4, z) == 0


def test_f2_zero_chern_facet(F2):
    c = facet_class(F2, 2)
    assert chern_number(c) == 0
    assert symplectic_area(F2, c) == 1


def test_classification_examples(X4, X5, NEF7, F2):
    for P in (cp2(), hirzebruch_even(0, 2), hirzebruch_odd(1, 2)):
        assert classify(P).kind == FANO
    for P in (F2, X4, X5, NEF7):
        assert classify(P).kind == NEF
    F4 = classify(hirzebruch_even(2, 3))
    assert F4.kind == NON_NEF
    assert any(r.d == 4 and r.chern == -2 for r in F4.facets)


def test_nef7_chern_pattern(NEF7):
    assert classify(NEF7).chern_pattern == (1, 0, 0, 1, 0, 2, 1)


def test_h2_basis_ranks(X4):
    assert len(h2_basis(hirzebruch_even(0, 1))) == 2
    assert len(h2_basis(X4)) == 5


def test_facet_classes_expand_integrally(X4):
    basis = h2_basis(X4)
    for i in range(X4.n):
        c = facet_class(X4, i)
        coords = expand_in_basis(X4, c)
        total = CurveClass.zero(7)
        for k, b in zip(coords, basis):
            total = total + b * k
        assert total == c


def test_sum_of_d_over_catalog():
    for entry in CATALOG.values():
        P = entry.build()
        assert sum(self_intersection_d(P, i) for i in range(P.n)) == 3 * P.n - 12


# Named classes: B.F = 1, E_i.E_j = -delta_ij, everything else 0.

def parse_word(word):
    out = {}
    for sign, coef, sym in re.findall(r"([+-]?)(\d*)([BFE]\d*)", word):
        k = int(coef or 1) * (-1 if sign == "-" else 1)
        out[sym] = out.get(sym, 0) + k
    return out


def pair(a, b):
    total = a.get("B", 0) * b.get("F", 0) + a.get("F", 0) * b.get("B", 0)
    for k, v in a.items():
        if k.startswith("E"):
            total -= v * b.get(k, 0)
    return total


def check_dictionary(P, names):
    n = P.n
    for i in range(n):
        c = facet_class(P, i)
        for j in range(n):
            assert c.coeffs[j] == pair(parse_word(names[i]), parse_word(names[j])), (i, j)


def test_x4_dictionary_matches_intersections(X4):
    check_dictionary(X4, X4_CLASSES)


def test_x5_dictionary_matches_intersections(X5):
    check_dictionary(X5, X5_CLASSES)


def test_hirzebruch_dictionaries():
    for k in range(4):
        check_dictionary(hirzebruch_even(k, k + 2), hirzebruch_even_classes(k))


def test_x4_dictionary_areas(X4):
    mu, c1, c2, c3 = X4_PARAMS
    area = {"B": mu, "F": Fr(1), "E1": c1, "E2": c2, "E3": c3}
    for i, word in X4_CLASSES.items():
        expected = sum(k * area[s] for s, k in parse_word(word).items())
        assert symplectic_area(X4, facet_class(X4, i)) == expected


# --- properties -----------------------------------------------------------

@given(nef_polytopes())
def test_adjunction(P):
    for i in range(P.n):
        assert chern_number(facet_class(P, i)) == 2 - self_intersection_d(P, i)


@given(nef_polytopes())
def test_area_is_edge_length(P):
    lengths = edge_lengths(P)
    for i in range(P.n):
        assert symplectic_area(P, facet_class(P, i)) == lengths[i]


@given(nef_polytopes(), st.integers(-3, 3), st.integers(-3, 3))
def test_linearity(P, a, b):
    x, y = facet_class(P, 0), facet_class(P, 1)
    z = x * a + y * b
    assert in_kernel(P, z)
    assert chern_number(z) == a * chern_number(x) + b * chern_number(y)
    assert symplectic_area(P, z) == a * symplectic_area(P, x) + b * symplectic_area(P, y)


@given(nef_polytopes())
def test_classification_reflection_invariant(P):
    assert classify(reflect(P)).kind == classify(P).kind


@given(nef_polytopes())
def test_sum_of_d(P):
    assert sum(self_intersection_d(P, i) for i in range(P.n)) == 3 * P.n - 12
