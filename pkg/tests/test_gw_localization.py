import random
from fractions import Fraction as Fr

import pytest
from hypothesis import given, strategies as st

from toric_seidel.clutching_cohomology import cones_by_name, named_classes
from toric_seidel.errors import DatabaseMiss
from toric_seidel.gw_localization import (FanData, SplittingContext, distinct_unmarked,
                                          enumerate_graphs, fixed_weight, flag_weight,
                                          gw_closed_form, gw_one_point, gw_zero_point,
                                          parse_insertion, random_weights, recursion_checks,
                                          recursion_verify, restriction, splitting_sum)


@pytest.fixture(scope="module")
def setup(nef7_context):
    cf, ring = nef7_context
    fd = FanData(cf)
    names = named_classes(cf, ring)
    return cf, fd, names


@pytest.fixture(scope="module")
def ctx(nef7_context):
    return SplittingContext(nef7_context[0])


def add(*classes):
    return tuple(map(sum, zip(*classes)))


def section(names, k, l):
    return add(names["A_max"], *([names["A_n"]] * k), *([names["A_1"]] * l))


def marked_cones(fd, insertion):
    return [c for c in fd.cones if set(insertion) <= set(c)]


# --- graphs and weights ---------------------------------------------------------

def test_graph_counts(setup):
    cf, fd, names = setup
    A = section(names, 1, 1)
    z1zb = (cf.ray_index("1"), cf.ray_index("b"))
    z1z2 = (cf.ray_index("1"), cf.ray_index("2"))
    assert len(distinct_unmarked(enumerate_graphs(cf, A, marked_cones(fd, z1zb), fd))) == 5
    assert len(distinct_unmarked(enumerate_graphs(cf, A, marked_cones(fd, z1z2), fd))) == 6


def test_section_class_graphs_are_single_walls(setup):
    cf, fd, names = setup
    graphs = enumerate_graphs(cf, names["A_max"], None, fd)
    walls = {frozenset(p) for p, g in fd.gamma.items() if g == names["A_max"]}
    assert all(len(g.edges()) == 1 for g in graphs)
    assert len(distinct_unmarked(graphs)) == len(walls)


def test_automorphisms_small(setup):
    cf, fd, names = setup
    for k, l in [(0, 0), (1, 0), (0, 1), (1, 1)]:
        for g in enumerate_graphs(cf, section(names, k, l), None, fd):
            assert g.automorphisms() in (1, 2)


def test_weight_table(setup):
    cf, fd, _ = setup
    s = {k: tuple(sorted(v)) for k, v in cones_by_name(cf).items()}
    w = random_weights(len(cf.rays), random.Random(7))
    assert fixed_weight(fd, s[2], s[7], w) == w[cf.bottom] - w[cf.top]
    assert fixed_weight(fd, s[2], s[3], w) == -fixed_weight(fd, s[3], s[2], w)
    assert flag_weight(fd, s[2], s[3], 2, w) == fixed_weight(fd, s[2], s[3], w) / 2


def test_restriction_vanishes_off_cone(setup):
    cf, fd, _ = setup
    w = random_weights(len(cf.rays), random.Random(3))
    cone = fd.cones[0]
    outside = next(i for i in range(len(cf.rays)) if i not in cone)
    assert restriction(fd, cone, outside, w) == 0


def test_parse_insertion():
    assert parse_insertion("Z1Zb") == ("1", "b")
    with pytest.raises(ValueError):
        parse_insertion("")


# --- localization values -------------------------------------------------------------

BASE_VALUES = {
    (1, 0): {"1b": 1, "12": 0, "2b": 0},
    (1, 1): {"1b": 1, "12": 0, "2b": 0},
    (0, 1): {"1b": 2, "12": 2, "2b": -1},
}


@pytest.mark.parametrize("kl", sorted(BASE_VALUES))
def test_base_case_values(setup, kl):
    cf, fd, names = setup
    A = section(names, *kl)
    for ins, expected in BASE_VALUES[kl].items():
        assert gw_one_point(cf, A, tuple(ins), samples=3, fd=fd) == expected


@pytest.mark.parametrize("seed", [1, 2, 3])
def test_weight_independence(setup, seed):
    cf, fd, names = setup
    assert gw_one_point(cf, section(names, 0, 1), ("1", "b"), samples=3, seed=seed, fd=fd) == 2


@pytest.mark.parametrize("kl", [(0, 0), (1, 0), (0, 1), (1, 1)])
def test_closed_forms_match_localization(setup, kl):
    cf, fd, names = setup
    A = section(names, *kl)
    for ins in ("Z1Zb", "Z1Z2", "Z2Zb"):
        loc = gw_one_point(cf, A, parse_insertion(ins), fd=fd)
        assert gw_closed_form(*kl, ins) == loc


def test_closed_form_examples():
    assert gw_closed_form(3, 1, "Z1Zb") == 1
    assert gw_closed_form(1, 2, "Z2Zb") == -1
    assert gw_closed_form(0, 0, "Z1Z2") == 0
    with pytest.raises(DatabaseMiss):
        gw_closed_form(1, 1, "ZbZb")


def test_zero_point():
    assert gw_zero_point(2, 0) == Fr(-1, 8)
    assert gw_zero_point(3, 3) == Fr(-1, 27)
    assert gw_zero_point(2, 1) == 0
    assert gw_zero_point(0, 4) == Fr(-1, 64)
    with pytest.raises(ValueError):
        gw_zero_point(0, 0)


# --- recursion identities ---------------------------------------------------------------

def test_recursion_examples(ctx):
    assert recursion_checks(ctx, 3, 1)["aZ1Zb+Z1Z2"] == (1, 1)
    assert recursion_checks(ctx, 1, 2)["aZ1Zb+Z1Z2"] == (-4, -4)
    assert recursion_checks(ctx, 1, 2)["Z2Zb-vs-Z1Z2"] == (-3, -3)


def test_recursion_web(ctx):
    failures = [(k, l) for k in range(9) for l in range(9) if not recursion_verify(ctx, k, l)]
    assert failures == []


def test_inverse_pairing_preidentities(ctx):
    checks = recursion_checks(ctx, 0, 0)
    assert checks["ginv-1-1b"] == (-2, -2)
    assert checks["ginv-12-2b"] == (3, 3)


INS = ("1", "b", "b", "1")


def test_splitting_endpoint(ctx):
    for k, l in [(1, 0), (2, 0), (3, 1), (2, 2)]:
        value = splitting_sum(ctx, k, l, INS, ((0, 1), (2, 3)))
        assert value == 2 * (k - 2 * l) * gw_closed_form(k, l, "Z1Zb")


def test_partition_independence(ctx):
    bad = []
    for k in range(5):
        for l in range(5):
            a = splitting_sum(ctx, k, l, INS, ((0, 1), (2, 3)))
            b = splitting_sum(ctx, k, l, INS, ((0, 3), (1, 2)))
            if a != b:
                bad.append((k, l, a, b))
    assert bad == []


def test_b_pairing_table(ctx):
    ring, cf = ctx.ring, ctx.cf
    z1, zb = cf.ray_index("1"), cf.ray_index("b")
    values = {tuple(e): ring.integral(tuple(e) + (zb, z1)) for e in ring.bases[1]}
    for (e,), v in values.items():
        expected = {z1: -2, cf.ray_index("2"): 1}.get(e, 0)
        assert v == expected, cf.ray_name(e)


def test_sections_meet_zb_once(ctx):
    zb = ctx.cf.ray_index("b")
    for k in range(4):
        for l in range(4):
            gamma = ctx.gamma(True, k, l)
            assert gamma[zb] == 1
            assert sum(gamma) == 1


@given(st.integers(0, 30), st.integers(0, 30))
def test_closed_form_recursion_property(ctx, k, l):
    assert recursion_verify(ctx, k, l)
