import random

import pytest
import sympy
from hypothesis import given, strategies as st

from maxsing.bound import Verdict
from maxsing.errors import MalformedInput, PreconditionFailed
from maxsing.exclusion import (
    BASIS,
    ConicBundleDatum,
    RuledSurfaceClasses,
    build_double_cover_table,
    case3_inequalities,
    conic_bundle_check,
    exclude_curve_case1,
    exclude_curve_case2,
    exclude_curve_case3,
    exclude_point_double_space,
    surface_self_intersection,
)
from maxsing.oracles import random_conic_datum


def test_point_case():
    assert exclude_point_double_space(1, 3).verdict is Verdict.CONTRADICTION
    assert exclude_point_double_space(1, 2).verdict is Verdict.CONSISTENT
    rec = exclude_point_double_space(2, 5)
    assert rec.values["local_intersection"] == 25 > rec.values["surface_pairing"] == 8


@pytest.mark.parametrize("n, nu, verdict", [
    (2, 3, Verdict.CONTRADICTION),
    (5, 5, Verdict.CONSISTENT),
    (5, 6, Verdict.CONTRADICTION),
])
def test_curve_case1(n, nu, verdict):
    assert exclude_curve_case1(n, nu).verdict is verdict


def test_curve_case2():
    assert exclude_curve_case2(3, 4, 7).verdict is Verdict.CONTRADICTION
    assert exclude_curve_case2(3, 3, 1).verdict is Verdict.CONSISTENT


@given(st.integers(1, 60), st.integers(0, 120), st.integers(1, 40))
def test_curve_case2_does_not_depend_on_deg_r(n, nu, deg_r):
    assert exclude_curve_case2(n, nu, deg_r).verdict == exclude_curve_case2(n, nu, 1).verdict


def test_curve_case3():
    assert exclude_curve_case3(2, 3, 3, 1).verdict is Verdict.INFEASIBLE
    assert exclude_curve_case3(2, 3, 3, 3).verdict is Verdict.INFEASIBLE
    assert exclude_curve_case3(4, 5, 4, 4).verdict is Verdict.FEASIBLE
    with pytest.raises(MalformedInput):
        exclude_curve_case3(2, 2, 1, 1)


@given(st.integers(3, 50), st.integers(1, 50), st.integers(0, 200), st.integers(0, 200))
def test_case3_feasible_means_not_maximal(m, n, nu, nu_star):
    if exclude_curve_case3(n, m, nu, nu_star).verdict is Verdict.FEASIBLE:
        assert max(nu, nu_star) <= n


def test_case3_sum_of_pairings():
    # adding the two pairings gives 2n - nu - nu*, independent of m
    a, b = case3_inequalities(7, 11, 5, 3)
    assert a + b == 2 * 7 - 5 - 3


@pytest.mark.parametrize("d, m, expected", [
    (1, 3, {"c.c*": 3, "h.h": 2, "c.c": -2, "h.c": 1}),
    (2, 4, {"c.c*": 8, "h.h": 4, "c.c": -6, "c*.c*": -6}),
])
def test_double_cover_table(d, m, expected):
    pairing = build_double_cover_table(d, m).to_dict()["pairing"]
    for key, value in expected.items():
        assert pairing[key] == value


@given(st.integers(1, 40), st.integers(3, 40))
def test_double_cover_rows_and_symmetry(d, m):
    t = build_double_cover_table(d, m)
    for x in BASIS:
        assert t.pair("c", x) + t.pair("c*", x) == t.pair("h", x)
        for y in BASIS:
            assert t.pair(x, y) == t.pair(y, x)
    # the mobile class n h - nu c - nu* c* pairs with c to d times the first inequality
    n, nu, nus = 5, 3, 2
    D = {"h": n, "c": -nu, "c*": -nus}
    first, second = case3_inequalities(n, m, nu, nus)
    assert t.pair_classes(D, {"c": 1}) == d * first
    assert t.pair_classes(D, {"c*": 1}) == d * second


@given(st.integers(1, 50))
def test_ruled_surface(d):
    s = RuledSurfaceClasses(d)
    assert s.pair(s.h, s.h) == d
    assert s.pair((1, 0), (1, 0)) == 0
    assert s.pair((0, 1), (0, 1)) == -d
    assert s.pair(s.h, (0, 1)) == 0


def test_conic_bundle_example():
    datum = ConicBundleDatum(1, 0, 0, (((2, 1),),))
    rec = conic_bundle_check(datum)
    assert rec.values["value"] == -4 == surface_self_intersection(datum)
    assert rec.verdict is Verdict.CONTRADICTION


def test_conic_bundle_preconditions():
    assert conic_bundle_check(ConicBundleDatum(0, 0, 0, (((2, 1),),))).verdict is Verdict.NO_VERDICT
    with pytest.raises(PreconditionFailed):
        conic_bundle_check(ConicBundleDatum(2, 0, 0, (((2, 1),),)))
    with pytest.raises(PreconditionFailed):
        conic_bundle_check(ConicBundleDatum(1, 1, 0, (((2, 1),),)))
    with pytest.raises(MalformedInput):
        ConicBundleDatum(-1, 0, 0, ())


def test_conic_bundle_flat_list_is_singleton_chains():
    d = ConicBundleDatum.from_dict({"mu": 1, "A_dot_L": 0, "disc_pairing": 0, "exceptional": [[2, 1], [3, 1]]})
    assert d.exceptional == (((2, 1),), ((3, 1),))


def test_random_conic_data_are_negative():
    rng = random.Random(7)
    for _ in range(500):
        datum = random_conic_datum(rng)
        if datum.mu:
            assert conic_bundle_check(datum).verdict is Verdict.CONTRADICTION


def test_mean_square_identity_symbolically():
    nu, mu = sympy.symbols("nu mu")
    assert sympy.expand(nu**2 - 4 * mu * (nu - mu) - (nu - 2 * mu) ** 2) == 0


def test_residual_degree_is_nonnegative_only_below_threshold():
    # a curve of degree D through k points of multiplicity nu has D - k nu >= 0 left over
    for n in range(1, 30):
        for nu in range(0, 3 * n):
            ok = exclude_curve_case1(n, nu).values
            assert (ok["series_degree"] - ok["forced_degree"] >= 0) == (nu <= n)
