import pytest
from hypothesis import given, strategies as st

from maxsing.errors import DegenerateResult, MalformedInput
from maxsing.picard import (
    E,
    H,
    QUARTIC_TAU,
    LatticeInvolution,
    MobileClass,
    PicardClass,
    tau_action,
    untwist_loop,
    untwist_step,
    verify_projection_relations,
)


def test_images_of_generators():
    assert tau_action(H) == PicardClass(3, -4)
    assert tau_action(E) == PicardClass(2, -3)
    assert tau_action(H + (-1) * E) == H + (-1) * E


def test_tau_is_an_involution_of_determinant_minus_one():
    assert QUARTIC_TAU.is_involution()
    assert QUARTIC_TAU.determinant == -1


def test_projection_relations():
    assert verify_projection_relations()
    assert not verify_projection_relations(LatticeInvolution.from_images((3, -4), (2, -2)))


@pytest.mark.parametrize("before, after", [
    ((3, 4), (1, 0)),
    ((7, 9), (3, 1)),
    ((5, 7), (1, -1)),
    ((4, 4), (4, 4)),
])
def test_untwist_step(before, after):
    assert untwist_step(MobileClass(*before)) == MobileClass(*after)


@given(st.integers(1, 10_000))
def test_fixed_line_n_equals_nu(n):
    assert untwist_step(MobileClass(n, n)) == MobileClass(n, n)


@given(st.integers(1, 500), st.integers(-500, 500))
def test_twice_is_identity(n, nu):
    m = MobileClass(n, nu)
    try:
        once = untwist_step(m)
    except DegenerateResult:
        return
    assert untwist_step(once) == m


@pytest.mark.parametrize("start, orbit", [
    ((3, 4), [(3, 4), (1, 0)]),
    ((5, 2), [(5, 2)]),
    ((7, 9), [(7, 9), (3, 1)]),
])
def test_untwist_loop(start, orbit):
    assert untwist_loop(MobileClass(*start)) == [MobileClass(*o) for o in orbit]


def test_degenerate_degree():
    with pytest.raises(DegenerateResult):
        untwist_step(MobileClass(1, 2))


def test_mobile_class_checks():
    with pytest.raises(MalformedInput):
        MobileClass(0, 1)
    with pytest.raises(MalformedInput):
        MobileClass(2, 1.5)
    assert MobileClass(3, 4).is_maximal and not MobileClass(3, 3).is_maximal
