import pytest
from hypothesis import given, settings, strategies as st

from maxsing.cremona import (
    IDENTITY,
    HomaloidalType,
    apply_quadratic,
    factorize,
    noether_triple,
    quadratic_step,
    random_homaloidal,
    reconstruct,
    undo_step,
    verify_noether_equations,
)
from maxsing.errors import (
    DegenerateResult,
    InfinitelyNearObstruction,
    InvariantViolation,
    MalformedInput,
)

CUBIC = HomaloidalType(2, (1, 1, 1))
QUINTIC = HomaloidalType(5, (2,) * 6)


@pytest.mark.parametrize("t, expected", [
    (CUBIC, (True, 0, 0)),
    (IDENTITY, (True, 0, 0)),
    (QUINTIC, (True, 0, 0)),
    (HomaloidalType(3, (1, 1, 1)), (False, 5, 2)),
    (HomaloidalType(3, (2, 1, 1, 1, 1)), (True, 0, 0)),
])
def test_noether_equations(t, expected):
    assert tuple(verify_noether_equations(t)) == expected


@pytest.mark.parametrize("degree, mults", [(2, (1, 2, 1)), (2, (1, 0, 1)), (0, ()), (2, (1, -1))])
def test_malformed_types_are_rejected(degree, mults):
    with pytest.raises(MalformedInput):
        HomaloidalType(degree, mults)


def test_proximity_forest_checks():
    HomaloidalType(2, (1, 1, 1), ((2, 1), (3, 2)))
    with pytest.raises(MalformedInput):
        HomaloidalType(2, (1, 1, 1), ((2, 1), (1, 2)))
    with pytest.raises(MalformedInput):
        HomaloidalType(2, (1, 1, 1), ((4, 1),))
    with pytest.raises(MalformedInput):
        HomaloidalType(2, (1, 1, 1), ((3, 1), (3, 2)))


def test_normalized_sorts_and_drops_zeros():
    t = HomaloidalType.normalized(4, [1, 0, 2, 2, 1, 1], [(5, 2), (6, 3)])
    assert t.mults == (2, 2, 1, 1, 1)
    # point 5 hung off the dropped point 2 and is now proper; point 6 follows point 3
    assert t.proximity == ((5, 1),)


def test_noether_triple():
    assert noether_triple(CUBIC) == (1, 2, 3)
    assert noether_triple(IDENTITY) is None
    triple = noether_triple(QUINTIC)
    assert [QUINTIC.mults[i - 1] for i in triple] == [2, 2, 2]
    with pytest.raises(InvariantViolation):
        noether_triple(HomaloidalType(3, (1, 1, 1)))


def test_apply_quadratic_examples():
    assert apply_quadratic(CUBIC, (1, 2, 3)) == IDENTITY
    after = apply_quadratic(QUINTIC, (1, 2, 3))
    assert after == HomaloidalType(4, (2, 2, 2, 1, 1, 1))
    assert 4 * 4 == sum(v * v for v in after.mults) + 1


def test_quadratic_twice_at_the_same_points_is_identity():
    step = quadratic_step(QUINTIC, (1, 2, 3))
    assert step.images == (4, 5, 6)
    assert apply_quadratic(step.after, step.images) == QUINTIC
    assert undo_step(step) == QUINTIC
    # centres whose new multiplicity is zero are re-created on the way back
    assert undo_step(quadratic_step(CUBIC, (1, 2, 3))) == CUBIC


def test_quadratic_errors():
    near = HomaloidalType(2, (1, 1, 1), ((3, 1),))
    with pytest.raises(InfinitelyNearObstruction):
        apply_quadratic(near, (1, 2, 3))
    with pytest.raises(DegenerateResult):
        apply_quadratic(HomaloidalType(1, (1, 1, 1)), (1, 2, 3))
    with pytest.raises(MalformedInput):
        apply_quadratic(CUBIC, (1, 1, 2))


def test_centres_release_their_infinitely_near_points():
    t = HomaloidalType(5, (2, 2, 2, 2, 2, 2), ((4, 1), (5, 4)))
    after = quadratic_step(t, (1, 2, 3)).after
    # point 4 (now position 1) is proper; point 5 still hangs off it
    assert after.mults == (2, 2, 2, 1, 1, 1)
    assert after.proximity == ((2, 1),)


def test_factorize_examples():
    assert factorize(IDENTITY) == []
    steps = factorize(CUBIC)
    assert len(steps) == 1 and steps[0].after == IDENTITY
    steps = factorize(QUINTIC)
    degrees = [QUINTIC.degree] + [s.after.degree for s in steps]
    assert degrees == [5, 4, 2, 1]
    assert steps[0].after == HomaloidalType(4, (2, 2, 2, 1, 1, 1))
    for s in steps:
        assert verify_noether_equations(s.after).ok
    assert reconstruct(steps) == QUINTIC


def test_factorize_reports_partial_work_at_obstruction():
    t = HomaloidalType(5, (2,) * 6, ((2, 1),))
    with pytest.raises(InfinitelyNearObstruction) as info:
        factorize(t)
    assert info.value.steps == []
    assert info.value.obstruction == t

    # the obstruction can also appear after a few steps
    t = HomaloidalType(5, (2,) * 6, ((5, 4),))
    with pytest.raises(InfinitelyNearObstruction) as info:
        factorize(t)
    assert len(info.value.steps) == 1
    assert info.value.obstruction.degree == 4


def test_factorize_rejects_non_homaloidal():
    with pytest.raises(InvariantViolation):
        factorize(HomaloidalType(3, (1, 1, 1)))


def test_random_homaloidal_small_cases():
    assert random_homaloidal(123, 0) == IDENTITY
    assert random_homaloidal(123, 1) == CUBIC
    t = random_homaloidal(7, 3)
    assert verify_noether_equations(t).ok
    assert random_homaloidal(7, 3) == t


def test_json_round_trip():
    t = HomaloidalType(5, (2,) * 6, ((2, 1),))
    assert HomaloidalType.from_dict(t.to_dict()) == t
    with pytest.raises(MalformedInput):
        HomaloidalType.from_dict({"mults": [1]})


@settings(max_examples=200, deadline=None)
@given(seed=st.integers(0, 10**9), k=st.integers(0, 12))
def test_generated_types_validate_and_factor(seed, k):
    t = random_homaloidal(seed, k)
    assert verify_noether_equations(t).ok
    if t.degree >= 2:
        assert sum(t.mults[:3]) > t.degree
    steps = factorize(t)
    degrees = [t.degree] + [s.after.degree for s in steps]
    assert all(a > b for a, b in zip(degrees, degrees[1:]))
    assert len(steps) <= t.degree - 1
    assert reconstruct(steps) == t


@settings(max_examples=200, deadline=None)
@given(seed=st.integers(0, 10**9), k=st.integers(1, 10), data=st.data())
def test_quadratic_preserves_equations_and_is_an_involution(seed, k, data):
    t = random_homaloidal(seed, k)
    if t.N < 3:
        return
    triple = tuple(data.draw(st.permutations(range(1, t.N + 1)))[:3])
    try:
        step = quadratic_step(t, triple)
    except DegenerateResult:
        return
    assert verify_noether_equations(step.after).ok
    assert undo_step(step) == t
