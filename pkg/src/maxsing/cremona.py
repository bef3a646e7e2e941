"""Numerical data of plane Cremona transformations and Noether's untwisting.

A homaloidal type ``(n; nu_1, ..., nu_N)`` records the degree of the
linear system of a Cremona map and the multiplicities of its base points.
Base points are addressed by 1-based position in the (descending) list of
multiplicities, and infinitely near points are described by a proximity
forest of ``(child, parent)`` edges.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Sequence

from .errors import (
    DegenerateResult,
    InfinitelyNearObstruction,
    InvariantViolation,
    MalformedInput,
)


def _check_int(value, name):
    if isinstance(value, bool) or not isinstance(value, int):
        raise MalformedInput(f"{name} must be an integer, got {value!r}")
    return value


@dataclass(frozen=True)
class HomaloidalType:
    degree: int
    mults: tuple = ()
    proximity: tuple = ()

    def __post_init__(self):
        _check_int(self.degree, "degree")
        if self.degree < 1:
            raise MalformedInput(f"degree must be >= 1, got {self.degree}")
        mults = tuple(_check_int(v, "multiplicity") for v in self.mults)
        if any(v <= 0 for v in mults):
            raise MalformedInput(f"multiplicities must be positive: {mults}")
        if any(a < b for a, b in zip(mults, mults[1:])):
            raise MalformedInput(f"multiplicities must be sorted descending: {mults}")
        object.__setattr__(self, "mults", mults)

        edges = tuple(sorted((_check_int(c, "proximity index"), _check_int(p, "proximity index"))
                             for c, p in self.proximity))
        parent = {}
        for child, par in edges:
            for idx in (child, par):
                if not 1 <= idx <= len(mults):
                    raise MalformedInput(f"proximity edge {(child, par)} out of range 1..{len(mults)}")
            if child == par:
                raise MalformedInput(f"proximity edge {(child, par)} is a loop")
            if child in parent:
                raise MalformedInput(f"point {child} has two parents in the proximity forest")
            parent[child] = par
        for start in parent:
            seen = {start}
            node = start
            while node in parent:
                node = parent[node]
                if node in seen:
                    raise MalformedInput("proximity forest contains a cycle")
                seen.add(node)
        object.__setattr__(self, "proximity", edges)

    @classmethod
    def normalized(cls, degree, mults, proximity=()):
        """Build a type from unsorted data: zeros are dropped, the rest sorted.

        Proximity edges follow their points; children of a dropped point
        become proper points.
        """
        order, _ = _normal_order(mults)
        new_pos = {old: new for new, old in enumerate(order, start=1)}
        edges = [(new_pos[c], new_pos[p]) for c, p in proximity
                 if c in new_pos and p in new_pos]
        return cls(degree, tuple(mults[i - 1] for i in order), tuple(edges))

    @property
    def N(self):
        return len(self.mults)

    @property
    def roots(self):
        """Indices of proper base points (roots of the proximity forest)."""
        children = {c for c, _ in self.proximity}
        return frozenset(i for i in range(1, self.N + 1) if i not in children)

    def is_proper(self, index):
        return index in self.roots

    def to_dict(self):
        return {
            "degree": self.degree,
            "mults": list(self.mults),
            "proximity": [list(e) for e in self.proximity],
        }

    @classmethod
    def from_dict(cls, data):
        try:
            return cls(data["degree"], tuple(data.get("mults", ())),
                       tuple(tuple(e) for e in data.get("proximity", ())))
        except (KeyError, TypeError) as exc:
            raise MalformedInput(f"bad homaloidal type record: {exc}") from exc

    def __str__(self):
        return f"({self.degree}; {', '.join(map(str, self.mults))})"


IDENTITY = HomaloidalType(1)


def _normal_order(mults):
    """1-based indices of the nonzero entries, sorted by descending value (stable)."""
    if any(v < 0 for v in mults):
        raise DegenerateResult(f"negative multiplicity in {list(mults)}")
    order = sorted((i for i, v in enumerate(mults, start=1) if v), key=lambda i: -mults[i - 1])
    return order, [mults[i - 1] for i in order]


class NoetherReport(NamedTuple):
    ok: bool
    intersection_residual: int
    genus_residual: int


def verify_noether_equations(t: HomaloidalType) -> NoetherReport:
    """Check n^2 = sum nu^2 + 1 and (n-1)(n-2) = sum nu(nu-1) exactly."""
    if not isinstance(t, HomaloidalType):
        raise MalformedInput(f"expected a HomaloidalType, got {type(t).__name__}")
    n = t.degree
    r1 = n * n - (sum(v * v for v in t.mults) + 1)
    r2 = (n - 1) * (n - 2) - sum(v * (v - 1) for v in t.mults)
    return NoetherReport(r1 == 0 and r2 == 0, r1, r2)


def noether_triple(t: HomaloidalType) -> Optional[tuple]:
    """Indices of the three greatest multiplicities, or None for a linear map.

    Ties resolve to the lowest indices, which for a sorted type is (1, 2, 3).
    """
    if t.degree == 1:
        return None
    if t.N < 3:
        raise InvariantViolation(f"{t} has fewer than three base points")
    if sum(t.mults[:3]) <= t.degree:
        raise InvariantViolation(f"Noether inequality fails for {t}")
    return (1, 2, 3)


@dataclass(frozen=True)
class QuadraticStep:
    """One quadratic transformation applied to ``before`` at ``triple``.

    ``images`` gives, for each point of the triple, the index in ``after`` of
    the base point created by contracting the opposite line; None when that
    point has multiplicity zero and was dropped.
    """

    triple: tuple
    before: HomaloidalType
    after: HomaloidalType
    images: tuple = field(default=(None, None, None))

    def to_dict(self):
        return {
            "triple": list(self.triple),
            "before": self.before.to_dict(),
            "after": self.after.to_dict(),
        }


def _quadratic(t: HomaloidalType, triple, fresh_ok=False) -> QuadraticStep:
    if len(triple) != 3 or len(set(triple)) != 3:
        raise MalformedInput(f"a quadratic step needs three distinct indices, got {triple}")
    width = max(t.N, max(triple)) if fresh_ok else t.N
    for idx in triple:
        _check_int(idx, "triple index")
        if not 1 <= idx <= width:
            raise MalformedInput(f"triple index {idx} out of range 1..{t.N}")
        if idx <= t.N and not t.is_proper(idx):
            raise InfinitelyNearObstruction(
                f"base point {idx} of {t} is infinitely near", obstruction=t)

    n = t.degree
    mults = list(t.mults) + [0] * (width - t.N)
    i, j, k = (mults[x - 1] for x in triple)
    new_degree = 2 * n - i - j - k
    if new_degree < 1:
        raise DegenerateResult(f"quadratic step at {triple} sends {t} to degree {new_degree}")
    mults[triple[0] - 1] = n - j - k
    mults[triple[1] - 1] = n - i - k
    mults[triple[2] - 1] = n - i - j

    order, sorted_mults = _normal_order(mults)
    new_pos = {old: new for new, old in enumerate(order, start=1)}
    # points infinitely near a centre land on the opposite line: they become proper
    edges = [(new_pos[c], new_pos[p]) for c, p in t.proximity
             if p not in triple and c in new_pos and p in new_pos]
    after = HomaloidalType(new_degree, tuple(sorted_mults), tuple(edges))
    images = tuple(new_pos.get(x) for x in triple)
    return QuadraticStep(tuple(triple), t, after, images)


def quadratic_step(t: HomaloidalType, triple: Sequence[int]) -> QuadraticStep:
    return _quadratic(t, tuple(triple))


def apply_quadratic(t: HomaloidalType, triple: Sequence[int]) -> HomaloidalType:
    """Numerical effect of a quadratic transformation centred at three proper points.

    n' = 2n - nu_i - nu_j - nu_k and each centre gets n - (sum of the other two).
    """
    return _quadratic(t, tuple(triple)).after


def undo_step(step: QuadraticStep) -> HomaloidalType:
    """Apply the quadratic transformation at the images of a step's centres.

    Dropped images are re-created as fresh proper points of multiplicity zero,
    so the result is numerically equal to ``step.before``.
    """
    after = step.after
    fresh = iter(range(after.N + 1, after.N + 4))
    triple = tuple(x if x is not None else next(fresh) for x in step.images)
    return _quadratic(after, triple, fresh_ok=True).after


def factorize(t: HomaloidalType) -> list:
    """Untwist the maximal triples until the degree drops to 1."""
    report = verify_noether_equations(t)
    if not report.ok:
        raise InvariantViolation(
            f"{t} is not homaloidal (residuals {report.intersection_residual}, "
            f"{report.genus_residual})")
    steps = []
    current = t
    while current.degree > 1:
        triple = noether_triple(current)
        if not all(current.is_proper(x) for x in triple):
            raise InfinitelyNearObstruction(
                f"Noether triple {triple} of {current} contains an infinitely near point",
                steps=steps, obstruction=current)
        step = quadratic_step(current, triple)
        if step.after.degree >= current.degree:
            raise InvariantViolation(f"degree did not drop at {current}")
        steps.append(step)
        current = step.after
    return steps


def reconstruct(steps: Sequence[QuadraticStep]) -> HomaloidalType:
    """Rebuild the factorized type by undoing the steps from the last one back."""
    if not steps:
        return IDENTITY
    current = steps[-1].after
    for step in reversed(steps):
        if (current.degree, current.mults) != (step.after.degree, step.after.mults):
            raise InvariantViolation("steps do not chain")
        current = undo_step(step)
    return current


def random_homaloidal(seed, k: int) -> HomaloidalType:
    """Compose ``k`` random quadratic steps at proper points starting from (1; )."""
    if k < 0:
        raise MalformedInput(f"k must be >= 0, got {k}")
    rng = random.Random(seed)
    t = IDENTITY
    for _ in range(k):
        candidates = list(range(1, t.N + 4))
        for _attempt in range(20):
            triple = tuple(rng.sample(candidates, 3))
            try:
                t = _quadratic(t, triple, fresh_ok=True).after
                break
            except DegenerateResult:
                continue
        else:
            t = _quadratic(t, (t.N + 1, t.N + 2, t.N + 3), fresh_ok=True).after
    return t
