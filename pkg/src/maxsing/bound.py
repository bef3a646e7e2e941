"""Counting multiplicities along a resolution and the 4n^2 inequality.

A :class:`MultiplicitySystem` holds the numbers attached to the
self-intersection of a mobile system through the lower part of a
resolution: ``m[(i, j)]`` is the multiplicity along B_{j-1} of the cycle
born on E_i (``i = 0`` is the original intersection), and ``d[i-1]`` the
degree of the cycle born on E_i.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import NamedTuple

from .errors import DegenerateGraph, MalformedInput, NotCompatible, PreconditionFailed, InvariantViolation
from .valuation import (
    GradedSystemData,
    canonical_compatible,
    compatible_check,
    discrepancy,
    is_maximal_singularity,
)


class Verdict(str, Enum):
    CONTRADICTION = "CONTRADICTION"
    CONSISTENT = "CONSISTENT"
    NO_VERDICT = "NO_VERDICT"
    FEASIBLE = "FEASIBLE"
    INFEASIBLE = "INFEASIBLE"


# The step from sum a(i) m_{0,i} to m * sum a(i) uses m_{0,i} <= m_{0,1};
# it is taken on trust and reported with every verdict that relies on it.
MONOTONE_M_ASSUMPTION = "m_{0,i} <= m_{0,1} for every lower vertex i"


@dataclass(frozen=True)
class MultiplicitySystem:
    data: GradedSystemData
    m: dict = field(default_factory=dict)
    d: tuple = ()

    def __post_init__(self):
        L = self.data.graph.L
        m = {}
        for (i, j), v in dict(self.m).items():
            i, j = int(i), int(j)
            if not 0 <= i < j <= L:
                raise MalformedInput(f"m_{{{i},{j}}} outside 0 <= i < j <= {L}")
            m[(i, j)] = v
        object.__setattr__(self, "m", m)
        d = tuple(self.d)
        if len(d) != L:
            raise MalformedInput(f"{len(d)} degrees for a lower part of {L} vertices")
        object.__setattr__(self, "d", d)

    def mult(self, i, j):
        return self.m.get((i, j), 0)


class SystemReport(NamedTuple):
    ok: bool
    violation: str


def check_system(sys: MultiplicitySystem) -> SystemReport:
    data = sys.data
    graph = data.graph
    graph.require_valid()
    L, K = graph.L, graph.K
    nu = data.nus
    for (i, j), v in sorted(sys.m.items()):
        if v < 0:
            return SystemReport(False, f"m_{{{i},{j}}} = {v} is negative")
    for i, v in enumerate(sys.d, start=1):
        if v < 0:
            return SystemReport(False, f"d_{i} = {v} is negative")
    for j in range(1, L + 1):
        lhs = nu[j - 1] ** 2 + sys.d[j - 1]
        rhs = sum(sys.mult(i, j) for i in range(j))
        if lhs != rhs:
            return SystemReport(False, f"equality {j}: nu_{j}^2 + d_{j} = {lhs} but sum m_{{i,{j}}} = {rhs}")
    for (i, j), v in sorted(sys.m.items()):
        if i >= 1 and v > 0 and (j, i) not in graph.arrows:
            return SystemReport(False, f"m_{{{i},{j}}} = {v} > 0 without arrow {j}->{i}")
        if i >= 1 and v > sys.d[i - 1]:
            return SystemReport(False, f"m_{{{i},{j}}} = {v} exceeds d_{i} = {sys.d[i - 1]}")
    if L >= 1:
        tail = sum(nu[i - 1] ** 2 * graph.upper_degree(i) for i in range(L + 1, K + 1))
        if sys.d[L - 1] < tail:
            return SystemReport(False, f"tail bound: d_{L} = {sys.d[L - 1]} < {tail}")
    return SystemReport(True, "")


def weighted_base_multiplicity(sys: MultiplicitySystem, a) -> Fraction:
    """sum_i a(i) m_{0,i}: the left-hand side of the compatible-function inequality."""
    return sum((Fraction(a[i - 1]) * sys.mult(0, i) for i in range(1, len(a) + 1)), Fraction(0))


def theorem_lower_bound(data: GradedSystemData, a) -> Fraction:
    """sum_{i<=L} a(i) nu_i^2 + a(L) sum_{i>L} nu_i^2 for a compatible ``a``."""
    graph = data.graph
    if not compatible_check(graph, a):
        raise NotCompatible(f"{list(a)} is not compatible with the graph")
    L, K = graph.L, graph.K
    a = [Fraction(v) for v in a]
    nu = data.nus
    value = sum((a[i - 1] * nu[i - 1] ** 2 for i in range(1, L + 1)), Fraction(0))
    if L >= 1:
        value += a[L - 1] * sum(nu[i - 1] ** 2 for i in range(L + 1, K + 1))
    return value


def mean_square_bound(n, sigma0, sigma1, disc) -> Fraction:
    """Lower bound for m from maximality and the quadratic-mean inequality.

    With weights r_i summing to sigma0 on the lower part and sigma1 above it,
    sum r_i nu_i > n * disc forces sum r_i nu_i^2 > n^2 disc^2 / (sigma0 + sigma1),
    and m * sigma0 >= sum r_i nu_i^2.
    """
    if sigma0 <= 0:
        raise DegenerateGraph("the lower part carries no weight (sigma0 = 0)")
    return Fraction(n * n * disc * disc, sigma0 * (sigma0 + sigma1))


class BoundRecord(NamedTuple):
    bound: Fraction
    sigma0: int
    sigma1: int
    discrepancy: int


def _bound_record(data: GradedSystemData) -> BoundRecord:
    graph = data.graph
    graph.require_valid()
    L, K = graph.L, graph.K
    if L < 1:
        raise DegenerateGraph("no blow-up of codimension >= 3: sigma0 = 0")
    P = graph.path_matrix
    sigma0 = sum(P[K][i] for i in range(1, L + 1))
    sigma1 = sum(P[K][i] for i in range(L + 1, K + 1))
    disc = discrepancy(graph, K)
    n = data.threshold
    bound = mean_square_bound(n, sigma0, sigma1, disc)
    # (2 s0 + s1)^2 - 4 s0 (s0 + s1) = s1^2, and a larger discrepancy only helps
    four_n2 = 4 * n * n
    if bound < four_n2 or (sigma1 > 0 and bound == four_n2):
        raise InvariantViolation(f"bound {bound} fails to exceed 4n^2 = {four_n2}")
    return BoundRecord(bound, sigma0, sigma1, disc)


def required_m_lower_bound(data: GradedSystemData) -> Fraction:
    """Strict lower bound for m = m_{0,1} at a maximal singularity.

    Equals n^2 (2 S0 + S1)^2 / (S0 (S0 + S1)) when the lower centres have
    codimension 3, where S0, S1 sum p(K, i) over the lower and upper parts.
    The bound is >= 4n^2, with equality only when the upper part is empty;
    maximality is strict, so m > 4n^2 in every case.
    """
    return _bound_record(data).bound


@dataclass(frozen=True)
class VerdictRecord:
    verdict: Verdict
    values: dict = field(default_factory=dict)
    assumptions: tuple = ()

    def to_dict(self):
        from .serialize import to_jsonable
        out = {"verdict": self.verdict.value, "assumptions": list(self.assumptions)}
        out.update(to_jsonable(self.values))
        return out


def quartic_exclusion_verdict(data: GradedSystemData) -> VerdictRecord:
    """Play the 4n^2 bound against the cap m <= 4n^2 on a smooth quartic threefold."""
    graph = data.graph
    graph.require_valid()
    if any(c not in (2, 3) for c in graph.codims):
        raise PreconditionFailed("a threefold resolution has centres of codimension 2 or 3 only")
    n = data.threshold
    cap = Fraction(4 * n * n)
    if not is_maximal_singularity(data):
        return VerdictRecord(Verdict.NO_VERDICT, {"cap": cap, "maximal": False},
                             ("input is not a maximal singularity",))
    rec = _bound_record(data)
    verdict = Verdict.CONTRADICTION if rec.bound >= cap else Verdict.CONSISTENT
    return VerdictRecord(
        verdict,
        {"bound": rec.bound, "cap": cap, "sigma0": rec.sigma0, "sigma1": rec.sigma1,
         "discrepancy": rec.discrepancy, "maximal": True, "strict": True},
        (MONOTONE_M_ASSUMPTION,
         "centre of the valuation is a smooth point of a quartic threefold",
         "m is the multiplicity at the point of the intersection of two generic members"),
    )


def canonical_bounds(data: GradedSystemData):
    """theorem_lower_bound for the two canonical compatible functions."""
    return tuple(theorem_lower_bound(data, a) for a in canonical_compatible(data.graph))
