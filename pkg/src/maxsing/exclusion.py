"""Intersection arithmetic that rules out maximal cycles.

Covers a smooth double space V -> P^m of index 1 (points and the three
kinds of curves) and the negativity computation on the test surface of a
conic bundle.  Each verdict lists the geometric inputs it took for granted.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .bound import Verdict, VerdictRecord
from .errors import MalformedInput, PreconditionFailed


def _require(cond, msg):
    if not cond:
        raise MalformedInput(msg)


def exclude_point_double_space(n: int, nu: int) -> VerdictRecord:
    """A maximal point would need nu > 2n, but two members of the restricted
    system on a plane preimage meet in 2n^2 < nu^2 points counted at x."""
    _require(n >= 1 and nu >= 0, f"need n >= 1, nu >= 0; got {(n, nu)}")
    pairing = 2 * n * n
    local = nu * nu
    verdict = Verdict.CONTRADICTION if nu > 2 * n else Verdict.CONSISTENT
    return VerdictRecord(
        verdict,
        {"n": n, "nu": nu, "surface_pairing": pairing, "local_intersection": local,
         "maximal": nu > 2 * n},
        ("plane through the image point is generic, its preimage is a smooth surface",
         "restricted system has no fixed curves"))


def exclude_curve_case1(n: int, nu: int) -> VerdictRecord:
    """Curve over a curve off the branch locus: restrict to the preimage of a line."""
    _require(n >= 1 and nu >= 0, f"need n >= 1, nu >= 0; got {(n, nu)}")
    degree, points = 2 * n, 2
    verdict = Verdict.CONTRADICTION if points * nu > degree else Verdict.CONSISTENT
    return VerdictRecord(
        verdict,
        {"n": n, "nu": nu, "series_degree": degree, "base_points": points,
         "forced_degree": points * nu},
        ("generic line meeting the image curve has a smooth preimage",))


def exclude_curve_case2(n: int, nu: int, deg_r: int) -> VerdictRecord:
    """Curve inside the branch locus: restrict to the residual curve of a cone."""
    _require(n >= 1 and nu >= 0 and deg_r >= 1, f"need n >= 1, nu >= 0, degR >= 1; got {(n, nu, deg_r)}")
    degree, points = n * deg_r, deg_r
    verdict = Verdict.CONTRADICTION if points * nu > degree else Verdict.CONSISTENT
    return VerdictRecord(
        verdict,
        {"n": n, "nu": nu, "deg_r": deg_r, "series_degree": degree, "base_points": points,
         "forced_degree": points * nu},
        ("residual curve of a generic cone meets the curve in deg R distinct points",))


def case3_inequalities(n, m, nu, nu_star):
    """The two pairings (n h - nu c - nu* c*).c and .c*, divided by d.

    Plain arithmetic, so it also evaluates elementwise on integer arrays.
    """
    return ((n - nu_star) + (m - 1) * (nu - nu_star),
            (n - nu) + (m - 1) * (nu_star - nu))


def exclude_curve_case3(n, m, nu, nu_star) -> VerdictRecord:
    """Birational double cover of a curve: feasibility of the two inequalities on S."""
    _require(m >= 3, f"ambient dimension m must be >= 3, got {m}")
    first, second = case3_inequalities(*map(Fraction, (n, m, nu, nu_star)))
    feasible = first >= 0 and second >= 0
    return VerdictRecord(
        Verdict.FEASIBLE if feasible else Verdict.INFEASIBLE,
        {"n": Fraction(n), "m": m, "nu": Fraction(nu), "nu_star": Fraction(nu_star),
         "pairing_c": first, "pairing_c_star": second},
        ("base locus meets the preimage of a generic cone in at most the curve and its conjugate",
         "preimage of the branch divisor on the ruled surface is smooth"))


@dataclass(frozen=True)
class RuledSurfaceClasses:
    """Num of the P^1-bundle over the normalized curve: fibre f, vertex section e."""

    d: int

    def __post_init__(self):
        _require(self.d >= 1, f"degree must be >= 1, got {self.d}")

    def pair(self, x, y):
        """Pairing of classes given as coefficient pairs (f, e)."""
        table = {("f", "f"): 0, ("f", "e"): 1, ("e", "f"): 1, ("e", "e"): -self.d}
        return sum(x[i] * y[j] * table[(bi, bj)]
                   for i, bi in enumerate("fe") for j, bj in enumerate("fe"))

    @property
    def h(self):
        return (self.d, 1)  # h = e + d f


BASIS = ("h", "c", "c*")


@dataclass(frozen=True)
class DoubleCoverTable:
    """Symmetric pairing on {h, c, c*} on the double cover S of the ruled surface."""

    m: int
    d: int
    entries: tuple

    def pair(self, x, y):
        return dict(self.entries)[(x, y)]

    def pair_classes(self, u, v):
        """Pairing of linear combinations given as dicts basis -> coefficient."""
        return sum(a * b * self.pair(x, y) for x, a in u.items() for y, b in v.items())

    def to_dict(self):
        return {"m": self.m, "d": self.d,
                "pairing": {f"{x}.{y}": self.pair(x, y) for x in BASIS for y in BASIS}}


def build_double_cover_table(d: int, m: int) -> DoubleCoverTable:
    _require(d >= 1 and m >= 3, f"need d >= 1, m >= 3; got {(d, m)}")
    # c . c* is half of (h . branch) downstairs, the branch curve having class 2m h
    cc_star = m * d
    # h here is the pullback, so h^2 doubles; c maps isomorphically onto a curve of class h
    hh = 2 * d
    hc = d
    # c + c* is the pullback of h, hence c^2 = (c + c*).c - c.c* = d - md
    cc = d * (1 - m)
    values = {("h", "h"): hh, ("h", "c"): hc, ("h", "c*"): hc,
              ("c", "c"): cc, ("c*", "c*"): cc, ("c", "c*"): cc_star}
    entries = {}
    for (x, y), v in values.items():
        entries[(x, y)] = entries[(y, x)] = v
    table = DoubleCoverTable(m, d, tuple(sorted(entries.items())))
    for x in BASIS:
        if table.pair("c", x) + table.pair("c*", x) != table.pair("h", x):
            raise AssertionError(f"row-sum identity fails on {x}")
    return table


@dataclass(frozen=True)
class ConicBundleDatum:
    """Numbers on the test surface.

    ``exceptional`` is a tuple of chains, one per divisor T_i, each a tuple
    of (nu_ij, E_ij . L) pairs ordered up the chain of blow-ups.
    """

    mu: int
    A_dot_L: int
    disc_pairing: int
    exceptional: tuple

    def __post_init__(self):
        chains = []
        for chain in self.exceptional:
            chain = tuple((int(nu), int(el)) for nu, el in chain)
            _require(len(chain) >= 1, "empty exceptional chain")
            chains.append(chain)
        object.__setattr__(self, "exceptional", tuple(chains))
        _require(self.mu >= 0, f"mu must be >= 0, got {self.mu}")
        _require(self.disc_pairing >= 0, "(4K + C*).L must be nonnegative")
        for chain in chains:
            for nu, el in chain:
                _require(nu >= 1 and el >= 1, f"exceptional entry {(nu, el)} must be positive")

    def pairs(self):
        return [p for chain in self.exceptional for p in chain]

    @classmethod
    def from_dict(cls, data):
        exc = data.get("exceptional", [])
        # a flat list of pairs means one-element chains
        if exc and not isinstance(exc[0][0], (list, tuple)):
            exc = [[p] for p in exc]
        try:
            return cls(data["mu"], data["A_dot_L"], data["disc_pairing"],
                       tuple(tuple(tuple(p) for p in ch) for ch in exc))
        except KeyError as exc_:
            raise MalformedInput(f"missing field {exc_}") from exc_


def surface_self_intersection(datum: ConicBundleDatum) -> int:
    """(D^2 . Lambda*) = 4 mu (A.L) - mu^2 ((4K+C*).L) - sum nu^2 (E.L)."""
    mu = datum.mu
    return (4 * mu * datum.A_dot_L - mu * mu * datum.disc_pairing
            - sum(nu * nu * el for nu, el in datum.pairs()))


def conic_bundle_check(datum: ConicBundleDatum) -> VerdictRecord:
    mu = datum.mu
    if mu == 0:
        return VerdictRecord(Verdict.NO_VERDICT, {"mu": 0},
                             ("mu = 0: the map already respects the fibrations",))
    for chain in datum.exceptional:
        if chain[-1][0] < mu + 1:
            raise PreconditionFailed(f"top multiplicity {chain[-1][0]} of a chain is below mu + 1 = {mu + 1}")
    slack = sum((nu - mu) * el for nu, el in datum.pairs())
    if not datum.A_dot_L < slack:
        raise PreconditionFailed(
            f"A.L = {datum.A_dot_L} is not below sum (nu - mu)(E.L) = {slack}")
    value = surface_self_intersection(datum)
    verdict = Verdict.CONTRADICTION if value < 0 else Verdict.CONSISTENT
    return VerdictRecord(
        verdict,
        {"mu": mu, "value": value, "slack": slack, "A_dot_L": datum.A_dot_L,
         "disc_pairing": datum.disc_pairing},
        ("family of curves on the base is free, so D^2 . Lambda* >= 0",
         "a generic curve of the family meets every T_i transversally"))
