"""Resolution graphs of discrete valuations.

Vertex ``i`` (1-based) stands for the exceptional divisor E_i of the i-th
blow-up, whose centre B_{i-1} has codimension ``codims[i-1]``.  An arrow
``(i, j)`` with i > j records that B_{i-1} lies on the strict transform of
E_j.  The arrows ``(i, i-1)`` are always present.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import NamedTuple

import numpy as np

from .errors import IndexOutOfRange, LengthMismatch, MalformedInput


class GraphReport(NamedTuple):
    ok: bool
    diagnostic: str


@dataclass(frozen=True)
class ResolutionGraph:
    codims: tuple
    arrows: frozenset = frozenset()
    upper_degrees: tuple = ()

    def __post_init__(self):
        try:
            codims = tuple(int(c) for c in self.codims)
            arrows = frozenset((int(i), int(j)) for i, j in self.arrows)
            degrees = dict(self.upper_degrees)
            degrees = tuple(sorted((int(k), int(v)) for k, v in degrees.items()))
        except (TypeError, ValueError) as exc:
            raise MalformedInput(f"bad resolution graph: {exc}") from exc
        object.__setattr__(self, "codims", codims)
        object.__setattr__(self, "arrows", arrows)
        object.__setattr__(self, "upper_degrees", degrees)

    @classmethod
    def chain(cls, codims, extra_arrows=(), upper_degrees=()):
        K = len(codims)
        arrows = {(i, i - 1) for i in range(2, K + 1)} | set(map(tuple, extra_arrows))
        return cls(tuple(codims), frozenset(arrows), upper_degrees)

    @property
    def K(self):
        return len(self.codims)

    @property
    def L(self):
        """Number of leading blow-ups with centres of codimension >= 3."""
        L = 0
        for c in self.codims:
            if c < 3:
                break
            L += 1
        return L

    def upper_degree(self, i):
        return dict(self.upper_degrees).get(i, 1)

    @cached_property
    def _incoming(self):
        into = {i: [] for i in range(1, self.K + 1)}
        for i, j in sorted(self.arrows):
            into[j].append(i)
        return into

    @cached_property
    def _outgoing(self):
        out = {i: [] for i in range(1, self.K + 1)}
        for i, j in sorted(self.arrows):
            out[i].append(j)
        return out

    @cached_property
    def path_matrix(self):
        """``P[i][j] = p(i, j)`` for 1 <= j <= i <= K (row/column 0 unused)."""
        self.require_valid()
        K = self.K
        P = [[0] * (K + 1) for _ in range(K + 1)]
        for i in range(1, K + 1):
            P[i][i] = 1
            row = P[i]
            for k in self._outgoing[i]:
                src = P[k]
                for j in range(1, k + 1):
                    row[j] += src[j]
        return P

    def require_valid(self):
        report = validate(self)
        if not report.ok:
            raise MalformedInput(f"invalid resolution graph: {report.diagnostic}")

    def to_dict(self):
        return {
            "codims": list(self.codims),
            "arrows": sorted([list(a) for a in self.arrows], reverse=True),
            "upper_degrees": {str(k): v for k, v in self.upper_degrees},
        }

    @classmethod
    def from_dict(cls, data):
        try:
            return cls(tuple(data["codims"]),
                       frozenset(tuple(a) for a in data.get("arrows", ())),
                       {int(k): v for k, v in data.get("upper_degrees", {}).items()})
        except (KeyError, TypeError, AttributeError) as exc:
            raise MalformedInput(f"bad resolution graph record: {exc}") from exc


def validate(graph: ResolutionGraph) -> GraphReport:
    K = graph.K
    if K < 1:
        return GraphReport(False, "graph has no vertices")
    for i, c in enumerate(graph.codims, start=1):
        if c < 2:
            return GraphReport(False, f"centre of blow-up {i} has codimension {c} < 2")
    L = graph.L
    if any(c != 2 for c in graph.codims[L:]):
        return GraphReport(False, "codimensions are not a block of >= 3 followed by a block of 2")
    for i, j in sorted(graph.arrows):
        if not (1 <= j < i <= K):
            return GraphReport(False, f"arrow {i}->{j} must go from a higher to a lower vertex in 1..{K}")
    for i in range(2, K + 1):
        if (i, i - 1) not in graph.arrows:
            return GraphReport(False, f"mandatory arrow {i}->{i - 1} is missing")
    for k, v in graph.upper_degrees:
        if not L < k <= K:
            return GraphReport(False, f"upper degree given for vertex {k} outside the upper part")
        if v < 1:
            return GraphReport(False, f"upper degree of vertex {k} is {v} < 1")
    return GraphReport(True, "")


def _check_index(graph, i):
    if isinstance(i, bool) or not isinstance(i, int) or not 1 <= i <= graph.K:
        raise IndexOutOfRange(f"vertex {i!r} out of range 1..{graph.K}")


def path_count(graph: ResolutionGraph, i: int, j: int) -> int:
    """Number of arrow paths from vertex ``i`` down to vertex ``j``; p(i, i) = 1."""
    _check_index(graph, i)
    _check_index(graph, j)
    if j > i:
        return 0
    return graph.path_matrix[i][j]


@dataclass(frozen=True)
class GradedSystemData:
    graph: ResolutionGraph
    nus: tuple
    threshold: int

    def __post_init__(self):
        nus = tuple(self.nus)
        object.__setattr__(self, "nus", nus)
        if len(nus) != self.graph.K:
            raise LengthMismatch(f"{len(nus)} multiplicities for {self.graph.K} blow-ups")
        if any(isinstance(v, bool) or not isinstance(v, int) or v < 0 for v in nus):
            raise MalformedInput(f"multiplicities must be nonnegative integers: {nus}")
        if isinstance(self.threshold, bool) or not isinstance(self.threshold, int) or self.threshold < 1:
            raise MalformedInput(f"threshold must be a positive integer, got {self.threshold!r}")

    def to_dict(self):
        out = self.graph.to_dict()
        out["nus"] = list(self.nus)
        out["threshold"] = self.threshold
        return out

    @classmethod
    def from_dict(cls, data):
        try:
            return cls(ResolutionGraph.from_dict(data), tuple(data["nus"]), data["threshold"])
        except KeyError as exc:
            raise MalformedInput(f"missing field {exc}") from exc


def _graph_of(obj):
    return obj.graph if isinstance(obj, GradedSystemData) else obj


def discrepancy(data, j: int) -> int:
    """K(X, nu_{E_j}) = sum_i p(j, i) (codim B_{i-1} - 1).

    Accepts a ResolutionGraph or a GradedSystemData.
    """
    graph = _graph_of(data)
    _check_index(graph, j)
    row = graph.path_matrix[j]
    return sum(row[i] * (graph.codims[i - 1] - 1) for i in range(1, j + 1))


def system_multiplicity(data: GradedSystemData, j: int) -> int:
    """nu_{E_j}(|lambda|) = sum_i p(j, i) nu_i."""
    graph = data.graph
    _check_index(graph, j)
    row = graph.path_matrix[j]
    return sum(row[i] * data.nus[i - 1] for i in range(1, j + 1))


def multiplicity_table(graph: ResolutionGraph, nus_rows):
    """Batch form of system_multiplicity: row r, column j-1 holds nu_{E_j} for nus_rows[r]."""
    rows = np.asarray(nus_rows, dtype=np.int64)
    if rows.ndim != 2 or rows.shape[1] != graph.K:
        raise LengthMismatch(f"expected rows of length {graph.K}, got shape {rows.shape}")
    P = np.array([r[1:] for r in graph.path_matrix[1:]], dtype=np.int64)
    return rows @ P.T


def is_maximal_singularity(data: GradedSystemData) -> bool:
    K = data.graph.K
    return system_multiplicity(data, K) > data.threshold * discrepancy(data, K)


def is_maximal_cycle(codim: int, mult: int, n: int) -> bool:
    if codim < 2 or mult < 0 or n < 1:
        raise MalformedInput(f"need codim >= 2, mult >= 0, n >= 1; got {(codim, mult, n)}")
    return mult > n * (codim - 1)


def compatible_check(graph: ResolutionGraph, a) -> bool:
    """Is ``a`` (values on the lower vertices 1..L) compatible with the arrows?

    Compatibility means a(i) >= sum of a(j) over lower-part arrows j -> i.
    """
    graph.require_valid()
    L = graph.L
    if len(a) != L:
        raise LengthMismatch(f"compatible function has {len(a)} values, lower part has {L} vertices")
    values = [Fraction(v) for v in a]
    if any(v < 0 for v in values):
        raise MalformedInput(f"compatible function must be nonnegative: {a}")
    for i in range(1, L + 1):
        inflow = sum((values[j - 1] for j in graph._incoming[i] if j <= L), Fraction(0))
        if values[i - 1] < inflow:
            return False
    return True


def canonical_compatible(graph: ResolutionGraph):
    """The two standard compatible functions: i -> p(L, i) and i -> p(K, i)."""
    P = graph.path_matrix
    L, K = graph.L, graph.K
    return (tuple(P[L][i] for i in range(1, L + 1)),
            tuple(P[K][i] for i in range(1, L + 1)))


def iter_resolution_graphs(K, L=None):
    """All valid graphs on K vertices: every subset of optional arrows above the chain.

    Codimensions are 3 on the lower part and 2 on the upper part; ``L=None``
    yields every split 0..K.
    """
    optional = [(i, j) for i in range(3, K + 1) for j in range(1, i - 1)]
    chain = [(i, i - 1) for i in range(2, K + 1)]
    splits = range(K + 1) if L is None else [L]
    for mask in range(1 << len(optional)):
        arrows = frozenset(chain + [optional[b] for b in range(len(optional)) if mask >> b & 1])
        for split in splits:
            yield ResolutionGraph((3,) * split + (2,) * (K - split), arrows)
