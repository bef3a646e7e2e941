"""Brute-force reference computations and the sweeps built on them.

Every oracle here takes a different route from the engine it checks:
paths are enumerated one by one instead of counted by recursion,
multiplicities are pushed through the blow-ups step by step, and so on.
Each sweep returns an :class:`OracleResult`; a failing sweep carries a
counterexample.
"""

from __future__ import annotations

import itertools
import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import bound, cremona, exclusion, picard, valuation
from .valuation import GradedSystemData, ResolutionGraph


@dataclass
class OracleResult:
    name: str
    passed: bool
    checked: int
    counterexample: object = None
    details: dict = field(default_factory=dict)

    def to_dict(self):
        out = {"name": self.name, "passed": self.passed, "checked": self.checked}
        if self.details:
            out["details"] = self.details
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        return out


def _threads():
    try:
        return max(1, int(os.environ.get("MAXSING_THREADS", "1")))
    except ValueError:
        return 1


def _fan_out(func, items):
    """Map ``func`` over ``items`` in order, using MAXSING_THREADS worker processes."""
    workers = _threads()
    items = list(items)
    if workers == 1 or len(items) < 2:
        return [func(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))


# -- reference computations -------------------------------------------------

def dfs_paths(arrows, start, end):
    """All arrow paths from ``start`` to ``end``, listed explicitly."""
    out_edges = {}
    for i, j in arrows:
        out_edges.setdefault(i, []).append(j)
    found = []

    def walk(node, trail):
        if node == end:
            found.append(tuple(trail))
            return
        for nxt in out_edges.get(node, ()):
            if nxt >= end:
                walk(nxt, trail + [nxt])

    walk(start, [start])
    return found


def simulate_blowups(graph: ResolutionGraph, nus):
    """Multiplicities and discrepancies of E_1..E_K, one blow-up at a time.

    After the j-th blow-up the pulled-back system is its strict transform
    plus nu_{E_i} E_i over earlier divisors, and the centre B_{j-1} lies on
    exactly the E_i with an arrow j -> i, each smooth there.  So the order
    of the pullback along B_{j-1} is nu_j plus those nu_{E_i}; the same
    bookkeeping on K_X gives codim - 1 plus the earlier discrepancies.
    """
    mults, discs = [], []
    for j in range(1, graph.K + 1):
        through = [i for (a, i) in graph.arrows if a == j]
        mults.append(nus[j - 1] + sum(mults[i - 1] for i in through))
        discs.append(graph.codims[j - 1] - 1 + sum(discs[i - 1] for i in through))
    return mults, discs


def lower_systems(L, lower_arrows, max_entry=6):
    """Every (nu, d, m) on a lower part of L vertices with entries in 0..max_entry.

    The equalities fix m_{0,j} once the rest is chosen; support and the
    m_{i,j} <= d_i bound are enforced while enumerating.
    """
    found = []
    M = max_entry

    def extend(j, nus, d, m):
        if j > L:
            found.append((tuple(nus), tuple(d), dict(m)))
            return
        sources = [i for i in range(1, j) if (j, i) in lower_arrows]
        for nu in range(M + 1):
            for dj in range(M + 1):
                need = nu * nu + dj
                if need - sum(min(d[i - 1], M) for i in sources) > M:
                    continue
                for combo in itertools.product(*(range(min(d[i - 1], M) + 1) for i in sources)):
                    m0 = need - sum(combo)
                    if 0 <= m0 <= M:
                        row = dict(m)
                        row[(0, j)] = m0
                        row.update({(i, j): v for i, v in zip(sources, combo)})
                        extend(j + 1, nus + [nu], d + [dj], row)

    extend(1, [], [], {})
    return found


def upper_tails(u, degrees, max_entry=6, cap=None):
    """Upper multiplicities (each <= max_entry) with sum nu^2 deg <= cap."""
    cap = max_entry if cap is None else cap
    for nus in itertools.product(range(max_entry + 1), repeat=u):
        if sum(v * v * g for v, g in zip(nus, degrees)) <= cap:
            yield nus


# -- sweeps -------------------------------------------------------------------

def oracle_paths(max_vertices=6):
    checked = 0
    for K in range(1, max_vertices + 1):
        for graph in valuation.iter_resolution_graphs(K, L=0):
            for i in range(1, K + 1):
                for j in range(1, K + 1):
                    expected = len(dfs_paths(graph.arrows, i, j))
                    got = valuation.path_count(graph, i, j)
                    checked += 1
                    if got != expected:
                        return OracleResult("paths", False, checked,
                                            {"graph": graph.to_dict(), "i": i, "j": j,
                                             "dfs": expected, "path_count": got})
    return OracleResult("paths", True, checked)


def simulate_blowups_batch(graph: ResolutionGraph, nus_rows):
    """simulate_blowups on many multiplicity vectors at once (one column per blow-up)."""
    rows = np.asarray(nus_rows, dtype=np.int64)
    cols = []
    for j in range(1, graph.K + 1):
        col = rows[:, j - 1].copy()
        for a, i in graph.arrows:
            if a == j:
                col += cols[i - 1]
        cols.append(col)
    return np.stack(cols, axis=1)


def _multiplicity_graph(graph, max_nu=3, scalar_up_to=5):
    K = graph.K
    checked = 0
    for split in range(K + 1):
        g = ResolutionGraph((3,) * split + (2,) * (K - split), graph.arrows)
        _, discs = simulate_blowups(g, [0] * K)
        for j in range(1, K + 1):
            checked += 1
            if valuation.discrepancy(g, j) != discs[j - 1]:
                return checked, {"graph": g.to_dict(), "j": j, "discrepancy": valuation.discrepancy(g, j),
                                 "simulated": discs[j - 1]}
    grid = list(itertools.product(range(max_nu + 1), repeat=K))
    if K <= scalar_up_to:
        for nus in grid:
            data = GradedSystemData(graph, nus, 1)
            mults, _ = simulate_blowups(graph, nus)
            for j in range(1, K + 1):
                checked += 1
                if valuation.system_multiplicity(data, j) != mults[j - 1]:
                    return checked, {"graph": graph.to_dict(), "nus": list(nus), "j": j,
                                     "system_multiplicity": valuation.system_multiplicity(data, j),
                                     "simulated": mults[j - 1]}
    table = valuation.multiplicity_table(graph, grid)
    simulated = simulate_blowups_batch(graph, grid)
    checked += table.size
    if not np.array_equal(table, simulated):
        r, c = map(int, np.argwhere(table != simulated)[0])
        return checked, {"graph": graph.to_dict(), "nus": list(grid[r]), "j": c + 1,
                         "system_multiplicity": int(table[r, c]), "simulated": int(simulated[r, c])}
    return checked, None


def oracle_multiplicities(max_vertices=6, max_nu=3):
    graphs = [g for K in range(1, max_vertices + 1) for g in valuation.iter_resolution_graphs(K, L=0)]
    checked = 0
    for count, bad in _fan_out(_multiplicity_graph, graphs):
        checked += count
        if bad is not None:
            return OracleResult("multiplicities", False, checked, bad)
    return OracleResult("multiplicities", True, checked)


def _theorem_lower_part(args):
    L, lower_arrows, max_upper, max_entry = args
    systems = lower_systems(L, lower_arrows, max_entry)
    groups = {}
    for nus, d, m in systems:
        groups.setdefault(nus, []).append(([m[(0, i)] for i in range(1, L + 1)], d[L - 1]))
    arrays = {nus: (np.array([r[0] for r in rows], dtype=np.int64),
                    np.array([r[1] for r in rows], dtype=np.int64))
              for nus, rows in groups.items()}
    checked = violations = 0
    example = None
    for u in range(max_upper + 1):
        K = L + u
        optional = [(i, j) for i in range(L + 1, K + 1) for j in range(1, i - 1)]
        chain = [(i, i - 1) for i in range(2, K + 1)]
        for mask in range(1 << len(optional)):
            arrows = frozenset(chain + sorted(lower_arrows - set(chain))
                               + [optional[b] for b in range(len(optional)) if mask >> b & 1])
            for degrees in itertools.product((1, 2), repeat=u):
                graph = ResolutionGraph((3,) * L + (2,) * u, arrows,
                                        {L + 1 + k: g for k, g in enumerate(degrees)})
                funcs = valuation.canonical_compatible(graph)
                for tail in upper_tails(u, degrees, max_entry):
                    weight = sum(v * v * g for v, g in zip(tail, degrees))
                    for nus, (m0, dL) in arrays.items():
                        mask_ok = dL >= weight
                        n_sys = int(mask_ok.sum())
                        if not n_sys:
                            continue
                        data = GradedSystemData(graph, nus + tail, 1)
                        for a in funcs:
                            rhs = bound.theorem_lower_bound(data, a)
                            if rhs.denominator != 1:
                                raise AssertionError(f"integer data gave bound {rhs}")
                            rhs = rhs.numerator
                            lhs = m0[mask_ok] @ np.array(a, dtype=np.int64)
                            bad = lhs < rhs
                            checked += n_sys
                            if bad.any():
                                violations += int(bad.sum())
                                if example is None:
                                    example = {"graph": graph.to_dict(), "nus": list(nus + tail),
                                               "a": list(a), "bound": str(rhs)}
    return checked, violations, example, len(systems)


def oracle_theorem(max_lower=3, max_upper=2, max_entry=6):
    """sum a(i) m_{0,i} >= theorem bound over every small system, canonical a."""
    jobs = []
    for L in range(1, max_lower + 1):
        chain = {(i, i - 1) for i in range(2, L + 1)}
        optional = [(i, j) for i in range(3, L + 1) for j in range(1, i - 1)]
        for mask in range(1 << len(optional)):
            jobs.append((L, frozenset(chain | {optional[b] for b in range(len(optional)) if mask >> b & 1}),
                         max_upper, max_entry))
    checked = violations = lower_total = 0
    example = None
    for c, v, ex, n_lower in _fan_out(_theorem_lower_part, jobs):
        checked += c
        violations += v
        lower_total += n_lower
        example = example or ex
    return OracleResult("theorem", violations == 0, checked, example,
                        {"violations": violations, "lower_systems": lower_total})


def tail_sums(K):
    """Distinct (sigma0, sigma1) over all graphs on K vertices and all splits L >= 1.

    Weights r_i = p(K, i) are built top-down, r_i being the sum of r_j over
    arrows j -> i; graphs giving the same partial weights are merged.
    """
    states = {(1,)}
    for i in range(K - 1, 0, -1):
        nxt = set()
        for r in states:
            # r[0] = r_K, ..., r[-1] = r_{i+1}; arrow i+1 -> i is mandatory
            higher = r[:-1]
            for mask in range(1 << len(higher)):
                extra = sum(higher[b] for b in range(len(higher)) if mask >> b & 1)
                nxt.add(r + (r[-1] + extra,))
        states = nxt
    sums = set()
    for r in states:
        lower_first = r[::-1]  # r_1, ..., r_K
        total = sum(lower_first)
        acc = 0
        for L in range(1, K + 1):
            acc += lower_first[L - 1]
            sums.add((acc, total - acc))
    return sums


def oracle_four_n_squared(max_vertices=8, max_n=20, full_graph_limit=6):
    """required_m_lower_bound >= 4n^2, strictly unless the upper part is empty."""
    checked = 0
    for K in range(1, full_graph_limit + 1):
        for graph in valuation.iter_resolution_graphs(K):
            if graph.L == 0:
                continue
            for n in range(1, max_n + 1):
                data = GradedSystemData(graph, (0,) * K, n)
                b = bound.required_m_lower_bound(data)
                s1 = sum(valuation.path_count(graph, K, i) for i in range(graph.L + 1, K + 1))
                checked += 1
                if b < 4 * n * n or (s1 > 0) != (b > 4 * n * n):
                    return OracleResult("four_n_squared", False, checked,
                                        {"graph": graph.to_dict(), "n": n, "bound": str(b)})
    for K in range(full_graph_limit + 1, max_vertices + 1):
        for s0, s1 in sorted(tail_sums(K)):
            for n in range(1, max_n + 1):
                b = bound.mean_square_bound(n, s0, s1, 2 * s0 + s1)
                checked += 1
                if b < 4 * n * n or (s1 > 0) != (b > 4 * n * n):
                    return OracleResult("four_n_squared", False, checked,
                                        {"K": K, "sigma0": s0, "sigma1": s1, "n": n, "bound": str(b)})
    for n in range(1, max_n + 1):
        data = GradedSystemData(ResolutionGraph((3,)), (2 * n + 1,), n)
        rec = bound.quartic_exclusion_verdict(data)
        checked += 1
        if rec.values["bound"] != 4 * n * n or rec.verdict != bound.Verdict.CONTRADICTION:
            return OracleResult("four_n_squared", False, checked, {"n": n, "verdict": rec.to_dict()})
    return OracleResult("four_n_squared", True, checked)


def oracle_cremona(count=1000, max_steps=10, seed=0):
    """Generated types satisfy the equations, the inequality, and round-trip."""
    checked = 0
    for s in range(count):
        k = random.Random(seed * 1_000_003 + s).randint(0, max_steps)
        t = cremona.random_homaloidal(seed * 1_000_003 + s, k)
        problem = None
        if not cremona.verify_noether_equations(t).ok:
            problem = "equations"
        elif t.degree >= 2 and sum(t.mults[:3]) <= t.degree:
            problem = "inequality"
        else:
            steps = cremona.factorize(t)
            degrees = [t.degree] + [st.after.degree for st in steps]
            if degrees[-1] != 1 or any(a <= b for a, b in zip(degrees, degrees[1:])):
                problem = "degrees"
            elif len(steps) > t.degree - 1:
                problem = "length"
            elif cremona.reconstruct(steps) != t:
                problem = "round-trip"
            else:
                for st in steps:
                    if cremona.undo_step(st) != st.before:
                        problem = "involution"
        checked += 1
        if problem:
            return OracleResult("cremona", False, checked, {"type": t.to_dict(), "failed": problem})
    return OracleResult("cremona", True, checked)


def oracle_untwist(max_n=200):
    checked = 0
    tau = picard.QUARTIC_TAU
    if not (tau.is_involution() and picard.verify_projection_relations(tau) and tau.determinant == -1):
        return OracleResult("untwist", False, 1, {"matrix": [list(r) for r in tau.matrix]})
    for n in range(1, max_n + 1):
        for nu in range(n + 1, (3 * n - 1) // 2 + 1):
            step = picard.untwist_step(picard.MobileClass(n, nu))
            checked += 1
            if not (step.n < n and step.nu < step.n):
                return OracleResult("untwist", False, checked, {"n": n, "nu": nu})
    return OracleResult("untwist", True, checked)


def oracle_double_space(max_m=50, max_n=50, max_point_n=100):
    checked = 0
    for m in range(3, max_m + 1):
        for n in range(1, max_n + 1):
            grid = np.arange(4 * n + 1, dtype=np.int64)
            nu, nu_star = np.meshgrid(grid, grid, indexing="ij")
            first, second = exclusion.case3_inequalities(n, m, nu, nu_star)
            bad = (first >= 0) & (second >= 0) & (np.maximum(nu, nu_star) > n)
            checked += nu.size
            if bad.any():
                a, b = map(int, np.argwhere(bad)[0])
                return OracleResult("double_space", False, checked,
                                    {"n": n, "m": m, "nu": a, "nu_star": b})
    # the scalar verdict agrees with the vectorized inequalities on a smaller box
    for m in range(3, 8):
        for n in range(1, 11):
            for nu in range(4 * n + 1):
                for nu_star in range(4 * n + 1):
                    v = exclusion.exclude_curve_case3(n, m, nu, nu_star)
                    checked += 1
                    if (v.verdict is bound.Verdict.FEASIBLE) and max(nu, nu_star) > n:
                        return OracleResult("double_space", False, checked,
                                            {"n": n, "m": m, "nu": nu, "nu_star": nu_star})
    for n in range(1, max_point_n + 1):
        for nu in range(4 * n + 2):
            checked += 1
            point = exclusion.exclude_point_double_space(n, nu).verdict
            if (point is bound.Verdict.CONTRADICTION) != (nu > 2 * n):
                return OracleResult("double_space", False, checked, {"case": "point", "n": n, "nu": nu})
            one = exclusion.exclude_curve_case1(n, nu).verdict
            two = exclusion.exclude_curve_case2(n, nu, 1 + nu % 20).verdict
            if (one is bound.Verdict.CONTRADICTION) != (nu > n) or one is not two:
                return OracleResult("double_space", False, checked, {"case": "curve", "n": n, "nu": nu})
    return OracleResult("double_space", True, checked)


def random_conic_datum(rng, max_entry=100):
    """A datum meeting every precondition of the test-surface computation."""
    mu = rng.randint(1, max_entry // 2)
    chains = []
    for _ in range(rng.randint(1, 4)):
        length = rng.randint(1, 3)
        chain = [(rng.randint(1, max_entry), rng.randint(1, max_entry)) for _ in range(length - 1)]
        chain.append((rng.randint(mu + 1, max_entry), rng.randint(1, max_entry)))
        chains.append(tuple(chain))
    slack = sum((nu - mu) * el for ch in chains for nu, el in ch)
    A = rng.randint(-max_entry, max_entry)
    A = min(A, slack - 1)
    return exclusion.ConicBundleDatum(mu, A, rng.randint(0, max_entry), tuple(chains))


def oracle_conic(count=10_000, seed=0):
    rng = random.Random(seed)
    for k in range(count):
        datum = random_conic_datum(rng)
        rec = exclusion.conic_bundle_check(datum)
        if not rec.values["value"] < 0 or rec.verdict is not bound.Verdict.CONTRADICTION:
            return OracleResult("conic", False, k + 1,
                                {"mu": datum.mu, "A_dot_L": datum.A_dot_L,
                                 "disc_pairing": datum.disc_pairing,
                                 "exceptional": [list(map(list, ch)) for ch in datum.exceptional]})
    return OracleResult("conic", True, count)


ORACLES = {
    "cremona": oracle_cremona,
    "paths": oracle_paths,
    "multiplicities": oracle_multiplicities,
    "theorem": oracle_theorem,
    "four_n_squared": oracle_four_n_squared,
    "untwist": oracle_untwist,
    "double_space": oracle_double_space,
    "conic": oracle_conic,
}


def run_oracles(selector=None, seed=0):
    """Run the named oracles (all when ``selector`` is empty), in a fixed order."""
    names = list(ORACLES) if not selector else list(selector)
    unknown = [n for n in names if n not in ORACLES]
    if unknown:
        from .errors import MalformedInput
        raise MalformedInput(f"unknown oracle(s): {unknown}; known: {sorted(ORACLES)}")
    results = []
    for name in names:
        func = ORACLES[name]
        if name in ("cremona", "conic"):
            results.append(func(seed=seed))
        else:
            results.append(func())
    return results
