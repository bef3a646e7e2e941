import itertools
import random

import pytest

from maxsing import oracles, valuation
from maxsing.bound import Verdict
from maxsing.exclusion import conic_bundle_check
from maxsing.oracles import (
    dfs_paths,
    lower_systems,
    random_conic_datum,
    run_oracles,
    simulate_blowups,
    simulate_blowups_batch,
    tail_sums,
    upper_tails,
)
from maxsing.errors import MalformedInput
from maxsing.valuation import ResolutionGraph, iter_resolution_graphs


def test_dfs_on_complete_graph():
    # every subset of the intermediate vertices gives a path
    arrows = {(i, j) for i in range(1, 6) for j in range(1, i)}
    assert len(dfs_paths(arrows, 5, 1)) == 2 ** 3


def test_simulation_by_hand():
    g = ResolutionGraph.chain((3, 2, 2), [(3, 1)])
    # E_3 sits over E_2 and E_1: 1 + (1 + 2) + 2
    assert simulate_blowups(g, (2, 1, 1)) == ([2, 3, 6], [2, 3, 6])
    batch = simulate_blowups_batch(g, [(2, 1, 1), (0, 0, 1)])
    assert batch.tolist() == [[2, 3, 6], [0, 0, 1]]


def test_lower_systems_single_vertex():
    found = lower_systems(1, frozenset(), max_entry=6)
    # m_{0,1} = nu^2 + d <= 6
    assert sorted((s[0][0], s[1][0]) for s in found) == sorted(
        (nu, d) for nu in range(3) for d in range(7) if nu * nu + d <= 6)


def test_upper_tails_respect_cap():
    tails = list(upper_tails(2, (1, 2), max_entry=6, cap=6))
    assert (2, 1) in tails and (1, 2) not in tails
    assert all(a * a + 2 * b * b <= 6 for a, b in tails)


@pytest.mark.parametrize("K", [1, 2, 3, 4, 5, 6])
def test_tail_sums_match_graph_enumeration(K):
    brute = set()
    for g in iter_resolution_graphs(K):
        if g.L >= 1:
            P = g.path_matrix
            brute.add((sum(P[K][1:g.L + 1]), sum(P[K][g.L + 1:K + 1])))
    assert tail_sums(K) == brute


def test_random_conic_data_meet_preconditions():
    rng = random.Random(3)
    for _ in range(200):
        datum = random_conic_datum(rng)
        assert conic_bundle_check(datum).verdict in (Verdict.CONTRADICTION, Verdict.NO_VERDICT)


@pytest.mark.parametrize("name", ["paths", "untwist", "conic", "cremona", "double_space"])
def test_fast_oracles_pass(name):
    [result] = run_oracles([name])
    assert result.passed and result.checked > 0


def test_oracle_reports_counterexample(monkeypatch):
    real = valuation.path_count

    def off_by_one(graph, i, j):
        value = real(graph, i, j)
        return value + 1 if (graph.K, i, j) == (4, 4, 1) else value

    monkeypatch.setattr(oracles.valuation, "path_count", off_by_one)
    result = oracles.oracle_paths(max_vertices=4)
    assert not result.passed and result.counterexample is not None


def test_unknown_oracle():
    with pytest.raises(MalformedInput):
        run_oracles(["bogus"])


@pytest.mark.parametrize("L, lower_arrows, max_entry", [
    (1, frozenset(), 6),
    (2, frozenset({(2, 1)}), 3),
    (3, frozenset({(2, 1), (3, 2), (3, 1)}), 1),
])
def test_lower_systems_match_check_system(L, lower_arrows, max_entry):
    from maxsing.bound import MultiplicitySystem, check_system
    from maxsing.valuation import GradedSystemData

    graph = ResolutionGraph((3,) * L, lower_arrows)
    keys = [(i, j) for j in range(1, L + 1) for i in range(j)]
    brute = set()
    for nus in itertools.product(range(max_entry + 1), repeat=L):
        data = GradedSystemData(graph, nus, 1)
        for d in itertools.product(range(max_entry + 1), repeat=L):
            for values in itertools.product(range(max_entry + 1), repeat=len(keys)):
                ms = MultiplicitySystem(data, dict(zip(keys, values)), d)
                if check_system(ms).ok:
                    brute.add((nus, d, tuple(ms.mult(*k) for k in keys)))
    found = {(nus, d, tuple(m.get(k, 0) for k in keys))
             for nus, d, m in lower_systems(L, lower_arrows, max_entry)}
    assert found == brute
