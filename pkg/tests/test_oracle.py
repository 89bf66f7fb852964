import numpy as np
import pytest

from mutclust.errors import InputError
from mutclust.lp import solve_lp
from mutclust.oracle import solve_exact
from mutclust.rounding import (
    Clustering,
    RoundingParams,
    clustering_cost,
    round_solution,
)
from mutclust.weights import EdgeWeights

from conftest import mk_catalog, random_probability_weights


def constant_weights(n, wp, wm):
    plus = np.full((n, n), float(wp))
    minus = np.full((n, n), float(wm))
    np.fill_diagonal(plus, 0.0)
    np.fill_diagonal(minus, 0.0)
    return EdgeWeights(mk_catalog(n), plus, minus)


def random_capped_partition(rng, n, k):
    """Independent sampler: shuffle and cut into chunks of size <= K+1."""
    order = list(rng.permutation(n))
    blocks = []
    i = 0
    while i < n:
        size = int(rng.integers(1, k + 2))
        blocks.append(tuple(order[i : i + size]))
        i += size
    return Clustering(blocks=tuple(blocks), n=n)


# ---------------------------------------------------------------------------
# hand-checkable instances


def test_two_genes_merge_when_attractive():
    res = solve_exact(constant_weights(2, 1.0, 0.0), k=1)
    assert res.best.blocks == ((0, 1),)
    assert res.cost == pytest.approx(0.0)


def test_two_genes_split_when_repulsive():
    res = solve_exact(constant_weights(2, 0.0, 1.0), k=1)
    assert res.best.blocks == ((0,), (1,))
    assert res.cost == pytest.approx(0.0)


def test_size_cap_forces_pair_plus_singleton():
    # all pairs want to merge, but K = 1 caps blocks at two members; the
    # three equal-cost pair choices resolve to the lexicographically
    # smallest restricted-growth string
    res = solve_exact(constant_weights(3, 1.0, 0.0), k=1)
    assert res.best.blocks == ((0, 1), (2,))
    assert res.cost == pytest.approx(2.0)


def test_indifferent_weights_pick_lex_smallest_string():
    # every capped partition costs 0.5 per pair; enumeration order packs
    # the earliest vertices into the earliest blocks
    res = solve_exact(constant_weights(4, 0.5, 0.5), k=1)
    assert res.best.blocks == ((0, 1), (2, 3))
    assert res.cost == pytest.approx(3.0)


def test_heavier_cap_recovers_single_block():
    res = solve_exact(constant_weights(4, 1.0, 0.0), k=3)
    assert res.best.blocks == ((0, 1, 2, 3),)
    assert res.cost == pytest.approx(0.0)


def test_two_gene_partition_count():
    res = solve_exact(constant_weights(2, 0.4, 0.6), k=1, prune=False)
    assert res.partitions_examined == 2


# ---------------------------------------------------------------------------
# guard rails


def test_refuses_large_instances(rng):
    w = random_probability_weights(rng, 13)
    with pytest.raises(InputError, match="max_n"):
        solve_exact(w, k=3)


def test_max_n_override(rng):
    w = random_probability_weights(rng, 5)
    with pytest.raises(InputError, match="max_n"):
        solve_exact(w, k=2, max_n=4)


def test_rejects_bad_k(rng):
    w = random_probability_weights(rng, 4)
    with pytest.raises(InputError, match="positive"):
        solve_exact(w, k=0)


# ---------------------------------------------------------------------------
# optimality properties


def test_reported_cost_matches_clustering_cost(rng):
    for _ in range(20):
        n = int(rng.integers(2, 9))
        k = int(rng.integers(1, n))
        w = random_probability_weights(rng, n)
        res = solve_exact(w, k)
        assert res.cost == pytest.approx(clustering_cost(res.best, w), abs=1e-12)
        assert res.best.max_block_size <= k + 1


def test_dominates_random_capped_partitions(rng):
    n, k = 8, 3
    w = random_probability_weights(rng, n)
    res = solve_exact(w, k)
    for _ in range(10_000):
        sample = random_capped_partition(rng, n, k)
        assert res.cost <= clustering_cost(sample, w) + 1e-9


def test_pruning_changes_effort_not_result(rng):
    for _ in range(10):
        n = int(rng.integers(3, 9))
        k = int(rng.integers(1, n))
        w = random_probability_weights(rng, n)
        fast = solve_exact(w, k, prune=True)
        slow = solve_exact(w, k, prune=False)
        assert fast.best.blocks == slow.best.blocks
        assert fast.cost == pytest.approx(slow.cost, abs=1e-12)
        assert fast.partitions_examined <= slow.partitions_examined


def test_lp_is_a_lower_bound(rng):
    for _ in range(8):
        n = int(rng.integers(4, 9))
        w = random_probability_weights(rng, n)
        res = solve_exact(w, k=n - 1)
        sol = solve_lp(w)
        assert sol.objective <= res.cost + 1e-6


def test_rounded_cost_within_nine_times_exact(rng):
    for _ in range(10):
        n = int(rng.integers(4, 10))
        k = int(rng.integers(1, n))
        w = random_probability_weights(rng, n)
        sol = solve_lp(w)
        rounded = round_solution(sol, w, RoundingParams(k=k))
        exact = solve_exact(w, k)
        assert sol.objective <= exact.cost + 1e-6
        if exact.cost > 1e-9:
            assert clustering_cost(rounded, w) <= 9.0 * exact.cost + 1e-6
