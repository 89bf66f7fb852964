import json
import statistics
from fractions import Fraction
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mutclust.errors import InputError
from mutclust.evaluate import (
    ContingencyTable,
    cluster_coverage,
    cluster_exclusivity,
    driver_proportion,
    evaluate_clustering,
    fisher_exclusivity_p,
    fisher_point,
    pair_table,
    pairwise_distances,
    permutation_baseline,
    report_to_json,
    report_to_tsv,
)
from mutclust.ingest import InteractionNetwork
from mutclust.rounding import Clustering

from conftest import mk_catalog, mk_mutation


def fraction_tail(t: ContingencyTable) -> Fraction:
    """Exact rational left-tail oracle via integer binomials."""
    row1, col1 = t.a + t.b, t.a + t.c
    denom = comb(t.n, col1)
    lo = max(0, col1 - (t.c + t.d))
    return sum(
        (
            Fraction(comb(row1, a2) * comb(t.n - row1, col1 - a2), denom)
            for a2 in range(lo, t.a + 1)
        ),
        Fraction(0),
    )


def random_table(rng, max_n=200) -> ContingencyTable:
    while True:
        a, b, c, d = (int(v) for v in rng.integers(0, max_n // 3, size=4))
        if 0 < a + b + c + d <= max_n:
            return ContingencyTable(a, b, c, d)


# ---------------------------------------------------------------------------
# Fisher point probability and tail


def test_point_probability_balanced_table():
    assert fisher_point(ContingencyTable(1, 1, 1, 1)) == pytest.approx(2.0 / 3.0)


def test_point_probability_degenerate_margins():
    assert fisher_point(ContingencyTable(0, 0, 0, 7)) == pytest.approx(1.0)


def test_point_probabilities_normalize(rng):
    for _ in range(20):
        t = random_table(rng)
        row1, col1 = t.a + t.b, t.a + t.c
        lo = max(0, col1 - (t.c + t.d))
        hi = min(row1, col1)
        row2 = t.c + t.d
        total = sum(
            fisher_point(
                ContingencyTable(a2, row1 - a2, col1 - a2, row2 - (col1 - a2))
            )
            for a2 in range(lo, hi + 1)
        )
        assert total == pytest.approx(1.0, abs=1e-12)


def test_tail_is_one_at_maximal_overlap():
    # a equals min(row, column) margin: the tail covers every table
    assert fisher_exclusivity_p(ContingencyTable(3, 0, 2, 5)) == pytest.approx(1.0)


def test_tail_at_zero_overlap_is_single_term():
    t = ContingencyTable(0, 4, 3, 5)
    assert fisher_exclusivity_p(t) == pytest.approx(fisher_point(t))


def test_tail_matches_exact_rational_oracle(rng):
    for _ in range(50):
        t = random_table(rng)
        oracle = float(fraction_tail(t))
        got = fisher_exclusivity_p(t)
        assert got == pytest.approx(oracle, rel=1e-10)
        assert 0.0 < got <= 1.0


@given(
    b=st.integers(1, 30),
    c=st.integers(1, 30),
    a=st.integers(0, 30),
    d=st.integers(0, 30),
)
@settings(max_examples=60, deadline=None)
def test_tail_monotone_in_overlap_with_fixed_margins(a, b, c, d):
    p_low = fisher_exclusivity_p(ContingencyTable(a, b, c, d))
    p_high = fisher_exclusivity_p(ContingencyTable(a + 1, b - 1, c - 1, d + 1))
    assert p_low <= p_high + 1e-12


def test_table_rejects_negative_counts():
    with pytest.raises(InputError, match="non-negative"):
        ContingencyTable(1, -1, 0, 2)


def test_pair_table_counts_cohort():
    m = mk_mutation([{0, 1, 2}, {2, 3}, {5}], n_samples=6)
    t = pair_table(0, 1, m)
    assert (t.a, t.b, t.c, t.d) == (1, 2, 1, 2)
    assert t.n == m.n_samples


# ---------------------------------------------------------------------------
# per-cluster statistics


def test_exclusivity_two_gene_block_is_single_pair():
    m = mk_mutation([{0, 1}, {2, 3}, {0}], n_samples=6)
    assert cluster_exclusivity((0, 1), m) == pytest.approx(
        fisher_exclusivity_p(pair_table(0, 1, m))
    )


def test_exclusivity_median_of_all_pairs():
    m = mk_mutation(
        [{0, 1, 2}, {3, 4, 5}, {6, 7}, {0, 3, 6, 9}], n_samples=12
    )
    block = (0, 1, 2, 3)
    pvals = [
        fisher_exclusivity_p(pair_table(u, v, m))
        for i, u in enumerate(block)
        for v in block[i + 1 :]
    ]
    assert cluster_exclusivity(block, m) == pytest.approx(
        statistics.median(pvals)
    )
    # six pairs: an even count, so the median averages the central two
    assert len(pvals) == 6


def test_exclusivity_disjoint_sets_score_low():
    m = mk_mutation([set(range(10)), set(range(10, 20)), set(range(20, 30))], 30)
    assert cluster_exclusivity((0, 1, 2), m) < 0.01


def test_exclusivity_rejects_singleton():
    m = mk_mutation([{0}, {1}], n_samples=4)
    with pytest.raises(InputError, match="two genes"):
        cluster_exclusivity((0,), m)


def test_coverage_hand_union():
    m = mk_mutation([{1, 2, 3}, {3, 4}], n_samples=10)
    assert cluster_coverage((0, 1), m) == pytest.approx(0.4)


def test_coverage_does_not_double_count():
    m = mk_mutation([{0, 1, 2}, {0, 1, 2}], n_samples=9)
    assert cluster_coverage((0, 1), m) == pytest.approx(3.0 / 9.0)


def test_coverage_full_cohort_is_one():
    m = mk_mutation([{0, 1}, {2, 3}], n_samples=4)
    assert cluster_coverage((0, 1), m) == pytest.approx(1.0)


def test_coverage_monotone_under_block_growth(rng):
    sets = [set(map(int, rng.integers(0, 20, size=5))) for _ in range(6)]
    m = mk_mutation(sets, n_samples=20)
    for size in range(1, 6):
        assert cluster_coverage(tuple(range(size)), m) <= cluster_coverage(
            tuple(range(size + 1)), m
        ) + 1e-15


def test_coverage_rejects_empty_block():
    m = mk_mutation([{0}], n_samples=2)
    with pytest.raises(InputError, match="empty"):
        cluster_coverage((), m)


# ---------------------------------------------------------------------------
# network distances


def path_network():
    return InteractionNetwork([("a", "b"), ("b", "c")])


def test_distance_adjacent_pair():
    s = pairwise_distances(["a", "b"], path_network())
    assert s.mean == pytest.approx(1.0)
    assert s.pairs_used == 1 and s.pairs_excluded == 0


def test_distance_two_hops_across_path():
    s = pairwise_distances(["a", "c"], path_network())
    assert s.mean == pytest.approx(2.0)


def test_distance_excludes_absent_and_unreachable():
    net = InteractionNetwork([("a", "b"), ("c", "d")])
    s = pairwise_distances(["a", "b", "c", "zzz"], net)
    # usable: (a,b)=1; excluded: a-c, b-c (no path) and all zzz pairs
    assert s.mean == pytest.approx(1.0)
    assert s.pairs_used == 1
    assert s.pairs_excluded == 5


def test_distance_none_when_no_usable_pairs():
    s = pairwise_distances(["x", "y"], path_network())
    assert s.mean is None and s.pairs_used == 0 and s.pairs_excluded == 1


def test_distance_permutation_invariant(rng):
    net = InteractionNetwork([("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")])
    genes = ["a", "b", "c", "d"]
    base = pairwise_distances(genes, net)
    shuffled = list(genes)
    rng.shuffle(shuffled)
    assert pairwise_distances(shuffled, net) == base


def floyd_warshall(names, net):
    idx = {g: i for i, g in enumerate(names)}
    n = len(names)
    dist = [[None if i != j else 0 for j in range(n)] for i in range(n)]
    for g in names:
        for h in net.neighbors(g):
            if h in idx:
                dist[idx[g]][idx[h]] = 1
    for k in range(n):
        for i in range(n):
            if dist[i][k] is None:
                continue
            for j in range(n):
                if dist[k][j] is None:
                    continue
                via = dist[i][k] + dist[k][j]
                if dist[i][j] is None or via < dist[i][j]:
                    dist[i][j] = via
    return dist


def test_distance_matches_all_pairs_oracle(rng):
    for _ in range(5):
        n = int(rng.integers(8, 30))
        names = [f"g{i}" for i in range(n)]
        edges = [
            (names[i], names[j])
            for i in range(n)
            for j in range(i + 1, n)
            if rng.random() < 0.15
        ]
        if not edges:
            continue
        net = InteractionNetwork(edges)
        dist = floyd_warshall(names, net)
        members = [names[i] for i in sorted(rng.choice(n, size=6, replace=False))]
        s = pairwise_distances(members, net)
        expected = [
            dist[names.index(u)][names.index(v)]
            for i, u in enumerate(sorted(members))
            for v in sorted(members)[i + 1 :]
        ]
        usable = [d for d in expected if d is not None]
        assert s.pairs_used == len(usable)
        assert s.pairs_excluded == len(expected) - len(usable)
        if usable:
            assert s.mean == pytest.approx(sum(usable) / len(usable))
        else:
            assert s.mean is None


# ---------------------------------------------------------------------------
# driver proportion


def test_driver_proportion_examples():
    blocks = [[f"g{i}" for i in range(10)], [f"g{i}" for i in range(10, 20)]]
    assert driver_proportion(blocks, []) == 0.0
    assert driver_proportion(blocks, [f"g{i}" for i in range(20)]) == 1.0
    assert driver_proportion(blocks, ["g1", "g5", "g15"]) == pytest.approx(0.15)


def test_driver_proportion_counts_union_once():
    assert driver_proportion([["a", "b"], ["b", "c"]], ["b"]) == pytest.approx(
        1.0 / 3.0
    )


def test_driver_proportion_rejects_empty_pool():
    with pytest.raises(InputError, match="empty"):
        driver_proportion([], ["a"])


# ---------------------------------------------------------------------------
# permutation baselines


def test_baseline_constant_statistic_gives_p_one():
    out = permutation_baseline(
        lambda blocks: 1.0, 1.0, [2], 10, trials=50, seed=0
    )
    assert out["p_value"] == pytest.approx(1.0)
    assert out["mean"] == pytest.approx(1.0)


def test_baseline_rejects_bad_arguments():
    with pytest.raises(InputError, match="trials"):
        permutation_baseline(lambda b: 0.0, 0.0, [2], 10, trials=0, seed=0)
    with pytest.raises(InputError, match="direction"):
        permutation_baseline(
            lambda b: 0.0, 0.0, [2], 10, trials=5, seed=0, direction="both"
        )
    with pytest.raises(InputError, match="universe"):
        permutation_baseline(lambda b: 0.0, 0.0, [8, 8], 10, trials=5, seed=0)


def test_baseline_distance_matches_enumerated_expectation():
    # triangle-free path a-b-c: a random pair is one of (a,b), (b,c), (a,c)
    # with distances 1, 1, 2, so the expected mean is 4/3
    net = path_network()
    names = ["a", "b", "c"]

    def stat(blocks):
        return pairwise_distances([names[g] for g in blocks[0]], net).mean

    out = permutation_baseline(
        stat, 0.0, [2], 3, trials=3000, seed=4, direction="less"
    )
    assert out["mean"] == pytest.approx(4.0 / 3.0, abs=0.03)


def test_baseline_direction_flips_tail():
    # statistic is the first sampled index; observed 0 is the minimum, so
    # "less" gives small p and "greater" gives p near 1 minus ties
    def stat(blocks):
        return float(blocks[0][0])

    less = permutation_baseline(stat, 0.0, [1], 12, 200, 0, direction="less")
    greater = permutation_baseline(stat, 0.0, [1], 12, 200, 0, direction="greater")
    assert less["p_value"] < 0.2
    assert greater["p_value"] == pytest.approx(1.0)


# ---------------------------------------------------------------------------
# full report


def toy_cohort():
    m = mk_mutation(
        [{0, 1, 2}, {3, 4, 5}, {6, 7}, {0, 3, 6, 9}, {1, 4, 7, 10}, {11}],
        n_samples=12,
    )
    c = Clustering(blocks=((0, 1, 2), (3, 4), (5,)), n=6)
    net = InteractionNetwork(
        [("v000", "v001"), ("v001", "v002"), ("v003", "v004")]
    )
    return m, c, net


def test_report_scores_every_block():
    m, c, net = toy_cohort()
    report = evaluate_clustering(
        c, mk_catalog(6), m, net=net, drivers=["v000", "v003"]
    )
    s0, s1, s2 = report.clusters
    assert s0.genes == ("v000", "v001", "v002")
    assert s0.coverage == pytest.approx(8.0 / 12.0)
    assert s0.mean_pairwise_distance == pytest.approx(4.0 / 3.0)
    assert s0.driver_fraction == pytest.approx(1.0 / 3.0)
    assert s1.mean_pairwise_distance == pytest.approx(1.0)
    assert s1.driver_fraction == pytest.approx(0.5)
    # singletons carry no pairwise statistics
    assert s2.median_exclusivity_p is None
    assert s2.mean_pairwise_distance is None
    assert s2.coverage == pytest.approx(1.0 / 12.0)


def test_report_orders_top_blocks_by_exclusivity():
    m, c, net = toy_cohort()
    report = evaluate_clustering(c, mk_catalog(6), m, drivers=["v000", "v003"])
    ps = {
        s.block_id: s.median_exclusivity_p
        for s in report.clusters
        if s.median_exclusivity_p is not None
    }
    expected = tuple(sorted(ps, key=lambda i: (ps[i], i)))
    assert report.top_by_exclusivity == expected
    # union of both eligible blocks holds 5 genes, 2 of them drivers
    assert report.top_driver_proportion == pytest.approx(0.4)


def test_report_top_limit_truncates():
    m, c, _ = toy_cohort()
    report = evaluate_clustering(c, mk_catalog(6), m, top=1)
    assert len(report.top_by_exclusivity) == 1


def test_report_without_network_or_drivers():
    m, c, _ = toy_cohort()
    report = evaluate_clustering(c, mk_catalog(6), m)
    assert all(s.mean_pairwise_distance is None for s in report.clusters)
    assert all(s.driver_fraction is None for s in report.clusters)
    assert report.top_driver_proportion is None
    assert report.baselines == {}


def test_report_baselines_present_and_bounded():
    m, c, net = toy_cohort()
    report = evaluate_clustering(
        c, mk_catalog(6), m, net=net, baseline_trials=40, seed=1
    )
    assert set(report.baselines) == {"exclusivity", "coverage", "distance"}
    for entry in report.baselines.values():
        assert 0.0 < entry["p_value"] <= 1.0
        assert np.isfinite(entry["observed"])


def test_report_rejects_mismatched_sizes():
    m, c, _ = toy_cohort()
    with pytest.raises(InputError, match="disagree"):
        evaluate_clustering(c, mk_catalog(7), m)


def test_report_serializations(tmp_path):
    m, c, net = toy_cohort()
    report = evaluate_clustering(
        c, mk_catalog(6), m, net=net, drivers=["v000"]
    )
    doc = json.loads(report_to_json(report))
    assert len(doc["clusters"]) == 3
    assert doc["clusters"][0]["genes"] == ["v000", "v001", "v002"]

    tsv = report_to_tsv(report)
    lines = tsv.strip().split("\n")
    assert lines[0].startswith("block_id\tsize\t")
    assert len(lines) == 4
    # the singleton row carries NA for its pairwise statistics
    assert "\tNA\t" in lines[3]
