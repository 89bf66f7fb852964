"""Clustering quality benchmarks.

Per cluster: median pairwise Fisher exclusivity p-value, patient
coverage, mean pairwise network distance, and driver fraction.  Cohort
level: the ten most mutually exclusive clusters, the driver proportion of
their union, and permutation baselines over size-matched random gene
sets.
"""

from __future__ import annotations

import json
import statistics
from collections import deque
from dataclasses import asdict, dataclass
from math import exp, lgamma
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from .errors import InputError
from .ingest import GeneCatalog, InteractionNetwork, MutationMatrix
from .rounding import Clustering

# ---------------------------------------------------------------------------
# Fisher exact test


@dataclass(frozen=True)
class ContingencyTable:
    """2x2 co-mutation counts: both genes, first only, second only, neither."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if min(self.a, self.b, self.c, self.d) < 0:
            raise InputError("contingency counts must be non-negative")

    @property
    def n(self) -> int:
        return self.a + self.b + self.c + self.d


def _log_comb(n: int, k: int) -> float:
    return lgamma(n + 1) - lgamma(k + 1) - lgamma(n - k + 1)


def fisher_point(t: ContingencyTable) -> float:
    """Hypergeometric point probability of the table given its margins."""
    log_p = (
        _log_comb(t.a + t.b, t.a)
        + _log_comb(t.c + t.d, t.c)
        - _log_comb(t.n, t.a + t.c)
    )
    return exp(log_p)


def fisher_exclusivity_p(t: ContingencyTable) -> float:
    """One-sided left tail: probability of at most `a` co-mutated samples
    under fixed margins.  Small values mean the pair looks mutually
    exclusive."""
    row1 = t.a + t.b
    row2 = t.c + t.d
    col1 = t.a + t.c
    lo = max(0, col1 - row2)
    total = 0.0
    for a2 in range(lo, t.a + 1):
        table = ContingencyTable(a2, row1 - a2, col1 - a2, row2 - (col1 - a2))
        total += fisher_point(table)
    return min(total, 1.0)


def pair_table(u: int, v: int, m: MutationMatrix) -> ContingencyTable:
    su, sv = m.patient_sets[u], m.patient_sets[v]
    a = len(su & sv)
    b = len(su) - a
    c = len(sv) - a
    return ContingencyTable(a, b, c, m.n_samples - a - b - c)


# ---------------------------------------------------------------------------
# per-cluster statistics


def cluster_exclusivity(block: Sequence[int], m: MutationMatrix) -> float:
    """Median pairwise exclusivity p-value over the block's gene pairs."""
    if len(block) < 2:
        raise InputError("exclusivity needs at least two genes")
    pvals = [
        fisher_exclusivity_p(pair_table(u, v, m))
        for i, u in enumerate(block)
        for v in block[i + 1 :]
    ]
    return float(statistics.median(pvals))


def cluster_coverage(block: Sequence[int], m: MutationMatrix) -> float:
    """Fraction of samples mutated in at least one gene of the block."""
    if not block:
        raise InputError("coverage of an empty block")
    covered: set[int] = set()
    for g in block:
        covered |= m.patient_sets[g]
    return len(covered) / m.n_samples


def bfs_hops(net: InteractionNetwork, source: str) -> dict[str, int]:
    """Hop counts from source to every reachable network gene."""
    dist = {source: 0}
    queue = deque([source])
    while queue:
        g = queue.popleft()
        for h in net.neighbors(g):
            if h not in dist:
                dist[h] = dist[g] + 1
                queue.append(h)
    return dist


@dataclass(frozen=True)
class DistanceSummary:
    """Mean pairwise hop distance; pairs without a path are excluded."""

    mean: Optional[float]
    pairs_used: int
    pairs_excluded: int


def pairwise_distances(genes: Iterable[str], net: InteractionNetwork) -> DistanceSummary:
    names = sorted(set(genes))
    used = 0
    excluded = 0
    total = 0
    hops: dict[str, dict[str, int]] = {
        g: bfs_hops(net, g) if g in net else {} for g in names
    }
    for i, u in enumerate(names):
        for v in names[i + 1 :]:
            d = hops[u].get(v)
            if d is None:
                excluded += 1
            else:
                used += 1
                total += d
    mean = total / used if used else None
    return DistanceSummary(mean=mean, pairs_used=used, pairs_excluded=excluded)


def driver_proportion(
    blocks: Sequence[Sequence[str]], drivers: Iterable[str]
) -> float:
    """Driver fraction of the union of the given blocks' genes."""
    pool: set[str] = set()
    for block in blocks:
        pool.update(block)
    if not pool:
        raise InputError("driver proportion of an empty gene pool")
    return len(pool & set(drivers)) / len(pool)


# ---------------------------------------------------------------------------
# permutation baselines


def permutation_baseline(
    statistic: Callable[[list[list[int]]], Optional[float]],
    observed: float,
    block_sizes: Sequence[int],
    universe_size: int,
    trials: int,
    seed: int,
    direction: str = "less",
) -> dict[str, float]:
    """Empirical mean and one-sided p-value of `statistic` over random
    gene-index partitions matching the block-size profile.

    direction "less" counts trials with statistic <= observed (use when
    small observed values are the interesting ones), "greater" the
    opposite; the p-value carries the (r+1)/(trials+1) correction.
    """
    if trials < 1:
        raise InputError(f"trials must be >= 1, got {trials}")
    if direction not in ("less", "greater"):
        raise InputError(f"direction must be 'less' or 'greater', got {direction!r}")
    if sum(block_sizes) > universe_size:
        raise InputError("block-size profile exceeds the gene universe")
    rng = np.random.default_rng(seed)
    hits = 0
    values = []
    for _ in range(trials):
        perm = rng.permutation(universe_size)
        blocks = []
        start = 0
        for s in block_sizes:
            blocks.append([int(g) for g in perm[start : start + s]])
            start += s
        value = statistic(blocks)
        if value is None:
            continue
        values.append(value)
        if direction == "less":
            hits += value <= observed
        else:
            hits += value >= observed
    p = (hits + 1) / (trials + 1)
    mean = float(np.mean(values)) if values else float("nan")
    return {"mean": mean, "p_value": p}


# ---------------------------------------------------------------------------
# report assembly


@dataclass(frozen=True)
class ClusterScore:
    block_id: int
    genes: tuple[str, ...]
    median_exclusivity_p: Optional[float]
    coverage: float
    mean_pairwise_distance: Optional[float]
    distance_pairs_excluded: Optional[int]
    driver_fraction: Optional[float]


@dataclass(frozen=True)
class ClusterReport:
    clusters: tuple[ClusterScore, ...]
    top_by_exclusivity: tuple[int, ...]
    top_driver_proportion: Optional[float]
    baselines: dict


def evaluate_clustering(
    c: Clustering,
    genes: GeneCatalog,
    m: MutationMatrix,
    net: Optional[InteractionNetwork] = None,
    drivers: Optional[Iterable[str]] = None,
    top: int = 10,
    baseline_trials: int = 0,
    seed: int = 0,
) -> ClusterReport:
    """Score every cluster and aggregate the cohort-level summary."""
    if c.n != len(genes) or c.n != m.n_genes:
        raise InputError("clustering, catalog, and mutation matrix disagree")
    driver_set = set(drivers) if drivers is not None else None

    scores = []
    for i, block in enumerate(c.blocks):
        names = tuple(genes.names[g] for g in block)
        median_p = cluster_exclusivity(block, m) if len(block) >= 2 else None
        coverage = cluster_coverage(block, m)
        if net is not None and len(block) >= 2:
            summary = pairwise_distances(names, net)
            mean_dist, excluded = summary.mean, summary.pairs_excluded
        else:
            mean_dist, excluded = None, None
        fraction = (
            len(set(names) & driver_set) / len(names)
            if driver_set is not None
            else None
        )
        scores.append(
            ClusterScore(
                block_id=i,
                genes=names,
                median_exclusivity_p=median_p,
                coverage=coverage,
                mean_pairwise_distance=mean_dist,
                distance_pairs_excluded=excluded,
                driver_fraction=fraction,
            )
        )

    eligible = [s for s in scores if s.median_exclusivity_p is not None]
    eligible.sort(key=lambda s: (s.median_exclusivity_p, s.block_id))
    top_ids = tuple(s.block_id for s in eligible[:top])
    top_prop = None
    if driver_set is not None and top_ids:
        top_prop = driver_proportion(
            [scores[i].genes for i in top_ids], driver_set
        )

    baselines: dict = {}
    if baseline_trials > 0:
        baselines = _cohort_baselines(
            scores, c, genes, m, net, baseline_trials, seed
        )

    return ClusterReport(
        clusters=tuple(scores),
        top_by_exclusivity=top_ids,
        top_driver_proportion=top_prop,
        baselines=baselines,
    )


def _cohort_baselines(scores, c, genes, m, net, trials, seed):
    """Permutation baselines for the cohort means of each statistic."""
    multi = [len(b) for b in c.blocks if len(b) >= 2]
    if not multi:
        return {}

    def mean_over(blocks: list[list[int]], f) -> Optional[float]:
        values = [f(b) for b in blocks]
        values = [v for v in values if v is not None]
        return float(np.mean(values)) if values else None

    def exclusivity_stat(blocks):
        return mean_over(blocks, lambda b: cluster_exclusivity(b, m))

    def coverage_stat(blocks):
        return mean_over(blocks, lambda b: cluster_coverage(b, m))

    def distance_stat(blocks):
        return mean_over(
            blocks,
            lambda b: pairwise_distances(
                [genes.names[g] for g in b], net
            ).mean,
        )

    named: list[tuple[str, Callable, str, list]] = [
        (
            "exclusivity",
            exclusivity_stat,
            "less",
            [s.median_exclusivity_p for s in scores if s.median_exclusivity_p is not None],
        ),
        (
            "coverage",
            coverage_stat,
            "greater",
            [s.coverage for s in scores if len(s.genes) >= 2],
        ),
    ]
    if net is not None:
        named.append(
            (
                "distance",
                distance_stat,
                "less",
                [
                    s.mean_pairwise_distance
                    for s in scores
                    if s.mean_pairwise_distance is not None
                ],
            )
        )

    out = {}
    for offset, (name, stat, direction, observed_values) in enumerate(named):
        if not observed_values:
            continue
        observed = float(np.mean(observed_values))
        result = permutation_baseline(
            stat,
            observed,
            multi,
            len(genes),
            trials,
            seed + offset,
            direction=direction,
        )
        out[name] = {"observed": observed, **result}
    return out


def report_to_json(report: ClusterReport) -> str:
    return json.dumps(asdict(report), sort_keys=True, indent=2) + "\n"


def report_to_tsv(report: ClusterReport) -> str:
    lines = [
        "block_id\tsize\tmedian_exclusivity_p\tcoverage\t"
        "mean_pairwise_distance\tdistance_pairs_excluded\tdriver_fraction"
    ]

    def cell(value):
        return "NA" if value is None else f"{value:.6g}"

    for s in report.clusters:
        lines.append(
            f"{s.block_id}\t{len(s.genes)}\t{cell(s.median_exclusivity_p)}\t"
            f"{cell(s.coverage)}\t{cell(s.mean_pairwise_distance)}\t"
            f"{'NA' if s.distance_pairs_excluded is None else s.distance_pairs_excluded}\t"
            f"{cell(s.driver_fraction)}"
        )
    return "\n".join(lines) + "\n"
