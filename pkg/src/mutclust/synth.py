"""Synthetic clustering instances with known ground truth.

Planted instances put weight gamma on within-block pairs and 1-gamma on
cross-block pairs (negative weights complementary), optionally swapping
the two weights on randomly chosen pairs to inject noise.  Random
instances draw each pair's positive weight from a user-given discrete
distribution.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import InputError
from .ingest import GeneCatalog
from .rounding import Clustering
from .weights import EdgeWeights


@dataclass(frozen=True, eq=False)
class PlantedInstance:
    """Weights with a planted partition and the noise actually applied."""

    weights: EdgeWeights
    truth: Clustering
    gamma: float
    flips: tuple[tuple[int, int], ...]
    seed: int


def _synthetic_catalog(n: int) -> GeneCatalog:
    return GeneCatalog(tuple(f"v{i:03d}" for i in range(n)))


def flip_pair(w: EdgeWeights, u: int, v: int) -> EdgeWeights:
    """Swap the positive and negative weight of one pair (an involution)."""
    if u == v:
        raise InputError("cannot flip a diagonal entry")
    wp = w.wplus.copy()
    wm = w.wminus.copy()
    wp[u, v], wm[u, v] = wm[u, v], wp[u, v]
    wp[v, u], wm[v, u] = wm[v, u], wp[v, u]
    return EdgeWeights(w.genes, wp, wm)


def make_planted(
    sizes: Sequence[int], gamma: float, n_flips: int, seed: int
) -> PlantedInstance:
    """Planted blocks of the given sizes with gamma-separated weights and
    n_flips randomly swapped pairs."""
    if not sizes or any(s < 1 for s in sizes):
        raise InputError(f"block sizes must be positive, got {sizes}")
    if not 0.5 < gamma < 1.0:
        raise InputError(f"gamma must lie in (1/2, 1), got {gamma}")
    n = int(sum(sizes))
    if n < 2:
        raise InputError("planted instances need at least two vertices")
    n_pairs = n * (n - 1) // 2
    if not 0 <= n_flips <= n_pairs:
        raise InputError(f"n_flips must lie in [0, {n_pairs}], got {n_flips}")

    blocks = []
    start = 0
    for s in sizes:
        blocks.append(tuple(range(start, start + s)))
        start += s
    truth = Clustering(blocks=tuple(blocks), n=n)

    same = truth.assignment[:, None] == truth.assignment[None, :]
    wp = np.where(same, gamma, 1.0 - gamma)
    wm = 1.0 - wp
    np.fill_diagonal(wp, 0.0)
    np.fill_diagonal(wm, 0.0)

    rng = np.random.default_rng(seed)
    iu = np.triu_indices(n, k=1)
    chosen = rng.choice(n_pairs, size=n_flips, replace=False)
    flips = tuple(
        sorted((int(iu[0][i]), int(iu[1][i])) for i in np.sort(chosen))
    )
    for u, v in flips:
        wp[u, v], wm[u, v] = wm[u, v], wp[u, v]
        wp[v, u], wm[v, u] = wm[v, u], wp[v, u]

    weights = EdgeWeights(_synthetic_catalog(n), wp, wm)
    return PlantedInstance(
        weights=weights, truth=truth, gamma=gamma, flips=flips, seed=seed
    )


def make_random(
    n: int, levels: Sequence[tuple[float, float]], seed: int
) -> EdgeWeights:
    """Each pair's positive weight drawn from discrete (probability, value)
    levels; negative weight is the complement."""
    if n < 2:
        raise InputError(f"need n >= 2, got {n}")
    if not levels:
        raise InputError("levels must be nonempty")
    probs = np.array([p for p, _ in levels], dtype=float)
    values = np.array([v for _, v in levels], dtype=float)
    if (probs < 0).any() or abs(probs.sum() - 1.0) > 1e-9:
        raise InputError("level probabilities must be >= 0 and sum to 1")
    if (values < 0).any() or (values > 1).any():
        raise InputError("level values must lie in [0, 1]")

    rng = np.random.default_rng(seed)
    n_pairs = n * (n - 1) // 2
    draws = values[rng.choice(len(values), size=n_pairs, p=probs)]
    wp = np.zeros((n, n))
    iu = np.triu_indices(n, k=1)
    wp[iu] = draws
    wp = wp + wp.T
    wm = 1.0 - wp
    np.fill_diagonal(wm, 0.0)
    return EdgeWeights(_synthetic_catalog(n), wp, wm)


def compare_clusterings(a: Clustering, b: Clustering) -> tuple[bool, float]:
    """Exact-match flag plus the fraction of vertices agreeing under the
    best one-to-one block matching."""
    if a.n != b.n:
        raise InputError("clusterings cover different vertex counts")
    exact = a.as_sets() == b.as_sets()
    inter = np.zeros((len(a.blocks), len(b.blocks)), dtype=np.int64)
    for i, block in enumerate(a.blocks):
        for g in block:
            inter[i, b.assignment[g]] += 1
    rows, cols = linear_sum_assignment(-inter)
    overlap = float(inter[rows, cols].sum()) / a.n
    return exact, overlap
