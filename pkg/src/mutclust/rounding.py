"""Pivot rounding of a fractional solution into size-bounded clusters.

Repeatedly picks a pivot, collects the surviving vertices within fractional
distance alpha, and either isolates the pivot, takes the whole
neighborhood, or splits it into blocks of at most K+1 vertices.  With
alpha = 2/7 the rounded cost is within a factor 7 of the fractional
objective plus the per-vertex excess-weight bank, giving a 9-approximation
of the optimal size-bounded clustering.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import InputError
from .ingest import GeneCatalog
from .lp import FractionalSolution
from .weights import EdgeWeights

PIVOT_RULES = ("lowest-index", "seeded-random")


@dataclass(frozen=True, eq=False)
class Clustering:
    """Partition of gene indices 0..n-1 into nonempty blocks.

    Blocks keep their creation order; members are stored sorted.  The
    derived ``assignment`` maps each gene index to its block id.
    """

    blocks: tuple[tuple[int, ...], ...]
    n: int
    assignment: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        normalized = tuple(tuple(sorted(b)) for b in self.blocks)
        object.__setattr__(self, "blocks", normalized)
        assignment = np.full(self.n, -1, dtype=np.int64)
        count = 0
        for i, block in enumerate(normalized):
            if not block:
                raise InputError(f"block {i} is empty")
            for g in block:
                if not 0 <= g < self.n:
                    raise InputError(f"gene index {g} outside 0..{self.n - 1}")
                if assignment[g] != -1:
                    raise InputError(f"gene index {g} appears in two blocks")
                assignment[g] = i
            count += len(block)
        if count != self.n:
            raise InputError(f"blocks cover {count} of {self.n} genes")
        object.__setattr__(self, "assignment", assignment)

    @property
    def max_block_size(self) -> int:
        return max(len(b) for b in self.blocks)

    def as_sets(self) -> frozenset[frozenset[int]]:
        return frozenset(frozenset(b) for b in self.blocks)


@dataclass(frozen=True)
class RoundingParams:
    """alpha in (0, 1/2), the block-size cap K, and the pivot rule."""

    k: int
    alpha: float = 2.0 / 7.0
    pivot_rule: str = "lowest-index"
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.alpha < 0.5:
            raise InputError(f"alpha must lie in (0, 1/2), got {self.alpha}")
        if self.k < 1:
            raise InputError(f"K must be a positive integer, got {self.k}")
        if self.pivot_rule not in PIVOT_RULES:
            raise InputError(
                f"unknown pivot rule {self.pivot_rule!r}; "
                f"expected one of {', '.join(PIVOT_RULES)}"
            )


def round_solution(
    sol: FractionalSolution, w: EdgeWeights, p: RoundingParams
) -> Clustering:
    """Apply the pivot procedure to a feasible fractional solution."""
    if sol.n != w.n:
        raise InputError("solution size does not match weights")
    x = sol.x
    alpha = p.alpha
    k = p.k
    rng = np.random.default_rng(p.seed) if p.pivot_rule == "seeded-random" else None

    surviving = list(range(sol.n))
    blocks: list[tuple[int, ...]] = []
    while surviving:
        if rng is None:
            u = surviving[0]  # lowest index
        else:
            u = surviving[int(rng.integers(len(surviving)))]
        near = [t for t in surviving if t != u and x[u, t] <= alpha]
        near_sum = sum(x[u, t] for t in near)
        if near_sum >= alpha * len(near) / 2.0:
            blocks.append((u,))
            claimed = {u}
        elif len(near) <= k:
            blocks.append(tuple([u] + near))
            claimed = {u, *near}
        else:
            # pivot keeps the K fractionally closest; the rest is chopped
            # into runs of K+1 (the last possibly shorter)
            near.sort(key=lambda t: (x[u, t], t))
            blocks.append(tuple([u] + near[:k]))
            rest = near[k:]
            for start in range(0, len(rest), k + 1):
                blocks.append(tuple(rest[start : start + k + 1]))
            claimed = {u, *near}
        surviving = [t for t in surviving if t not in claimed]
    return Clustering(blocks=tuple(blocks), n=sol.n)


def clustering_cost(c: Clustering, w: EdgeWeights) -> float:
    """Positive weight over split pairs plus negative weight over
    co-clustered pairs."""
    if c.n != w.n:
        raise InputError("clustering size does not match weights")
    same = c.assignment[:, None] == c.assignment[None, :]
    iu = np.triu_indices(c.n, k=1)
    return float(np.where(same, w.wminus, w.wplus)[iu].sum())


def excess_weight(v: int, w: EdgeWeights, k: int) -> float:
    """Sum of the n-1-K smallest positive weights at v (0 if n-1 <= K):
    positive weight that any clustering with blocks of size <= K+1 must
    cut at v."""
    if k < 1:
        raise InputError(f"K must be a positive integer, got {k}")
    incident = np.delete(w.wplus[v], v)
    spare = incident.size - k
    if spare <= 0:
        return 0.0
    return float(np.sort(incident)[:spare].sum())


def total_excess(w: EdgeWeights, k: int) -> float:
    """Charge bank: sum of excess_weight over all vertices."""
    return sum(excess_weight(v, w, k) for v in range(w.n))


def clustering_to_json(
    c: Clustering, genes: GeneCatalog, params: dict, cost: float
) -> str:
    doc = {
        "params": params,
        "blocks": [[genes.names[g] for g in block] for block in c.blocks],
        "cost": cost,
    }
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def write_clustering_json(
    path: str, c: Clustering, genes: GeneCatalog, params: dict, cost: float
) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(clustering_to_json(c, genes, params, cost))


def write_clustering_text(path: str, c: Clustering, genes: GeneCatalog) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for block in c.blocks:
            fh.write(" ".join(genes.names[g] for g in block) + "\n")
