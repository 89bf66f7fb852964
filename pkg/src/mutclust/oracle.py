"""Exact reference solver for the size-bounded clustering ILP.

Enumerates set partitions as restricted-growth strings, skipping blocks
that would exceed K+1 members, with optional branch-and-bound pruning
(safe because pair costs are non-negative, so partial cost never
decreases).  Intended for small instances only; use it to certify LP
lower bounds and approximation ratios.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InputError
from .rounding import Clustering, clustering_cost
from .weights import EdgeWeights


@dataclass(frozen=True, eq=False)
class ExactResult:
    """Minimum-cost size-bounded partition and the search effort."""

    best: Clustering
    cost: float
    partitions_examined: int


def solve_exact(
    w: EdgeWeights, k: int, max_n: int = 12, prune: bool = True
) -> ExactResult:
    """Minimum-cost partition with all blocks of size <= K+1.

    Ties are broken toward the lexicographically smallest restricted-growth
    string, i.e. the first minimum found in enumeration order.
    """
    n = w.n
    if k < 1:
        raise InputError(f"K must be a positive integer, got {k}")
    if n > max_n:
        raise InputError(
            f"refusing exhaustive enumeration for n={n} > max_n={max_n}"
        )
    wp = w.wplus.tolist()
    wm = w.wminus.tolist()
    # placing vertex i into block B adds prefix[i] + sum over j in B of
    # (wm[i][j] - wp[i][j]): every earlier vertex pays wp unless co-blocked
    prefix = [math.fsum(wp[i][:i]) for i in range(n)]
    delta = [
        [wm[i][j] - wp[i][j] for j in range(n)] for i in range(n)
    ]
    cap = k + 1

    best_cost = math.inf
    best_blocks: list[tuple[int, ...]] | None = None
    examined = 0
    members: list[list[int]] = []

    def descend(i: int, partial: float) -> None:
        nonlocal best_cost, best_blocks, examined
        if i == n:
            examined += 1
            if partial < best_cost:
                best_cost = partial
                best_blocks = [tuple(b) for b in members]
            return
        for b in range(len(members) + 1):
            if b < len(members):
                block = members[b]
                if len(block) >= cap:
                    continue
                added = prefix[i] + sum(delta[i][j] for j in block)
            else:
                added = prefix[i]
            new_partial = partial + added
            if prune and new_partial >= best_cost:
                continue
            if b < len(members):
                members[b].append(i)
                descend(i + 1, new_partial)
                members[b].pop()
            else:
                members.append([i])
                descend(i + 1, new_partial)
                members.pop()

    descend(0, 0.0)
    assert best_blocks is not None
    best = Clustering(blocks=tuple(best_blocks), n=n)
    return ExactResult(
        best=best,
        cost=clustering_cost(best, w),
        partitions_examined=examined,
    )
