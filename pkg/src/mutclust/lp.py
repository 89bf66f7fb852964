"""LP relaxation of the size-bounded clustering ILP.

Variables are the C(n,2) pair distances x_uv in [0,1]; the objective is
sum(w+ x + w- (1-x)); triangle constraints x_uv <= x_uz + x_zv are added
lazily in batches of the most-violated triples until a full separation
scan finds none.  The ILP's per-vertex size constraint is deliberately
not part of the relaxation; the rounding step restores it.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog
from scipy.sparse import csr_matrix

from .errors import ConvergenceError, InputError
from .triangles import max_triangle_violation, violating_triangles
from .weights import EdgeWeights

log = logging.getLogger(__name__)

_BOX_TOL = 1e-9
_TRIANGLE_TOL = 1e-6

_HIGHS_OPTIONS = {
    "primal_feasibility_tolerance": 1e-9,
    "dual_feasibility_tolerance": 1e-9,
}


@dataclass(frozen=True, eq=False)
class FractionalSolution:
    """Feasible fractional pair distances with their objective value.

    Construction validates symmetry, the zero diagonal, the [0,1] box at
    1e-9, and triangle feasibility at 1e-6; ``max_violation`` stores the
    exact scan result.
    """

    x: np.ndarray
    objective: float
    iterations: int = 0
    max_violation: float = field(init=False)

    def __post_init__(self):
        x = self.x
        if x.ndim != 2 or x.shape[0] != x.shape[1]:
            raise InputError(f"solution matrix must be square, got {x.shape}")
        if not np.array_equal(x, x.T):
            raise InputError("solution matrix is not symmetric")
        if np.diagonal(x).any():
            raise InputError("solution matrix has a nonzero diagonal")
        if (x < -_BOX_TOL).any() or (x > 1.0 + _BOX_TOL).any():
            raise InputError("solution entries leave [0,1] beyond 1e-9")
        viol = max_triangle_violation(x)
        if viol > _TRIANGLE_TOL:
            raise InputError(f"triangle violation {viol:.3e} exceeds 1e-6")
        object.__setattr__(self, "max_violation", viol)

    @property
    def n(self) -> int:
        return self.x.shape[0]

    def summary_json(self) -> str:
        return json.dumps(
            {
                "objective": self.objective,
                "max_violation": self.max_violation,
                "iterations": self.iterations,
            }
        )


@dataclass(eq=False)
class LpInstance:
    """Mutable solver state: weights plus the enforced triple set."""

    n: int
    wplus: np.ndarray
    wminus: np.ndarray
    active: list[tuple[int, int, int]] = field(default_factory=list)


def objective(x: np.ndarray, w: EdgeWeights) -> float:
    """sum over unordered pairs of w+ x + w- (1 - x)."""
    iu = np.triu_indices(w.n, k=1)
    xf = x[iu]
    return float(np.sum(w.wplus[iu] * xf + w.wminus[iu] * (1.0 - xf)))


def separate_triangles(
    x: np.ndarray, batch: int, tol: float = _TRIANGLE_TOL
) -> list[tuple[int, int, int, float]]:
    """Up to `batch` triples violating x_uv <= x_uz + x_zv by more than
    tol, most violated first."""
    if batch <= 0:
        raise InputError(f"batch must be positive, got {batch}")
    return violating_triangles(x, tol, limit=batch)


def _to_matrix(flat: np.ndarray, n: int) -> np.ndarray:
    x = np.zeros((n, n))
    iu = np.triu_indices(n, k=1)
    x[iu] = flat
    return x + x.T


def solve_lp(
    w: EdgeWeights,
    tol: float = _TRIANGLE_TOL,
    batch: int | None = None,
    max_rounds: int = 1000,
) -> FractionalSolution:
    """Minimize the relaxation by lazy triangle-constraint generation.

    Each round solves the LP over the constraints collected so far, scans
    for violated triangles, and adds the `batch` worst offenders; an empty
    scan certifies feasibility.  Constraints are separated at a threshold
    below tol so the final solution is feasible at tol with margin.
    """
    if tol <= 0:
        raise InputError(f"tol must be positive, got {tol}")
    n = w.n
    if batch is None:
        batch = 10 * n
    iu = np.triu_indices(n, k=1)
    n_vars = iu[0].size
    pair_index = np.full((n, n), -1, dtype=np.int64)
    pair_index[iu] = np.arange(n_vars)
    pair_index = np.maximum(pair_index, pair_index.T)

    cost = (w.wplus - w.wminus)[iu]
    constant = float(w.wminus[iu].sum())
    # separate strictly below tol but above the solver's own enforcement
    # tolerance, otherwise re-found rows could cycle forever
    add_tol = max(tol * 0.1, 1e-8)

    inst = LpInstance(n=n, wplus=w.wplus, wminus=w.wminus)
    seen: set[tuple[int, int, int]] = set()
    rows: list[int] = []
    cols: list[int] = []
    data: list[float] = []

    best_x: np.ndarray | None = None
    for rounds in range(1, max_rounds + 1):
        if inst.active:
            a_ub = csr_matrix(
                (data, (rows, cols)), shape=(len(inst.active), n_vars)
            )
            b_ub = np.zeros(len(inst.active))
        else:
            a_ub = None
            b_ub = None
        res = linprog(
            cost,
            A_ub=a_ub,
            b_ub=b_ub,
            bounds=(0.0, 1.0),
            method="highs",
            options=_HIGHS_OPTIONS,
        )
        if not res.success:
            raise ConvergenceError(
                f"LP solve failed in round {rounds}: {res.message}",
                x=best_x,
                iterations=rounds,
            )
        flat = np.clip(res.x, 0.0, 1.0)
        best_x = _to_matrix(flat, n)

        violated = violating_triangles(best_x, add_tol, limit=batch)
        fresh = [(u, v, z) for u, v, z, _ in violated if (u, v, z) not in seen]
        if not fresh:
            if violated:
                raise ConvergenceError(
                    "separation keeps finding already-enforced triangles; "
                    "solver tolerance too loose for the requested tol",
                    x=best_x,
                    max_violation=violated[0][3],
                    iterations=rounds,
                )
            obj = objective(best_x, w)
            log.debug(
                "LP converged in %d rounds with %d active constraints",
                rounds,
                len(inst.active),
            )
            return FractionalSolution(x=best_x, objective=obj, iterations=rounds)

        for u, v, z in fresh:
            row = len(inst.active)
            inst.active.append((u, v, z))
            seen.add((u, v, z))
            rows.extend((row, row, row))
            cols.extend((pair_index[u, v], pair_index[u, z], pair_index[z, v]))
            data.extend((1.0, -1.0, -1.0))

    final_viol = max_triangle_violation(best_x) if best_x is not None else None
    raise ConvergenceError(
        f"no feasible solution within {max_rounds} rounds",
        x=best_x,
        max_violation=final_viol,
        iterations=max_rounds,
    )


def write_solution_tsv(path: str, sol: FractionalSolution, w: EdgeWeights) -> None:
    """Pair distances as TSV rows plus a JSON summary line in a sidecar."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("gene_u\tgene_v\tx\n")
        for u in range(sol.n):
            for v in range(u + 1, sol.n):
                fh.write(
                    f"{w.genes.names[u]}\t{w.genes.names[v]}\t{sol.x[u, v]:.9g}\n"
                )
    with open(path + ".json", "w", encoding="utf-8") as fh:
        fh.write(sol.summary_json() + "\n")
