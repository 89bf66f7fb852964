"""Pairwise clustering weights from mutation, network, and expression data.

The negative weight of a gene pair scores mutual exclusivity (the cost of
putting the pair in one cluster); the positive weight is a convex
combination of percentile-capped coverage, network-affinity, and
expression-affinity components (the cost of splitting the pair).  A final
pairwise rescaling enforces w+ + w- >= 1, which the rounding guarantee
requires alongside w+ <= 1.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import InputError
from .ingest import (
    ExpressionMatrix,
    GeneCatalog,
    InteractionNetwork,
    MutationMatrix,
    nearest_rank_percentile,
)

log = logging.getLogger(__name__)

SCHEMES = ("ME-CO", "NI-ME-CO", "EX-ME-CO", "FULL")

# positive-weight components per scheme, in w1/w2/w3 slot order
_COMPONENTS = {
    "ME-CO": ("coverage",),
    "NI-ME-CO": ("coverage", "network"),
    "EX-ME-CO": ("coverage", "expression"),
    "FULL": ("coverage", "network", "expression"),
}

_DEFAULT_WEIGHTS = {
    "ME-CO": (1.0, 0.0, 0.0),
    "NI-ME-CO": (0.5, 0.5, 0.0),
    "EX-ME-CO": (0.5, 0.5, 0.0),
    "FULL": (1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0),
}


@dataclass(frozen=True)
class WeightConfig:
    """Weight-scheme selection and its scalar parameters.

    ``w1`` always multiplies the coverage component.  ``w2`` multiplies the
    second component of the scheme (network for NI-ME-CO and FULL,
    expression for EX-ME-CO) and ``w3`` the expression component of FULL.
    Supplied combination weights are renormalized to sum 1 with a logged
    warning; weights for components the scheme does not use must be zero.
    """

    scheme: str
    a: float = 1.0
    j_coverage: float = 95.0
    j_network: float = 95.0
    j_expression: float = 95.0
    w1: Optional[float] = None
    w2: Optional[float] = None
    w3: Optional[float] = None

    def __post_init__(self):
        scheme = self.scheme.upper()
        if scheme not in SCHEMES:
            raise InputError(
                f"unknown scheme {self.scheme!r}; expected one of {', '.join(SCHEMES)}"
            )
        object.__setattr__(self, "scheme", scheme)
        if self.a < 0:
            raise InputError(f"exclusivity scale a must be >= 0, got {self.a}")
        for name in ("j_coverage", "j_network", "j_expression"):
            j = getattr(self, name)
            if not 0.0 < j <= 100.0:
                raise InputError(f"{name} must be in (0, 100], got {j}")

        supplied = (self.w1, self.w2, self.w3)
        n_used = len(_COMPONENTS[scheme])
        if all(v is None for v in supplied):
            resolved = _DEFAULT_WEIGHTS[scheme]
        else:
            resolved = tuple(0.0 if v is None else float(v) for v in supplied)
            if any(v < 0 for v in resolved):
                raise InputError(f"combination weights must be >= 0, got {resolved}")
            if any(v != 0.0 for v in resolved[n_used:]):
                raise InputError(
                    f"scheme {scheme} uses {n_used} combination weight(s); "
                    f"w{n_used + 1} and beyond must be zero"
                )
            total = sum(resolved[:n_used])
            if total == 0.0:
                raise InputError("combination weights sum to zero")
            if abs(total - 1.0) > 1e-12:
                log.warning(
                    "combination weights %s sum to %g; renormalizing to sum 1",
                    resolved[:n_used],
                    total,
                )
                resolved = tuple(v / total for v in resolved[:n_used]) + (0.0,) * (
                    3 - n_used
                )
        for name, value in zip(("w1", "w2", "w3"), resolved):
            object.__setattr__(self, name, value)

    @property
    def components(self) -> tuple[str, ...]:
        return _COMPONENTS[self.scheme]


@dataclass(frozen=True, eq=False)
class EdgeWeights:
    """Symmetric positive/negative weight matrices over a gene catalog.

    Invariants enforced at construction: zero diagonals, exact symmetry,
    0 <= w+ <= 1, w- >= 0, and w+ + w- >= 1 - 1e-12 off the diagonal.
    """

    genes: GeneCatalog
    wplus: np.ndarray
    wminus: np.ndarray

    def __post_init__(self):
        n = len(self.genes)
        if n < 2:
            raise InputError("edge weights need at least two genes")
        for name, mat in (("wplus", self.wplus), ("wminus", self.wminus)):
            if mat.shape != (n, n):
                raise InputError(f"{name} shape {mat.shape} does not match {n} genes")
            if not np.array_equal(mat, mat.T):
                raise InputError(f"{name} is not symmetric")
            if np.diagonal(mat).any():
                raise InputError(f"{name} has a nonzero diagonal")
            if not np.isfinite(mat).all():
                raise InputError(f"{name} has non-finite entries")
        off = ~np.eye(n, dtype=bool)
        if (self.wplus < 0).any() or (self.wplus > 1).any():
            raise InputError("wplus entries must lie in [0, 1]")
        if (self.wminus < 0).any():
            raise InputError("wminus entries must be >= 0")
        total = self.wplus + self.wminus
        if (total[off] < 1.0 - 1e-12).any():
            raise InputError("wplus + wminus must be >= 1 - 1e-12 off the diagonal")

    @property
    def n(self) -> int:
        return len(self.genes)


# ---------------------------------------------------------------------------
# per-pair scores


def exclusivity_weight(u: int, v: int, m: MutationMatrix, a: float) -> float:
    """Scaled co-mutation rate a * |S(u) n S(v)| / min(|S(u)|, |S(v)|)."""
    su, sv = m.patient_sets[u], m.patient_sets[v]
    if not su or not sv:
        raise InputError("exclusivity weight needs nonempty patient sets")
    return a * len(su & sv) / min(len(su), len(sv))


def coverage_raw(u: int, v: int, m: MutationMatrix) -> int:
    """Symmetric-difference size |S(u) delta S(v)|."""
    return len(m.patient_sets[u] ^ m.patient_sets[v])


def percentile_cap(values, j: float, x: float) -> float:
    """Cap x against the nearest-rank jth percentile T of values:
    1 if x > T, else x / T; a zero threshold degenerates to indicator(x > 0).
    """
    t = nearest_rank_percentile(values, j)
    if t == 0:
        return 1.0 if x > 0 else 0.0
    if x > t:
        return 1.0
    return x / t


def network_affinity(u: str, v: str, net: InteractionNetwork) -> float:
    """Jaccard overlap of closed neighborhoods; genes outside the network
    act as isolated vertices."""
    nu = set(net.neighbors(u))
    nu.add(u)
    nv = set(net.neighbors(v))
    nv.add(v)
    return len(nu & nv) / len(nu | nv)


def expression_affinity(u: int, v: int, z: ExpressionMatrix) -> float:
    """Absolute cosine similarity of expression z-score vectors; 0 when
    either gene has no usable expression row."""
    if not (z.present[u] and z.present[v]):
        return 0.0
    zu, zv = z.entries[u], z.entries[v]
    nu = float(np.linalg.norm(zu))
    nv = float(np.linalg.norm(zv))
    if nu == 0.0 or nv == 0.0:
        return 0.0
    return abs(float(np.dot(zu, zv))) / (nu * nv)


# ---------------------------------------------------------------------------
# matrix assembly


def _offdiag_upper(mat: np.ndarray) -> np.ndarray:
    return mat[np.triu_indices(mat.shape[0], k=1)]


def _cap_matrix(raw: np.ndarray, j: float) -> np.ndarray:
    t = nearest_rank_percentile(_offdiag_upper(raw), j)
    if t == 0:
        return (raw > 0).astype(float)
    return np.where(raw > t, 1.0, raw / t)


def _exclusivity_matrix(m: MutationMatrix, a: float) -> np.ndarray:
    e = m.entries.astype(np.int64)
    sizes = e.sum(axis=1)
    if (sizes == 0).any():
        empty = [m.genes.names[i] for i in np.flatnonzero(sizes == 0)[:5]]
        raise InputError(f"genes with no mutated samples (e.g. {empty}); filter first")
    inter = e @ e.T
    min_sizes = np.minimum(sizes[:, None], sizes[None, :])
    wm = a * inter / min_sizes
    np.fill_diagonal(wm, 0.0)
    return wm


def _coverage_matrix(m: MutationMatrix, j: float) -> np.ndarray:
    e = m.entries.astype(np.int64)
    sizes = e.sum(axis=1)
    inter = e @ e.T
    d = sizes[:, None] + sizes[None, :] - 2 * inter
    return _cap_matrix(d, j)


def _network_matrix(
    genes: GeneCatalog, net: InteractionNetwork, j: float
) -> np.ndarray:
    universe: dict[str, int] = {}
    for g in genes.names:
        universe.setdefault(g, len(universe))
        for h in net.neighbors(g):
            universe.setdefault(h, len(universe))
    incidence = np.zeros((len(genes), len(universe)), dtype=np.int64)
    for i, g in enumerate(genes.names):
        incidence[i, universe[g]] = 1
        for h in net.neighbors(g):
            incidence[i, universe[h]] = 1
    inter = incidence @ incidence.T
    sizes = incidence.sum(axis=1)
    union = sizes[:, None] + sizes[None, :] - inter
    f = inter / union
    return _cap_matrix(f, j)


def _expression_matrix(genes: GeneCatalog, z: ExpressionMatrix, j: float) -> np.ndarray:
    if z.genes.names != genes.names:
        z = z.reindex(genes)
    dots = z.entries @ z.entries.T
    norms = np.sqrt(np.diagonal(dots).copy())
    denom = norms[:, None] * norms[None, :]
    g = np.divide(np.abs(dots), denom, out=np.zeros_like(dots), where=denom > 0)
    usable = z.present[:, None] & z.present[None, :]
    g = np.where(usable, g, 0.0)
    np.fill_diagonal(g, 0.0)
    return _cap_matrix(g, j)


def normalize_weights(
    wplus: np.ndarray, wminus: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Pairwise rescaling to enforce w+ + w- >= 1 off the diagonal.

    Pairs with w+ + w- < 1 get w- <- w-/(w+ + w-) and w+ <- 1 - w-; pairs
    with no signal at all (both zero) default to (1, 0) and are counted in
    a warning.
    """
    n = wplus.shape[0]
    off = ~np.eye(n, dtype=bool)
    total = wplus + wminus
    zero = (total == 0.0) & off
    low = (total < 1.0) & ~zero & off
    wp = wplus.copy()
    wm = wminus.copy()
    wm[low] = wminus[low] / total[low]
    wp[low] = 1.0 - wm[low]
    wp[zero] = 1.0
    wm[zero] = 0.0
    if zero.any():
        log.warning(
            "%d gene pairs carry no signal; defaulting them to (w+=1, w-=0)",
            int(zero.sum()) // 2,
        )
    return wp, wm


def build_weights(
    m: MutationMatrix,
    cfg: WeightConfig,
    net: Optional[InteractionNetwork] = None,
    z: Optional[ExpressionMatrix] = None,
) -> EdgeWeights:
    """Assemble the full weight matrices for the configured scheme."""
    if m.n_genes < 2:
        raise InputError("need at least two genes to build edge weights")
    components = cfg.components
    if "network" in components and net is None:
        raise InputError(f"scheme {cfg.scheme} requires an interaction network")
    if "expression" in components and z is None:
        raise InputError(f"scheme {cfg.scheme} requires expression data")

    wminus = _exclusivity_matrix(m, cfg.a)
    shares = (cfg.w1, cfg.w2, cfg.w3)
    wplus = shares[0] * _coverage_matrix(m, cfg.j_coverage)
    for share, component in zip(shares[1:], components[1:]):
        if component == "network":
            wplus = wplus + share * _network_matrix(m.genes, net, cfg.j_network)
        else:
            wplus = wplus + share * _expression_matrix(m.genes, z, cfg.j_expression)
    wplus = np.clip(wplus, 0.0, 1.0)
    np.fill_diagonal(wplus, 0.0)
    wp, wm = normalize_weights(wplus, wminus)
    return EdgeWeights(m.genes, wp, wm)


# ---------------------------------------------------------------------------
# weight-matrix dump / load


def write_weights_tsv(path: str, w: EdgeWeights, digits: int = 9) -> None:
    """One row per unordered pair: gene_u, gene_v, w+, w-."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("gene_u\tgene_v\tw_plus\tw_minus\n")
        for u in range(w.n):
            for v in range(u + 1, w.n):
                fh.write(
                    f"{w.genes.names[u]}\t{w.genes.names[v]}\t"
                    f"{w.wplus[u, v]:.{digits}g}\t{w.wminus[u, v]:.{digits}g}\n"
                )


def load_weights_tsv(path: str) -> EdgeWeights:
    """Read a weight dump back; requires every unordered pair exactly once.

    Values rounded for printing can undershoot w+ + w- >= 1 by a hair, so
    the standard rescaling is reapplied after parsing.
    """
    order: list[str] = []
    seen: dict[str, int] = {}
    rows: list[tuple[int, int, float, float]] = []
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n")
        if header.split("\t") != ["gene_u", "gene_v", "w_plus", "w_minus"]:
            raise InputError(f"{path}:1: unexpected header {header!r}")
        for lineno, line in enumerate(fh, start=2):
            if not line.strip():
                continue
            cells = line.rstrip("\n").split("\t")
            if len(cells) != 4:
                raise InputError(f"{path}:{lineno}: expected 4 columns, got {len(cells)}")
            gu, gv, wp_text, wm_text = cells
            for g in (gu, gv):
                if g not in seen:
                    seen[g] = len(order)
                    order.append(g)
            try:
                rows.append((seen[gu], seen[gv], float(wp_text), float(wm_text)))
            except ValueError as exc:
                raise InputError(f"{path}:{lineno}: {exc}") from exc
    n = len(order)
    if len(rows) != n * (n - 1) // 2:
        raise InputError(
            f"{path}: found {len(rows)} pairs over {n} genes; "
            f"expected {n * (n - 1) // 2}"
        )
    wplus = np.zeros((n, n))
    wminus = np.zeros((n, n))
    filled = np.zeros((n, n), dtype=bool)
    for u, v, wp_val, wm_val in rows:
        if u == v or filled[u, v]:
            raise InputError(f"{path}: duplicate or self pair {order[u]}/{order[v]}")
        wplus[u, v] = wplus[v, u] = wp_val
        wminus[u, v] = wminus[v, u] = wm_val
        filled[u, v] = filled[v, u] = True
    wp, wm = normalize_weights(np.clip(wplus, 0.0, 1.0), wminus)
    return EdgeWeights(GeneCatalog(tuple(order)), wp, wm)
