"""Input parsing and matrix construction.

Builds the binary mutation matrix from alteration + copy-number calls,
z-scores expression rows, filters genes by alteration-frequency percentile,
and loads the gene interaction network and driver list.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import InputError

log = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# catalogs


@dataclass(frozen=True)
class GeneCatalog:
    """Ordered, unique gene identifiers with name -> row lookup."""

    names: tuple[str, ...]
    index: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not self.names:
            raise InputError("gene catalog is empty")
        idx: dict[str, int] = {}
        for i, name in enumerate(self.names):
            if not name:
                raise InputError(f"empty gene name at position {i}")
            if name in idx:
                raise InputError(f"duplicate gene name {name!r}")
            idx[name] = i
        object.__setattr__(self, "index", idx)

    def __len__(self) -> int:
        return len(self.names)

    def __contains__(self, name: str) -> bool:
        return name in self.index

    def subset(self, keep: Sequence[int]) -> "GeneCatalog":
        return GeneCatalog(tuple(self.names[i] for i in keep))


@dataclass(frozen=True)
class SampleCatalog:
    """Ordered, unique sample identifiers."""

    ids: tuple[str, ...]

    def __post_init__(self):
        if not self.ids:
            raise InputError("sample catalog is empty")
        seen = set()
        for i, sid in enumerate(self.ids):
            if not sid:
                raise InputError(f"empty sample id at position {i}")
            if sid in seen:
                raise InputError(f"duplicate sample id {sid!r}")
            seen.add(sid)

    def __len__(self) -> int:
        return len(self.ids)


# ---------------------------------------------------------------------------
# matrices


def _check_dims(entries: np.ndarray, genes: GeneCatalog, samples: SampleCatalog):
    if entries.shape != (len(genes), len(samples)):
        raise InputError(
            f"matrix shape {entries.shape} does not match catalogs "
            f"({len(genes)} genes x {len(samples)} samples)"
        )


@dataclass(frozen=True, eq=False)
class AlterationMatrix:
    """Binary gene x sample alteration calls."""

    genes: GeneCatalog
    samples: SampleCatalog
    entries: np.ndarray  # int8, {0,1}

    def __post_init__(self):
        _check_dims(self.entries, self.genes, self.samples)
        if not np.isin(self.entries, (0, 1)).all():
            raise InputError("alteration entries must be 0 or 1")


@dataclass(frozen=True, eq=False)
class CnvMatrix:
    """Signed integer gene x sample copy-number deviations from baseline."""

    genes: GeneCatalog
    samples: SampleCatalog
    entries: np.ndarray  # integer

    def __post_init__(self):
        _check_dims(self.entries, self.genes, self.samples)


@dataclass(frozen=True, eq=False)
class MutationMatrix:
    """Binary mutation calls (alteration or significant CNV) per gene/sample.

    ``patient_sets[g]`` is the frozen set of sample indices where gene ``g``
    carries a mutation; it is derived from ``entries`` at construction.
    """

    genes: GeneCatalog
    samples: SampleCatalog
    entries: np.ndarray  # int8, {0,1}
    patient_sets: tuple[frozenset[int], ...] = field(init=False, repr=False)

    def __post_init__(self):
        _check_dims(self.entries, self.genes, self.samples)
        if not np.isin(self.entries, (0, 1)).all():
            raise InputError("mutation entries must be 0 or 1")
        sets = tuple(
            frozenset(np.flatnonzero(row).tolist()) for row in self.entries
        )
        object.__setattr__(self, "patient_sets", sets)

    @property
    def n_genes(self) -> int:
        return len(self.genes)

    @property
    def n_samples(self) -> int:
        return len(self.samples)


@dataclass(frozen=True, eq=False)
class RawExpression:
    """Expression values as loaded: NA cells imputed to the row mean.

    ``forced_absent[g]`` is True when more than half of the row was NA, in
    which case the gene is dropped from expression-based weights.
    """

    genes: GeneCatalog
    samples: SampleCatalog
    entries: np.ndarray  # float64
    forced_absent: np.ndarray  # bool per gene

    def __post_init__(self):
        _check_dims(self.entries, self.genes, self.samples)


@dataclass(frozen=True, eq=False)
class ExpressionMatrix:
    """Row-standardized expression z-scores plus per-gene availability."""

    genes: GeneCatalog
    samples: SampleCatalog
    entries: np.ndarray  # float64; absent rows are zero
    present: np.ndarray  # bool per gene

    def __post_init__(self):
        _check_dims(self.entries, self.genes, self.samples)
        if self.present.shape != (len(self.genes),):
            raise InputError("present flags do not match gene catalog")

    def reindex(self, catalog: GeneCatalog) -> "ExpressionMatrix":
        """Project onto another gene catalog; unknown genes become absent."""
        n_p = len(self.samples)
        entries = np.zeros((len(catalog), n_p))
        present = np.zeros(len(catalog), dtype=bool)
        for i, name in enumerate(catalog.names):
            j = self.genes.index.get(name)
            if j is not None and self.present[j]:
                entries[i] = self.entries[j]
                present[i] = True
        return ExpressionMatrix(catalog, self.samples, entries, present)


class InteractionNetwork:
    """Sparse undirected gene graph keyed by gene name.

    Neighbor lists are sorted and exclude self-loops and duplicates; genes
    not in the network behave as isolated vertices.
    """

    def __init__(self, edges: Iterable[tuple[str, str]]):
        adj: dict[str, set[str]] = {}
        for u, v in edges:
            if u == v:
                raise InputError(f"self-loop on {u!r}")
            adj.setdefault(u, set()).add(v)
            adj.setdefault(v, set()).add(u)
        self._adj: dict[str, tuple[str, ...]] = {
            g: tuple(sorted(ns)) for g, ns in adj.items()
        }

    @property
    def genes(self) -> tuple[str, ...]:
        return tuple(sorted(self._adj))

    def __contains__(self, gene: str) -> bool:
        return gene in self._adj

    def neighbors(self, gene: str) -> tuple[str, ...]:
        return self._adj.get(gene, ())

    def degree(self, gene: str) -> int:
        return len(self._adj.get(gene, ()))

    def n_edges(self) -> int:
        return sum(len(ns) for ns in self._adj.values()) // 2


# ---------------------------------------------------------------------------
# core operations


def nearest_rank_percentile(values, percentile: float):
    """Percentile by nearest rank: the value at index ceil(p/100 * n)
    (1-based) of the ascending sorted list.
    """
    if not 0.0 < percentile <= 100.0:
        raise InputError(f"percentile must be in (0, 100], got {percentile}")
    arr = np.sort(np.asarray(values).ravel())
    if arr.size == 0:
        raise InputError("percentile of an empty collection")
    k = math.ceil(percentile / 100.0 * arr.size)
    return arr[k - 1]


def merge_cnv(
    a: AlterationMatrix, c: CnvMatrix, l_cnv: int, h_cnv: int
) -> MutationMatrix:
    """Combine alteration calls with thresholded copy-number deviations.

    A cell is unmutated only when it has no alteration and its copy-number
    change lies strictly inside (l_cnv, h_cnv); anything else counts as a
    mutation.
    """
    if a.genes.names != c.genes.names or a.samples.ids != c.samples.ids:
        raise InputError("alteration and CNV matrices have different catalogs")
    if not l_cnv < h_cnv:
        raise InputError(f"need l_cnv < h_cnv, got ({l_cnv}, {h_cnv})")
    quiet = (a.entries == 0) & (c.entries > l_cnv) & (c.entries < h_cnv)
    entries = np.where(quiet, 0, 1).astype(np.int8)
    return MutationMatrix(a.genes, a.samples, entries)


def zscore_matrix(raw: np.ndarray, ddof: int = 1) -> tuple[np.ndarray, np.ndarray]:
    """Row-standardize a gene x sample matrix.

    Returns ``(z, present)``; rows with fewer than two samples or zero
    variance are marked absent (zeroed) instead of aborting.
    """
    raw = np.asarray(raw, dtype=float)
    if raw.ndim != 2:
        raise InputError("expected a 2-d gene x sample matrix")
    n_genes, n_samples = raw.shape
    present = np.ones(n_genes, dtype=bool)
    if n_samples < 2:
        present[:] = False
        return np.zeros_like(raw), present
    mu = raw.mean(axis=1, keepdims=True)
    sigma = raw.std(axis=1, ddof=ddof, keepdims=True)
    flat = sigma.ravel() == 0.0
    if flat.any():
        log.warning("%d zero-variance expression rows marked absent", flat.sum())
        present[flat] = False
    sigma[flat.reshape(-1, 1)] = 1.0  # avoid divide-by-zero; rows zeroed below
    z = (raw - mu) / sigma
    z[~present] = 0.0
    return z, present


def zscore(raw: RawExpression, ddof: int = 1) -> ExpressionMatrix:
    """Z-score loaded expression data, honoring the NA-absence flags."""
    z, present = zscore_matrix(raw.entries, ddof=ddof)
    present = present & ~raw.forced_absent
    z = np.where(present[:, None], z, 0.0)
    return ExpressionMatrix(raw.genes, raw.samples, z, present)


def filter_top_genes(
    m: MutationMatrix, percentile: float
) -> tuple[GeneCatalog, MutationMatrix]:
    """Keep genes whose mutation count reaches the given percentile.

    The threshold is the nearest-rank percentile of the per-gene mutation
    counts; ties at the threshold are all retained.  Genes with no mutated
    sample are never retained.
    """
    counts = m.entries.sum(axis=1)
    threshold = max(int(nearest_rank_percentile(counts, percentile)), 1)
    keep = np.flatnonzero(counts >= threshold)
    if keep.size == 0:
        raise InputError(
            f"no gene reaches the {percentile} percentile threshold ({threshold})"
        )
    catalog = m.genes.subset(keep)
    filtered = MutationMatrix(catalog, m.samples, m.entries[keep])
    return catalog, filtered


# ---------------------------------------------------------------------------
# file I/O

_NA_TOKEN = "NA"


def _parse_header(path: str, line: str) -> SampleCatalog:
    cells = line.rstrip("\n").split("\t")
    if len(cells) < 2:
        raise InputError(f"{path}:1: header needs at least one sample column")
    return SampleCatalog(tuple(cells[1:]))


def _load_tsv(
    path: str, parse_cell: Callable[[str], float]
) -> tuple[GeneCatalog, SampleCatalog, list[list[float]]]:
    names: list[str] = []
    rows: list[list[float]] = []
    with open(path, encoding="utf-8") as fh:
        header = fh.readline()
        if not header:
            raise InputError(f"{path}:1: empty file")
        samples = _parse_header(path, header)
        for lineno, line in enumerate(fh, start=2):
            if not line.strip():
                continue
            cells = line.rstrip("\n").split("\t")
            if len(cells) != len(samples) + 1:
                raise InputError(
                    f"{path}:{lineno}: expected {len(samples) + 1} columns, "
                    f"got {len(cells)}"
                )
            names.append(cells[0])
            try:
                rows.append([parse_cell(c) for c in cells[1:]])
            except ValueError as exc:
                raise InputError(f"{path}:{lineno}: {exc}") from exc
    if not rows:
        raise InputError(f"{path}: no data rows")
    try:
        genes = GeneCatalog(tuple(names))
    except InputError as exc:
        raise InputError(f"{path}: {exc}") from exc
    return genes, samples, rows


def _parse_binary(cell: str) -> int:
    value = int(cell)
    if value not in (0, 1):
        raise ValueError(f"expected 0 or 1, got {cell!r}")
    return value


def _parse_int(cell: str) -> int:
    return int(cell)


def load_alteration(path: str) -> AlterationMatrix:
    genes, samples, rows = _load_tsv(path, _parse_binary)
    return AlterationMatrix(genes, samples, np.array(rows, dtype=np.int8))


def load_cnv(path: str) -> CnvMatrix:
    genes, samples, rows = _load_tsv(path, _parse_int)
    return CnvMatrix(genes, samples, np.array(rows, dtype=np.int64))


def load_expression(path: str, max_na_fraction: float = 0.5) -> RawExpression:
    """Load expression values; NA cells become the row mean of the rest.

    Rows that are NA in more than ``max_na_fraction`` of samples are flagged
    absent and excluded from expression-based weights downstream.
    """

    def parse(cell: str) -> float:
        if cell == _NA_TOKEN:
            return math.nan
        return float(cell)

    genes, samples, rows = _load_tsv(path, parse)
    entries = np.array(rows, dtype=float)
    na = np.isnan(entries)
    forced_absent = na.mean(axis=1) > max_na_fraction
    if forced_absent.any():
        log.warning(
            "%d expression rows exceed the NA limit and are marked absent",
            int(forced_absent.sum()),
        )
    with np.errstate(invalid="ignore"):
        row_means = np.nanmean(np.where(na.all(axis=1)[:, None], 0.0, entries), axis=1)
    entries = np.where(na, row_means[:, None], entries)
    return RawExpression(genes, samples, entries, forced_absent)


def load_network(path: str) -> InteractionNetwork:
    edges: list[tuple[str, str]] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            fields = stripped.split()
            if len(fields) != 2:
                raise InputError(
                    f"{path}:{lineno}: expected two gene names, got {len(fields)} fields"
                )
            u, v = fields
            if u == v:
                raise InputError(f"{path}:{lineno}: self-loop on {u!r}")
            edges.append((u, v))
    return InteractionNetwork(edges)


def load_drivers(path: str) -> tuple[str, ...]:
    drivers: list[str] = []
    seen = set()
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            name = line.strip()
            if not name or name in seen:
                continue
            seen.add(name)
            drivers.append(name)
    if not drivers:
        raise InputError(f"{path}: empty driver list")
    return tuple(drivers)


def write_matrix_tsv(
    path: str,
    genes: GeneCatalog,
    samples: SampleCatalog,
    entries: np.ndarray,
    fmt: str = "%d",
) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("gene\t" + "\t".join(samples.ids) + "\n")
        for name, row in zip(genes.names, entries):
            fh.write(name + "\t" + "\t".join(fmt % v for v in row) + "\n")
