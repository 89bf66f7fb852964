import numpy as np
import pytest

from mutclust.ingest import GeneCatalog, MutationMatrix, SampleCatalog


def mk_catalog(n: int) -> GeneCatalog:
    return GeneCatalog(tuple(f"v{i:03d}" for i in range(n)))


def mk_samples(n: int) -> SampleCatalog:
    return SampleCatalog(tuple(f"s{i:03d}" for i in range(n)))


def mk_mutation(patient_sets, n_samples: int) -> MutationMatrix:
    """Build a MutationMatrix from per-gene sample-index sets."""
    entries = np.zeros((len(patient_sets), n_samples), dtype=np.int8)
    for g, s in enumerate(patient_sets):
        entries[g, sorted(s)] = 1
    return MutationMatrix(mk_catalog(len(patient_sets)), mk_samples(n_samples), entries)


def random_probability_weights(rng: np.random.Generator, n: int):
    """Random EdgeWeights with w+ uniform and w- = 1 - w+."""
    from mutclust.weights import EdgeWeights

    wp = np.zeros((n, n))
    iu = np.triu_indices(n, k=1)
    vals = rng.uniform(0.0, 1.0, size=iu[0].size)
    wp[iu] = vals
    wp = wp + wp.T
    wm = 1.0 - wp
    np.fill_diagonal(wm, 0.0)
    return EdgeWeights(mk_catalog(n), wp, wm)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240817)
