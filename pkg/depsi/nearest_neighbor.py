"""
Euclidean nearest-neighbour map over the covariate rows.

Indices are 0-based: ``n_of[i]`` is the row index of the nearest neighbour of
row i (never i itself). A k-d tree answers the bulk of the queries; rows whose
answer is ambiguous at the configured relative tolerance are recomputed by
brute force on exact squared distances, and exact ties are broken uniformly at
random from a per-row substream so serial and parallel runs agree.
"""
import logging
from dataclasses import dataclass

import numpy as np
from django.conf import settings
from scipy.spatial import cKDTree

from .exceptions import InvalidInputError
from .models import SeedSpec, Stream

logger = logging.getLogger(__name__)

# Maximal number of unit spheres touching a central one; bounds how many
# points can share the same nearest neighbour.
KISSING_NUMBERS = {1: 2, 2: 6, 3: 12, 4: 24, 8: 240, 24: 196560}

# Cap on the temporary (rows x n x d) difference block in brute-force search
_BRUTE_FORCE_BLOCK = 2 ** 22


@dataclass(frozen=True)
class NNIndex:
    n_of: np.ndarray
    tie_count: int
    indegree: np.ndarray

    @property
    def n(self):
        return self.n_of.shape[0]


@dataclass(frozen=True)
class IndegreeReport:
    dimension: int
    max_indegree: int
    bound: int
    exceeds: bool
    enforced: bool

    def to_dict(self):
        return {
            'dimension': self.dimension,
            'max_indegree': self.max_indegree,
            'bound': self.bound,
            'exceeds': self.exceeds,
            'enforced': self.enforced,
        }


def _as_matrix(x):
    x = np.asarray(x, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    if x.ndim != 2:
        raise InvalidInputError("Covariates must form an (n, d) matrix.")
    if x.shape[0] < 2:
        raise InvalidInputError(f"At least 2 observations are required, got {x.shape[0]}.")
    return x


def _squared_distances(x, rows):
    """Exact squared distances from each of ``rows`` to every row of x."""
    n, d = x.shape
    step = max(1, _BRUTE_FORCE_BLOCK // max(1, n * d))
    blocks = []
    for start in range(0, len(rows), step):
        chunk = rows[start:start + step]
        diff = x[chunk, None, :] - x[None, :, :]
        blocks.append(np.einsum('ijk,ijk->ij', diff, diff))
    return np.concatenate(blocks, axis=0) if blocks else np.empty((0, n))


def _resolve_by_brute_force(x, rows, seed, n_of):
    """Fill n_of for ``rows``; returns the number of rows that needed a random tie-break."""
    ties = 0
    for row, distances in zip(rows, _squared_distances(x, rows)):
        distances[row] = np.inf
        candidates = np.flatnonzero(distances == distances.min())
        if candidates.size == 1:
            n_of[row] = candidates[0]
        else:
            rng = seed.generator(Stream.NN_TIES, row)
            n_of[row] = candidates[rng.integers(candidates.size)]
            ties += 1
    return ties


def nn_index(x, seed=None, *, kdtree_max_dim=None, rtol=None, workers=1):
    """
    Nearest neighbour of every row of x under the Euclidean metric.

    Args:
        x: (n, d) covariates, n >= 2
        seed: SeedSpec (or int) feeding the tie-breaking streams
        kdtree_max_dim: above this dimension the brute-force search is used
        rtol: relative distance gap below which a k-d tree answer is re-checked
        workers: parallel workers for the k-d tree query phase

    Returns:
        NNIndex with n_of, tie_count and indegree
    """
    x = _as_matrix(x)
    seed = SeedSpec.from_value(seed)
    if kdtree_max_dim is None:
        kdtree_max_dim = getattr(settings, 'DEPSI_KDTREE_MAX_DIM', 16)
    if rtol is None:
        rtol = getattr(settings, 'DEPSI_NN_TIE_RTOL', 1e-12)

    n, d = x.shape
    n_of = np.empty(n, dtype=np.int64)

    if n == 2:
        n_of[:] = (1, 0)
        ambiguous = np.empty(0, dtype=np.int64)
    elif d <= kdtree_max_dim:
        tree = cKDTree(x)
        distances, indices = tree.query(x, k=3, workers=workers)
        own = np.arange(n)
        clean = (indices[:, 0] == own) & (distances[:, 2] > distances[:, 1] * (1.0 + rtol))
        n_of[clean] = indices[clean, 1]
        ambiguous = np.flatnonzero(~clean)
    else:
        ambiguous = np.arange(n)

    tie_count = _resolve_by_brute_force(x, ambiguous, seed, n_of) if ambiguous.size else 0
    if ambiguous.size:
        logger.debug(
            "Nearest neighbours: %d of %d rows resolved by exact search, %d random tie-breaks",
            ambiguous.size, n, tie_count,
        )

    indegree = np.bincount(n_of, minlength=n)
    n_of.setflags(write=False)
    indegree.setflags(write=False)
    return NNIndex(n_of=n_of, tie_count=int(tie_count), indegree=indegree)


def indegree_bound_check(nn, d):
    """
    Compare the largest indegree with the kissing-number bound for dimension d.

    Only the one-dimensional bound (2) is a hard guarantee, and only without
    distance ties; in higher dimensions the comparison is informational.
    """
    max_indegree = int(nn.indegree.max()) if nn.n else 0
    bound = KISSING_NUMBERS.get(int(d))
    return IndegreeReport(
        dimension=int(d),
        max_indegree=max_indegree,
        bound=bound,
        exceeds=bound is not None and max_indegree > bound,
        enforced=int(d) == 1 and nn.tie_count == 0,
    )
