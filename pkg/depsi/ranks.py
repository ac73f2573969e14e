"""Rank statistics of the response: ranks, reverse counts and empirical CDFs."""
import logging
from dataclasses import dataclass

import numpy as np

from .exceptions import InvalidInputError
from .models import SeedSpec, Stream

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RankProfile:
    """
    r[i] = #{j: Y_j <= Y_i} and l[i] = #{j: Y_j >= Y_i} on the (tie-broken)
    order of Y, together with gstar[i] = r[i] / (n + 1).
    """
    r: np.ndarray
    l: np.ndarray
    gstar: np.ndarray
    tie_flag: bool
    is_constant: bool = False

    @property
    def n(self):
        return self.r.shape[0]

    @property
    def g(self):
        """Plain empirical CDF values r[i] / n."""
        return self.r / self.n


def rank_profile(y, seed=None):
    """
    Rank the response with a seeded strict ordering of tied values.

    Ties are broken by a random permutation drawn from the y-tie stream, so
    the profile is always a permutation of 1..n and L = n + 1 - R holds.
    """
    y = np.asarray(y, dtype=float)
    if y.ndim != 1:
        raise InvalidInputError("The response must be a vector.")
    n = y.shape[0]
    if n < 2:
        raise InvalidInputError(f"At least 2 observations are required, got {n}.")

    ordered = np.sort(y)
    tie_flag = bool(np.any(ordered[1:] == ordered[:-1]))
    if tie_flag:
        seed = SeedSpec.from_value(seed)
        jitter = seed.generator(Stream.Y_TIES).permutation(n)
        # last key is primary: sort by y, then by the random key
        order = np.lexsort((jitter, y))
        logger.debug("Broke ties among %d response values at random", n - np.unique(y).size)
    else:
        order = np.argsort(y, kind='stable')

    r = np.empty(n, dtype=np.int64)
    r[order] = np.arange(1, n + 1, dtype=np.int64)
    l = n + 1 - r
    for array in (r, l):
        array.setflags(write=False)
    return RankProfile(
        r=r,
        l=l,
        gstar=r / (n + 1),
        tie_flag=tie_flag,
        is_constant=bool(ordered[0] == ordered[-1]),
    )


def _sorted_sample(y):
    ordered = np.sort(np.asarray(y, dtype=float).ravel())
    if ordered.shape[0] == 0:
        raise InvalidInputError("The empirical distribution needs at least one observation.")
    return ordered


def ecdf(y, q):
    """(1/n) #{k: Y_k <= q}; q may be a scalar or an array."""
    ordered = _sorted_sample(y)
    counts = np.searchsorted(ordered, q, side='right')
    result = counts / ordered.shape[0]
    return float(result) if np.ndim(result) == 0 else result


def renormalized_ecdf(y, q):
    """(1/(n+1)) #{k: Y_k <= q}, which stays strictly below 1."""
    ordered = _sorted_sample(y)
    counts = np.searchsorted(ordered, q, side='right')
    result = counts / (ordered.shape[0] + 1)
    return float(result) if np.ndim(result) == 0 else result
