"""
Empirical estimator of the copula transform psi(A).

The estimate is stored as n atoms (u_k, v_k) = (G(Y_k), G(Y_N(k))) and read
either in lower-orthant form

    D_n(s, t) = (1/n) sum 1[u_k <= s] 1[v_k <= t]

or in survival-anchored form

    s + t - 1 + (1/n) sum 1[u_k > s] 1[v_k > t],

which coincide whenever the neighbour ranks sum to n(n+1)/2.
"""
import logging
from dataclasses import dataclass

import numpy as np
from django.conf import settings

from .exceptions import InvalidInputError
from .models import GridCopula, SeedSpec, Variant
from .nearest_neighbor import nn_index
from .ranks import rank_profile

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EmpiricalPsi:
    u: np.ndarray
    v: np.ndarray
    variant: str = Variant.DSTAR

    @property
    def n(self):
        return self.u.shape[0]

    @property
    def points(self):
        return np.column_stack((self.u, self.v))

    def evaluate(self, s, t, survival=False):
        """Step-function value at (s, t); scalars or broadcastable arrays in [0, 1]."""
        s = np.asarray(s, dtype=float)
        t = np.asarray(t, dtype=float)
        # negated so NaN fails too
        if not (np.all((s >= 0) & (s <= 1)) and np.all((t >= 0) & (t <= 1))):
            raise InvalidInputError("psi can only be evaluated on the unit square.")
        s, t = np.broadcast_arrays(s, t)
        if survival:
            upper = (self.u > s[..., None]) & (self.v > t[..., None])
            result = s + t - 1.0 + upper.mean(axis=-1)
        else:
            lower = (self.u <= s[..., None]) & (self.v <= t[..., None])
            result = lower.mean(axis=-1)
        return float(result) if result.ndim == 0 else result

    def to_grid(self, resolution=None, survival=False):
        """
        Exact values on the node grid i/N, j/N.

        Each atom is binned at the first node it does not exceed, so a 2-d
        cumulative sum of the counts reproduces the indicator definition.
        """
        if resolution is None:
            resolution = getattr(settings, 'DEPSI_GRID_RESOLUTION', 50)
        if resolution < 1:
            raise InvalidInputError(f"Grid resolution must be positive, got {resolution}.")
        nodes = np.arange(resolution + 1) / resolution
        iu = np.searchsorted(nodes, self.u, side='left')
        iv = np.searchsorted(nodes, self.v, side='left')
        counts = np.zeros((resolution + 1, resolution + 1))
        np.add.at(counts, (iu, iv), 1.0)
        lower = counts.cumsum(axis=0).cumsum(axis=1) / self.n
        if not survival:
            return GridCopula(resolution, lower)
        # #{u > s, v > t} = n - #{u <= s} - #{v <= t} + #{u <= s, v <= t}
        margin_u = lower[:, -1][:, None]
        margin_v = lower[-1, :][None, :]
        values = nodes[:, None] + nodes[None, :] - margin_u - margin_v + lower
        return GridCopula(resolution, values)

    # Exact integrals of the piecewise-constant step function

    def diagonal_integral(self, survival=False):
        if survival:
            return float(np.mean(np.minimum(self.u, self.v)))
        return float(1.0 - np.mean(np.maximum(self.u, self.v)))

    def volume_integral(self, survival=False):
        if survival:
            return float(np.mean(self.u * self.v))
        return float(np.mean((1.0 - self.u) * (1.0 - self.v)))

    def anti_diagonal_integral(self, survival=False):
        if survival:
            return float(np.mean(np.clip(self.u + self.v - 1.0, 0.0, None)))
        return float(np.mean(np.clip(1.0 - self.u - self.v, 0.0, None)))


def psi_from_profile(rp, nn, variant=Variant.DSTAR):
    """Assemble the atoms from a rank profile and a neighbour map of the same sample."""
    if rp.n != nn.n:
        raise InvalidInputError(
            f"Rank profile has {rp.n} entries but the neighbour map has {nn.n}."
        )
    scale = rp.gstar if variant == Variant.DSTAR else rp.g
    u = np.array(scale)
    v = np.array(scale[nn.n_of])
    u.setflags(write=False)
    v.setflags(write=False)
    return EmpiricalPsi(u=u, v=v, variant=Variant(variant))


def estimate_psi(ds, seed=None, variant=Variant.DSTAR):
    seed = SeedSpec.from_value(seed)
    rp = rank_profile(ds.y, seed)
    nn = nn_index(ds.x, seed)
    return psi_from_profile(rp, nn, variant)


def cn_dn_gap(ds, seed=None, resolution=None):
    """Sup over the node grid of |C_n - D_n| for one shared rank profile and neighbour map."""
    seed = SeedSpec.from_value(seed)
    rp = rank_profile(ds.y, seed)
    nn = nn_index(ds.x, seed)
    plain = psi_from_profile(rp, nn, Variant.CPLAIN).to_grid(resolution)
    renormalized = psi_from_profile(rp, nn, Variant.DSTAR).to_grid(resolution)
    gap = float(np.max(np.abs(plain.values - renormalized.values)))
    logger.debug("C_n/D_n gap %.3g at n=%d (max indegree %d)", gap, ds.n, nn.indegree.max())
    return gap
