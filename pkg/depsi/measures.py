"""
Copula functionals and the rank-form dependence estimators.

footrule, spearman_rho and gini_gamma accept a GridCopula, an EmpiricalPsi
(integrated exactly), anything with a ``to_grid`` method, or a vectorized
bivariate function. t_n, r2_n and q_n work on integer ranks so they are
exact up to one final division.
"""
import logging
from dataclasses import dataclass

import numpy as np
from django.conf import settings
from scipy.integrate import trapezoid

from .exceptions import DegenerateSampleError, InvalidInputError
from .models import GridCopula, SeedSpec, grid_from_function
from .nearest_neighbor import nn_index
from .psi import EmpiricalPsi, psi_from_profile
from .ranks import rank_profile

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MeasureReport:
    """
    Estimates of T, R^2 and Q for one sample, plus the residuals of the
    identities tying them to the empirical psi:

        identity_residual        |T_n - (n/(n-1)) phi(survival D_n) + 1/(n-1)|
        lower_identity_residual  same with the lower-orthant D_n
        r2_residual              |R^2_n - rho_S(D_n)|
        q_residual               |Q_n - gamma(survival D_n)|
        rank_sum_gap             sum R_N(i) - n(n+1)/2
    """
    t: float
    r2: float
    q: float
    n: int
    identity_residual: float
    lower_identity_residual: float
    r2_residual: float
    q_residual: float
    rank_sum_gap: int
    seed: int

    def to_dict(self):
        return {
            't': self.t,
            'r2': self.r2,
            'q': self.q,
            'n': self.n,
            'identity_residual': self.identity_residual,
            'lower_identity_residual': self.lower_identity_residual,
            'r2_residual': self.r2_residual,
            'q_residual': self.q_residual,
            'rank_sum_gap': self.rank_sum_gap,
            'seed': self.seed,
        }


def _as_grid(c, resolution=None):
    if isinstance(c, GridCopula):
        return c
    if resolution is None:
        resolution = getattr(settings, 'DEPSI_INTEGRATION_RESOLUTION', 200)
    if hasattr(c, 'to_grid'):
        return c.to_grid(resolution)
    if callable(c):
        return grid_from_function(c, resolution, check=False)
    raise InvalidInputError(f"Cannot integrate an object of type {type(c).__name__}.")


def footrule(c, survival=False, resolution=None):
    """phi(C) = 6 int C(t, t) dt - 2."""
    if isinstance(c, EmpiricalPsi):
        return 6.0 * c.diagonal_integral(survival) - 2.0
    grid = _as_grid(c, resolution)
    return float(6.0 * trapezoid(grid.diagonal, grid.nodes) - 2.0)


def spearman_rho(c, survival=False, resolution=None):
    """rho_S(C) = 12 int int C - 3."""
    if isinstance(c, EmpiricalPsi):
        return 12.0 * c.volume_integral(survival) - 3.0
    grid = _as_grid(c, resolution)
    inner = trapezoid(grid.values, grid.nodes, axis=1)
    return float(12.0 * trapezoid(inner, grid.nodes) - 3.0)


def gini_gamma(c, survival=False, resolution=None):
    """gamma(C) = 4 int [C(t, t) + C(t, 1 - t)] dt - 2."""
    if isinstance(c, EmpiricalPsi):
        return 4.0 * (c.diagonal_integral(survival) + c.anti_diagonal_integral(survival)) - 2.0
    grid = _as_grid(c, resolution)
    total = trapezoid(grid.diagonal, grid.nodes) + trapezoid(grid.anti_diagonal, grid.nodes)
    return float(4.0 * total - 2.0)


def _ranks(rp, nn):
    if rp.n != nn.n:
        raise InvalidInputError(
            f"Rank profile has {rp.n} entries but the neighbour map has {nn.n}."
        )
    if rp.is_constant:
        raise DegenerateSampleError(
            "The response is constant; T, R^2 and Q are undefined for constant Y."
        )
    r = rp.r.astype(np.int64)
    return rp.n, r, r[nn.n_of]


def t_n(rp, nn):
    """(sum n min(R_i, R_N(i)) - L_i^2) / sum L_i (n - L_i)."""
    n, r, rn = _ranks(rp, nn)
    l = rp.l.astype(np.int64)
    numerator = n * int(np.minimum(r, rn).sum()) - int((l * l).sum())
    denominator = int((l * (n - l)).sum())
    return numerator / denominator


def r2_n(rp, nn):
    n, r, rn = _ranks(rp, nn)
    cross = int((r * rn).sum())
    centring = int(rn.sum()) + int(r.sum()) - n * (n + 1)
    return 12.0 * cross / (n * (n + 1) ** 2) - 3.0 - 12.0 * centring / (n * (n + 1))


def q_n(rp, nn):
    n, r, rn = _ranks(rp, nn)
    reflected = int(np.abs(r + rn - (n + 1)).sum())
    spread = int(np.abs(r - rn).sum())
    centring = int(rn.sum()) + int(r.sum()) - n * (n + 1)
    return 2.0 * (reflected - spread) / (n * (n + 1)) + 4.0 * centring / (n * (n + 1))


def measure_report(ds, seed=None):
    """All three estimators for one sample plus their identity residuals."""
    seed = SeedSpec.from_value(seed)
    rp = rank_profile(ds.y, seed)
    nn = nn_index(ds.x, seed)
    t, r2, q = t_n(rp, nn), r2_n(rp, nn), q_n(rp, nn)

    n = ds.n
    psi = psi_from_profile(rp, nn)
    identity = abs(t - (n / (n - 1) * footrule(psi, survival=True) - 1.0 / (n - 1)))
    lower_identity = abs(t - (n / (n - 1) * footrule(psi) - 1.0 / (n - 1)))
    rank_sum_gap = int(rp.r[nn.n_of].sum()) - n * (n + 1) // 2
    logger.debug(
        "n=%d T=%.6f R2=%.6f Q=%.6f rank-sum gap %d, %d neighbour ties",
        n, t, r2, q, rank_sum_gap, nn.tie_count,
    )
    return MeasureReport(
        t=t,
        r2=r2,
        q=q,
        n=n,
        identity_residual=identity,
        lower_identity_residual=lower_identity,
        r2_residual=abs(r2 - spearman_rho(psi)),
        q_residual=abs(q - gini_gamma(psi, survival=True)),
        rank_sum_gap=rank_sum_gap,
        seed=seed.seed,
    )
