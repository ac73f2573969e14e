"""
Bivariate normal CDF and the Gaussian copula built on it.

Owen's T-function representation:

    Phi2(h, k; rho) = 1/2 [Phi(h) + Phi(k)] - T(h, a_h) - T(k, a_k) - delta/2

with a_h = (k - rho h) / (h sqrt(1 - rho^2)), a_k symmetric and delta = 0
when h k > 0, else 1. scipy's owens_t is accurate to double precision.
"""
import numpy as np
from scipy.special import ndtr, ndtri, owens_t

from .exceptions import InvalidInputError

# Owen's formula divides by h and k; exact zeros are moved off the axis.
_AXIS_NUDGE = 1e-12


def bvn_cdf(h, k, rho):
    """P(Z1 <= h, Z2 <= k) for standard normals with correlation rho, |rho| < 1."""
    if not -1.0 < rho < 1.0:
        raise InvalidInputError(f"Correlation must lie in (-1, 1), got {rho}.")
    h, k = np.broadcast_arrays(np.asarray(h, dtype=float), np.asarray(k, dtype=float))
    h = np.where(h == 0.0, _AXIS_NUDGE, h)
    k = np.where(k == 0.0, _AXIS_NUDGE, k)

    root = np.sqrt(1.0 - rho * rho)
    with np.errstate(divide='ignore', invalid='ignore'):
        a_h = (k - rho * h) / (h * root)
        a_k = (h - rho * k) / (k * root)
    delta = np.where(h * k > 0.0, 0.0, 1.0)
    cdf = 0.5 * (ndtr(h) + ndtr(k) - delta) - owens_t(h, a_h) - owens_t(k, a_k)

    # infinite limits
    cdf = np.where(np.isneginf(h) | np.isneginf(k), 0.0, cdf)
    cdf = np.where(np.isposinf(h) & np.isfinite(k), ndtr(k), cdf)
    cdf = np.where(np.isposinf(k) & np.isfinite(h), ndtr(h), cdf)
    cdf = np.where(np.isposinf(h) & np.isposinf(k), 1.0, cdf)
    cdf = np.clip(cdf, 0.0, 1.0)
    return float(cdf) if cdf.ndim == 0 else cdf


def gaussian_copula_cdf(u, v, rho):
    """C(u, v) = Phi2(Phi^-1(u), Phi^-1(v); rho) with exact values on the unit-square boundary."""
    u, v = np.broadcast_arrays(np.asarray(u, dtype=float), np.asarray(v, dtype=float))
    if rho == 0.0:
        result = u * v
    else:
        interior = (u > 0.0) & (u < 1.0) & (v > 0.0) & (v < 1.0)
        result = np.minimum(u, v).astype(float)
        result = np.where((u == 0.0) | (v == 0.0), 0.0, result)
        if interior.any():
            inner = bvn_cdf(ndtri(u[interior]), ndtri(v[interior]), rho)
            result = result.copy()
            result[interior] = inner
    return float(result) if np.ndim(result) == 0 else result
