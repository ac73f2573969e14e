"""
Checkerboard approximations and the brute-force psi oracle.

A checkerboard density of resolution N spreads mass uniformly inside each
cell of the N-grid. psi maps a (d+1)-variate checkerboard to a bivariate one
of the same resolution:

    mass(j, k) = sum_i mu(S_i x T_j) mu(S_i x T_k) / mu(S_i x I)

where S_i runs over the covariate cells and T_j over the response slabs.
"""
import logging
from dataclasses import dataclass

import numpy as np
from django.conf import settings

from .exceptions import InvalidInputError, NoClosedFormError
from .families import FamilySpec, family_copula, psi_closed_form
from .models import FamilyKind, GridCopula, grid_from_function, grid_sup_distance

logger = logging.getLogger(__name__)

TOTAL_MASS_TOL = 1e-12
SLAB_MASS_TOL = 1e-9


@dataclass(frozen=True)
class CheckerboardDensity:
    """
    Cell masses of a (d+1)-variate checkerboard.

    ``masses`` has shape (N**d, N): rows enumerate covariate cells in C order,
    columns the response slabs.
    """
    resolution: int
    d: int
    masses: np.ndarray

    def __post_init__(self):
        masses = np.array(self.masses, dtype=float)
        expected = (self.resolution ** self.d, self.resolution)
        if masses.shape != expected:
            raise InvalidInputError(f"Checkerboard masses must have shape {expected}, got {masses.shape}.")
        if masses.min() < 0.0:
            raise InvalidInputError("Checkerboard masses must be nonnegative.")
        masses.setflags(write=False)
        object.__setattr__(self, 'masses', masses)

    def check_margins(self):
        """Total mass 1 and every axis slab of mass 1/N."""
        N, d = self.resolution, self.d
        total = self.masses.sum()
        if abs(total - 1.0) > TOTAL_MASS_TOL:
            raise InvalidInputError(f"Checkerboard total mass is {total!r}, expected 1.")
        cube = self.masses.reshape((N,) * (d + 1))
        for axis in range(d + 1):
            others = tuple(a for a in range(d + 1) if a != axis)
            slabs = cube.sum(axis=others)
            worst = int(np.argmax(np.abs(slabs - 1.0 / N)))
            if abs(slabs[worst] - 1.0 / N) > SLAB_MASS_TOL:
                label = 'response' if axis == d else f'covariate {axis + 1}'
                raise InvalidInputError(
                    f"Margin violation on the {label} axis, slab {worst}: "
                    f"mass {slabs[worst]:.12g} instead of {1.0 / N:.12g}."
                )
        return self


@dataclass(frozen=True)
class CheckerboardCopula:
    """Bivariate checkerboard copula; ``masses[j, k]`` is the mass of cell T_j x T_k."""
    masses: np.ndarray

    @property
    def resolution(self):
        return self.masses.shape[0]

    def _weights(self, s):
        # w_j(s) = fraction of cell j lying below s
        s = np.atleast_1d(np.asarray(s, dtype=float))
        cells = np.arange(self.resolution)
        return np.clip(self.resolution * s[:, None] - cells[None, :], 0.0, 1.0)

    def evaluate(self, s, t):
        s_arr, t_arr = np.broadcast_arrays(np.asarray(s, dtype=float), np.asarray(t, dtype=float))
        ws = self._weights(s_arr.ravel())
        wt = self._weights(t_arr.ravel())
        values = np.einsum('pj,jk,pk->p', ws, self.masses, wt).reshape(s_arr.shape)
        return float(values) if values.ndim == 0 else values

    def __call__(self, s, t):
        return self.evaluate(s, t)

    def to_grid(self, resolution=None):
        if resolution is None:
            resolution = getattr(settings, 'DEPSI_GRID_RESOLUTION', 50)
        nodes = np.arange(resolution + 1) / resolution
        weights = self._weights(nodes)
        return GridCopula(resolution, weights @ self.masses @ weights.T)

    def spearman_rho(self):
        """Exact rho_S: mass is uniform within cells, so int int C = E[(1-U)(1-V)] factorizes per cell."""
        centres = (np.arange(self.resolution) + 0.5) / self.resolution
        complement = 1.0 - centres
        return float(12.0 * complement @ self.masses @ complement - 3.0)


def _efgm_masses(alpha, d, N):
    # density 1 + alpha prod(1 - 2u_i)(1 - 2v); its cell mean factorizes
    centres = 1.0 - (2.0 * np.arange(N) + 1.0) / N
    interaction = centres
    for _ in range(d):
        interaction = np.multiply.outer(centres, interaction)
    cube = (1.0 + alpha * interaction) / N ** (d + 1)
    return cube.reshape(N ** d, N)


def discretize(fam, resolution):
    """Exact inclusion-exclusion cell masses of the family's copula at resolution N."""
    fam = FamilySpec.parse(fam)
    N = int(resolution)
    if N < 1:
        raise InvalidInputError(f"Checkerboard resolution must be positive, got {resolution}.")
    if fam.kind == FamilyKind.EFGM:
        masses = _efgm_masses(fam.alpha, fam.d, N)
        return CheckerboardDensity(N, fam.d, masses)
    if fam.d != 1:
        raise NoClosedFormError(f"Cannot discretize {fam}: cell masses need a bivariate CDF.")
    nodes = np.arange(N + 1) / N
    s, t = np.meshgrid(nodes, nodes, indexing='ij')
    cdf = np.asarray(family_copula(fam)(s, t), dtype=float)
    masses = np.diff(np.diff(cdf, axis=0), axis=1)
    # rounding in the CDF can leave masses of order -1e-17
    masses = np.clip(masses, 0.0, None)
    return CheckerboardDensity(N, 1, masses)


def psi_checkerboard(cb):
    """Bivariate checkerboard copula psi(CB_N(A))."""
    cb.check_margins()
    masses = cb.masses
    row_mass = masses.sum(axis=1)
    inverse = np.divide(1.0, row_mass, out=np.zeros_like(row_mass), where=row_mass > 0.0)
    out = masses.T @ (inverse[:, None] * masses)
    return CheckerboardCopula(masses=out)


def oracle_distances(fam, resolutions=(10, 40, 160), grid_resolution=None):
    """
    grid_sup_distance between the checkerboard oracle and the closed-form psi
    for each checkerboard resolution.
    """
    fam = FamilySpec.parse(fam)
    target = grid_from_function(psi_closed_form(fam), grid_resolution)
    distances = []
    for N in resolutions:
        oracle = psi_checkerboard(discretize(fam, N)).to_grid(target.resolution)
        distances.append(grid_sup_distance(oracle, target))
        logger.debug("Checkerboard oracle for %s at N=%d: d_inf=%.4g", fam, N, distances[-1])
    return distances
