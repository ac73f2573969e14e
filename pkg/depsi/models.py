"""
Core data model: observations, bivariate grid copulas and the seeded
randomness contract shared by every randomized operation.

Nothing here is persisted; the classes are immutable value objects and the
choice enums reuse Django's TextChoices/IntegerChoices so forms and commands
can validate against them directly.
"""
from dataclasses import dataclass, field

import numpy as np
from django.conf import settings
from django.db import models

from .exceptions import (
    GridInvariantError,
    IncomparableGridsError,
    InvalidInputError,
)

MAX_SEED = 2 ** 64 - 1

# Structural tolerances for analytic grids
MARGIN_TOL = 1e-9
INCREMENT_TOL = 1e-12


class Stream(models.IntegerChoices):
    SAMPLING = 0, 'sampling'
    NN_TIES = 1, 'nn-tie-breaking'
    Y_TIES = 2, 'y-tie-breaking'


class Variant(models.TextChoices):
    DSTAR = 'dstar', 'D_n (renormalized ECDF)'
    CPLAIN = 'cplain', 'C_n (plain ECDF)'


class FamilyKind(models.TextChoices):
    GAUSSIAN = 'gauss', 'Gaussian equicorrelated'
    MARSHALL_OLKIN = 'mo', 'Marshall-Olkin'
    FRECHET = 'frechet', 'Frechet'
    EFGM = 'efgm', 'Eyraud-Farlie-Gumbel-Morgenstern'


class StopReason(models.TextChoices):
    EXHAUSTED = 'exhausted', 'Exhausted'
    NO_IMPROVEMENT = 'no_improvement', 'NoImprovement'
    MAX_STEPS = 'max_steps', 'MaxSteps'


class OutputFormat(models.TextChoices):
    JSON = 'json', 'JSON'
    CSV = 'csv', 'CSV'
    TABLE = 'table', 'Text table'


@dataclass(frozen=True)
class SeedSpec:
    """
    Root seed plus a derivation path.

    Each randomized operation asks for a generator on a named stream; the
    stream code and any extra key (row index, replicate, ...) are appended to
    the SeedSequence spawn key, so equal SeedSpec and inputs always give
    bit-identical draws regardless of evaluation order.

    Usage:
        seed = SeedSpec(42)
        rng = seed.generator(Stream.NN_TIES, 17)
        child = seed.child(1000, 3)   # replicate 3 at n=1000
    """
    seed: int
    path: tuple = ()

    def __post_init__(self):
        if isinstance(self.seed, bool) or not isinstance(self.seed, (int, np.integer)):
            raise InvalidInputError(f"Seed must be an integer, got {self.seed!r}.")
        if not 0 <= int(self.seed) <= MAX_SEED:
            raise InvalidInputError(f"Seed must lie in [0, 2**64 - 1], got {self.seed}.")
        object.__setattr__(self, 'seed', int(self.seed))
        object.__setattr__(self, 'path', tuple(int(k) for k in self.path))

    @classmethod
    def from_value(cls, seed=None):
        """Build from an explicit seed, falling back to settings.DEPSI_SEED."""
        if isinstance(seed, cls):
            return seed
        if seed is None:
            seed = getattr(settings, 'DEPSI_SEED', 0)
        return cls(seed)

    def child(self, *key):
        return SeedSpec(self.seed, self.path + tuple(int(k) for k in key))

    def generator(self, stream, *key):
        spawn_key = self.path + (int(stream),) + tuple(int(k) for k in key)
        sequence = np.random.SeedSequence(self.seed, spawn_key=spawn_key)
        return np.random.Generator(np.random.PCG64(sequence))


@dataclass(frozen=True)
class Dataset:
    """
    n observations of (X_1..X_d, Y).

    ``x`` is always stored as an (n, d) float array and ``y`` as an (n,)
    float array; ``column_names`` holds d+1 labels, response last.
    """
    x: np.ndarray
    y: np.ndarray
    column_names: tuple = field(default=())

    def __post_init__(self):
        x = np.array(self.x, dtype=float)
        y = np.array(self.y, dtype=float)
        if x.ndim == 1:
            x = x[:, None]
        if x.ndim != 2 or y.ndim != 1:
            raise InvalidInputError("x must be an (n, d) matrix and y a vector.")
        if x.shape[0] != y.shape[0]:
            raise InvalidInputError(
                f"x has {x.shape[0]} rows but y has {y.shape[0]} entries."
            )
        n, d = x.shape
        if n < 2:
            raise InvalidInputError(f"At least 2 observations are required, got {n}.")
        if d < 1:
            raise InvalidInputError("At least one covariate column is required.")
        if not (np.isfinite(x).all() and np.isfinite(y).all()):
            raise InvalidInputError("Observations must be finite (no NaN or Inf).")

        names = tuple(self.column_names)
        if not names:
            names = tuple(f'x{k + 1}' for k in range(d)) + ('y',)
        if len(names) != d + 1:
            raise InvalidInputError(
                f"Expected {d + 1} column names, got {len(names)}."
            )

        x.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, 'x', x)
        object.__setattr__(self, 'y', y)
        object.__setattr__(self, 'column_names', names)

    @property
    def n(self):
        return self.x.shape[0]

    @property
    def d(self):
        return self.x.shape[1]

    @property
    def x_names(self):
        return self.column_names[:-1]

    @property
    def y_name(self):
        return self.column_names[-1]

    def select(self, columns):
        """Dataset restricted to the given covariate column indices."""
        columns = [int(c) for c in columns]
        if not columns:
            raise InvalidInputError("Select at least one covariate column.")
        names = tuple(self.column_names[c] for c in columns) + (self.y_name,)
        return Dataset(self.x[:, columns], self.y, names)


@dataclass(frozen=True)
class GridCopula:
    """Bivariate copula sampled on the (N+1) x (N+1) node grid i/N, j/N."""
    resolution: int
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        size = int(self.resolution) + 1
        if self.resolution < 1 or values.shape != (size, size):
            raise InvalidInputError(
                f"Grid of resolution {self.resolution} needs {size}x{size} values, "
                f"got shape {values.shape}."
            )
        values.setflags(write=False)
        object.__setattr__(self, 'resolution', int(self.resolution))
        object.__setattr__(self, 'values', values)

    @property
    def nodes(self):
        return np.arange(self.resolution + 1) / self.resolution

    @property
    def diagonal(self):
        return np.diagonal(self.values).copy()

    @property
    def anti_diagonal(self):
        # C(t, 1 - t) at t = i/N is values[i][N - i]
        return np.fliplr(self.values).diagonal().copy()

    def check_invariants(self, margin_tol=MARGIN_TOL, increment_tol=INCREMENT_TOL):
        """Raise GridInvariantError naming the first cell that breaks a copula property."""
        values = self.values
        nodes = self.nodes

        checks = (
            ('grounded in s', np.abs(values[0, :])),
            ('grounded in t', np.abs(values[:, 0])),
            ('uniform margin C(1, t) = t', np.abs(values[-1, :] - nodes)),
            ('uniform margin C(s, 1) = s', np.abs(values[:, -1] - nodes)),
        )
        for label, deviation in checks:
            bad = np.flatnonzero(deviation > margin_tol)
            if bad.size:
                k = int(bad[0])
                raise GridInvariantError(
                    f"Grid not a copula ({label}) at node index {k}: "
                    f"deviation {deviation[k]:.3g} exceeds {margin_tol:g}."
                )

        increments = values[1:, 1:] - values[1:, :-1] - values[:-1, 1:] + values[:-1, :-1]
        if increments.min() < -increment_tol:
            i, j = np.unravel_index(np.argmin(increments), increments.shape)
            raise GridInvariantError(
                f"Grid not 2-increasing on cell ({i}, {j}): "
                f"increment {increments[i, j]:.3g}."
            )
        return self


def grid_sup_distance(a, b):
    """Sup-norm distance between two grids of the same resolution."""
    if a.resolution != b.resolution:
        raise IncomparableGridsError(
            f"Cannot compare grids of resolution {a.resolution} and {b.resolution}."
        )
    return float(np.max(np.abs(a.values - b.values)))


def grid_from_function(f, resolution=None, check=True):
    """
    Sample a vectorized bivariate function f(s, t) on the node grid.

    With ``check`` the result is validated a posteriori as a copula.
    """
    if resolution is None:
        resolution = getattr(settings, 'DEPSI_GRID_RESOLUTION', 50)
    if resolution < 1:
        raise InvalidInputError(f"Grid resolution must be positive, got {resolution}.")
    nodes = np.arange(resolution + 1) / resolution
    s, t = np.meshgrid(nodes, nodes, indexing='ij')
    values = np.broadcast_to(np.asarray(f(s, t), dtype=float), s.shape)
    grid = GridCopula(resolution, values)
    if check:
        grid.check_invariants()
    return grid
