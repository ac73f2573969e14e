"""
Simulation harness: convergence campaigns against closed-form psi images,
estimator-versus-oracle comparisons and synthetic scenarios.
"""
import logging
from dataclasses import dataclass

import numpy as np
import pandas as pd
from django.conf import settings
from joblib import Parallel, delayed

from .exceptions import InvalidInputError
from .families import FamilySpec, closed_form_measures, psi_closed_form, sample
from .measures import measure_report
from .models import Dataset, SeedSpec, Stream, grid_from_function, grid_sup_distance
from .psi import estimate_psi

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ConvergenceRow:
    n: int
    replicate: int
    d_infty: float

    def to_dict(self):
        return {'n': self.n, 'replicate': self.replicate, 'd_infty': self.d_infty}


def _replicate_distance(fam, n, replicate, seed, target):
    child = seed.child(n, replicate)
    psi = estimate_psi(sample(fam, n, child), child)
    return ConvergenceRow(n, replicate, grid_sup_distance(psi.to_grid(target.resolution), target))


def convergence_campaign(fam, sizes, reps, resolution=None, seed=None, n_jobs=None):
    """
    d_inf distance between the estimated and the closed-form psi for every
    (sample size, replicate); replicate r at size n uses seed.child(n, r).

    Rows come back sorted by (n, replicate) whatever the schedule.
    """
    fam = FamilySpec.parse(fam)
    seed = SeedSpec.from_value(seed)
    sizes = sorted({int(n) for n in sizes})
    if not sizes or sizes[0] < 2:
        raise InvalidInputError("Sample sizes must all be at least 2.")
    if reps < 1:
        raise InvalidInputError(f"At least one replicate is required, got {reps}.")
    if n_jobs is None:
        n_jobs = getattr(settings, 'DEPSI_N_JOBS', 1)

    target = grid_from_function(psi_closed_form(fam), resolution)
    logger.info(
        "Convergence campaign for %s: sizes %s, %d replicates, grid %d",
        fam, sizes, reps, target.resolution,
    )
    # threads: workers share the configured Django settings
    rows = Parallel(n_jobs=n_jobs, prefer='threads')(
        delayed(_replicate_distance)(fam, n, r, seed, target)
        for n in sizes
        for r in range(reps)
    )
    return sorted(rows, key=lambda row: (row.n, row.replicate))


def rows_to_frame(rows):
    return pd.DataFrame([row.to_dict() for row in rows], columns=['n', 'replicate', 'd_infty'])


def summarize_convergence(rows):
    """Median, quartiles and max of d_inf per sample size."""
    frame = rows_to_frame(rows)
    grouped = frame.groupby('n')['d_infty']
    return pd.DataFrame({
        'median': grouped.median(),
        'q25': grouped.quantile(0.25),
        'q75': grouped.quantile(0.75),
        'max': grouped.max(),
    })


def compare_with_closed_form(fam, n, seed=None):
    """Estimates on one seeded family sample next to the closed-form targets."""
    fam = FamilySpec.parse(fam)
    seed = SeedSpec.from_value(seed)
    targets = closed_form_measures(fam)
    report = measure_report(sample(fam, n, seed), seed)
    return {
        'family': str(fam),
        'n': n,
        'seed': seed.seed,
        'estimate': report.to_dict(),
        'closed_form': targets.to_dict(),
        'error': {
            't': report.t - targets.t,
            'r2': report.r2 - targets.r2,
            'q': report.q - targets.q,
        },
    }


def tent(v):
    return 1.0 - np.abs(2.0 * np.asarray(v, dtype=float) - 1.0)


def tent_map_sample(n, seed=None):
    """
    V uniform, U = tent(V); the response V depends on U through a two-to-one
    map, so R^2 of V on U vanishes while T does not.
    """
    seed = SeedSpec.from_value(seed)
    v = seed.generator(Stream.SAMPLING, 0).random(n)
    return Dataset(tent(v)[:, None], v, ('u', 'v'))
