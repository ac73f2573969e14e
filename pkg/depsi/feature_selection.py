"""
Greedy hierarchical forward selection of covariates by the estimated T.

Each step adds the unselected column whose addition maximizes t_n of Y on
the selected set; the step is recorded (with r2_n on the same set) and the
search stops once the gain over the previous step falls below the threshold.
"""
import logging
from dataclasses import dataclass, field

import pandas as pd
from django.conf import settings
from joblib import Parallel, delayed

from .exceptions import InvalidInputError
from .measures import r2_n, t_n
from .models import SeedSpec, StopReason
from .nearest_neighbor import nn_index
from .ranks import rank_profile

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SelectionStep:
    column: int
    name: str
    t: float
    r2: float
    increment: float

    def to_dict(self):
        return {
            'column': self.column,
            'name': self.name,
            't': self.t,
            'r2': self.r2,
            'increment': self.increment,
        }


@dataclass(frozen=True)
class SelectionTrace:
    steps: tuple
    stop_reason: str
    threshold: float
    candidates: tuple = field(default=(), compare=False)

    @property
    def columns(self):
        return [step.column for step in self.steps]

    def to_dict(self):
        return {
            'steps': [step.to_dict() for step in self.steps],
            'stop_reason': str(self.stop_reason),
            'threshold': self.threshold,
        }

    def to_frame(self):
        """Table with one row per step: position, variable, T and R^2 estimates."""
        return pd.DataFrame(
            {
                'position': range(1, len(self.steps) + 1),
                'variable': [step.name for step in self.steps],
                'T estimate': [step.t for step in self.steps],
                'R2 estimate': [step.r2 for step in self.steps],
            }
        )

    def to_table(self):
        return self.to_frame().to_string(index=False, float_format=lambda v: f'{v:.4f}')


def _score(x, columns, rp, seed):
    nn = nn_index(x[:, columns], seed)
    return t_n(rp, nn), nn


def select_features(ds, seed=None, improvement_threshold=None, max_steps=None, n_jobs=None):
    """
    Args:
        ds: Dataset with d candidate covariates
        seed: SeedSpec shared by every estimate (ranks and neighbour ties)
        improvement_threshold: minimal gain in T that keeps the search going
        max_steps: cap on the number of recorded steps (default d)
        n_jobs: joblib workers evaluating the candidates of one step

    Returns:
        SelectionTrace
    """
    seed = SeedSpec.from_value(seed)
    if improvement_threshold is None:
        improvement_threshold = getattr(settings, 'DEPSI_FEATURE_THRESHOLD', 0.01)
    if improvement_threshold < 0:
        raise InvalidInputError(f"Improvement threshold must be nonnegative, got {improvement_threshold}.")
    if max_steps is None:
        max_steps = ds.d
    if max_steps < 1:
        raise InvalidInputError(f"max_steps must be at least 1, got {max_steps}.")
    if n_jobs is None:
        n_jobs = getattr(settings, 'DEPSI_N_JOBS', 1)

    # ranks of Y do not depend on the covariate set
    rp = rank_profile(ds.y, seed)
    selected, steps, history = [], [], []
    previous = 0.0
    stop_reason = StopReason.EXHAUSTED

    with Parallel(n_jobs=n_jobs, prefer='threads') as parallel:
        while True:
            remaining = [c for c in range(ds.d) if c not in selected]
            if not remaining:
                stop_reason = StopReason.EXHAUSTED
                break
            if len(steps) >= max_steps:
                stop_reason = StopReason.MAX_STEPS
                break

            results = parallel(
                delayed(_score)(ds.x, selected + [c], rp, seed) for c in remaining
            )
            scores = {c: result for c, result in zip(remaining, results)}
            history.append({c: scores[c][0] for c in remaining})

            best_t = max(t for t, _ in scores.values())
            # lowest column id wins ties
            best = min(c for c in remaining if scores[c][0] == best_t)
            nn = scores[best][1]
            increment = best_t - previous
            selected.append(best)
            steps.append(SelectionStep(
                column=best,
                name=ds.x_names[best],
                t=best_t,
                r2=r2_n(rp, nn),
                increment=increment,
            ))
            logger.debug(
                "Selection step %d: column %s, T=%.4f (gain %.4f)",
                len(steps), ds.x_names[best], best_t, increment,
            )
            previous = best_t
            if increment < improvement_threshold:
                stop_reason = StopReason.NO_IMPROVEMENT
                break

    return SelectionTrace(
        steps=tuple(steps),
        stop_reason=StopReason(stop_reason),
        threshold=float(improvement_threshold),
        candidates=tuple(history),
    )
