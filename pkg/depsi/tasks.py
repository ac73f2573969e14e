"""
Celery tasks for long-running simulation campaigns.

With CELERY_TASK_ALWAYS_EAGER (the default) they run in-process; point
CELERY_BROKER_URL at a broker and start a worker to detach them.
"""
import logging

from celery import shared_task

from .families import FamilySpec
from .models import SeedSpec
from .simulation import convergence_campaign

logger = logging.getLogger(__name__)


@shared_task(name='depsi.run_convergence_campaign')
def run_convergence_campaign(family, sizes, reps, resolution=None, seed=None, n_jobs=None):
    """
    JSON-friendly wrapper around convergence_campaign.

    Returns:
        list of {'n', 'replicate', 'd_infty'} dicts sorted by (n, replicate)
    """
    fam = FamilySpec.parse(family)
    rows = convergence_campaign(
        fam,
        sizes=sizes,
        reps=reps,
        resolution=resolution,
        seed=SeedSpec.from_value(seed),
        n_jobs=n_jobs,
    )
    logger.info("Convergence campaign for %s finished: %d rows", fam, len(rows))
    return [row.to_dict() for row in rows]
