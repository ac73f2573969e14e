"""
Celery application for detached depsi simulation campaigns.

Settings come from Django under the CELERY_ namespace; with
CELERY_TASK_ALWAYS_EAGER (the default) no broker is contacted.
"""
import os

from celery import Celery

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'config.settings')

app = Celery('depsi')
app.config_from_object('django.conf:settings', namespace='CELERY')

# Campaigns are long and CPU-bound: own queue, one at a time per worker.
app.conf.update(
    task_routes={'depsi.run_convergence_campaign': {'queue': 'campaigns'}},
    worker_prefetch_multiplier=1,
    task_acks_late=True,
)

app.autodiscover_tasks()
