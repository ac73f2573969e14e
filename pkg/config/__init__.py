"""Django project package for depsi; loads the Celery app with the settings."""
from .celery import app as celery_app

__all__ = ('celery_app',)
