from django.apps import AppConfig


class DepsiConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'depsi'
    verbose_name = 'Copula transform dependence estimation'
