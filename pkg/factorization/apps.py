from django.apps import AppConfig


class FactorizationConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'factorization'
    verbose_name = 'Sparse IS-NMF with bi-level penalty tuning'
