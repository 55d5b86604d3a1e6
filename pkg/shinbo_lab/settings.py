"""
Django settings for shinbo_lab project.

The project has no web surface: Django provides the settings layer, the
logging configuration and the management-command CLI (`manage.py gen`,
`run`, `mc`, `eval`, `stft`).
"""

import os
from pathlib import Path

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

# Only used by Django internals; nothing here is signed or served.
SECRET_KEY = os.environ.get('DJANGO_SECRET_KEY', 'shinbo-lab-local-only')

DEBUG = os.environ.get('DJANGO_DEBUG', '0') == '1'

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    'django.contrib.contenttypes',
    'django.contrib.auth',
    'rest_framework',
    'factorization',
]

# No database: factors, traces and reports live in CSV/JSON artifacts.
DATABASES = {}

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = False

USE_TZ = True


# REST Framework settings (serializers only, used for config validation)
REST_FRAMEWORK = {
    'UNAUTHENTICATED_USER': None,
}


# Logging

LOG_LEVEL = os.environ.get('SHINBO_LOG_LEVEL', 'INFO').upper()

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '{levelname} {asctime} {name}: {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'verbose',
        },
    },
    'loggers': {
        'factorization': {
            'handlers': ['console'],
            'level': LOG_LEVEL,
            'propagate': False,
        },
    },
}


# Solver and experiment defaults

SHINBO = {
    # Hadamard inverses/powers of WH (and IS terms of X) are taken on max(., FLOOR)
    'FLOOR': 1e-12,
    'DEFAULT_TOL': 1e-6,
    'DEFAULT_INNER_ITERS': 4,
    'DEFAULT_MAX_ITERS': 500,
    # lambda moves by at most DEFAULT_STEP_ALPHA per step and stays in [0, LAMBDA_MAX]
    'DEFAULT_STEP_ALPHA': 0.05,
    'LAMBDA_MAX': 1.0,
    # 1/2 makes the IS updates majorization-minimization steps
    'UPDATE_EXPONENT': 0.5,
    'WARM_START_ITERS': 10,
    'SIR_CAP_DB': 300.0,
    'SPARSITY_TAU': 1e-6,
    'ENVSI_HARMONICS': 6,
    'ENVSI_TOLERANCE_BINS': 1,
    'DEFAULT_WORKERS': int(os.environ.get('SHINBO_WORKERS', '1')),
    'OUTPUT_DIR': Path(os.environ.get('SHINBO_OUTPUT_DIR', BASE_DIR / 'runs')),
}

# Loaded input matrices are cached per (path, mtime, size) for the lifetime of
# the process.
CACHES = {
    'default': {
        'BACKEND': 'django.core.cache.backends.locmem.LocMemCache',
        'LOCATION': 'shinbo-artifacts',
    },
}
