from pathlib import Path
from decouple import config, Csv

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

# Django still wants a key even though nothing here is signed
SECRET_KEY = config('SECRET_KEY', default='depsi-local-only-not-a-secret')
DEBUG = config('DEBUG', default=False, cast=bool)
ALLOWED_HOSTS = config('ALLOWED_HOSTS', default='localhost,127.0.0.1', cast=Csv())

# Application definition

INSTALLED_APPS = [
    # Local apps
    'depsi',
]

# No ORM tables; the app only ships dataclasses and management commands
DATABASES = {
    'default': {
        'ENGINE': 'django.db.backends.sqlite3',
        'NAME': BASE_DIR / 'db.sqlite3',
    }
}

LANGUAGE_CODE = 'en-us'
TIME_ZONE = config('TIME_ZONE', default='UTC')
USE_I18N = False
USE_TZ = True

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'

# Logging
DEPSI_LOG_LEVEL = config('DEPSI_LOG_LEVEL', default='WARNING')

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'plain': {
            'format': '%(asctime)s %(levelname)s %(name)s: %(message)s',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'plain',
        },
    },
    'loggers': {
        'depsi': {
            'handlers': ['console'],
            'level': DEPSI_LOG_LEVEL,
            'propagate': False,
        },
    },
}

# Estimation defaults
DEPSI_SEED = config('DEPSI_SEED', default=0, cast=int)
DEPSI_GRID_RESOLUTION = config('DEPSI_GRID_RESOLUTION', default=50, cast=int)
DEPSI_INTEGRATION_RESOLUTION = config('DEPSI_INTEGRATION_RESOLUTION', default=200, cast=int)

# Nearest-neighbour search
DEPSI_KDTREE_MAX_DIM = config('DEPSI_KDTREE_MAX_DIM', default=16, cast=int)
DEPSI_NN_TIE_RTOL = config('DEPSI_NN_TIE_RTOL', default=1e-12, cast=float)

# Feature selection
DEPSI_FEATURE_THRESHOLD = config('DEPSI_FEATURE_THRESHOLD', default=0.01, cast=float)

# Parallelism (joblib workers; 1 = serial)
DEPSI_N_JOBS = config('DEPSI_N_JOBS', default=1, cast=int)

# Celery Configuration
CELERY_BROKER_URL = config('CELERY_BROKER_URL', default='redis://localhost:6379/0')
CELERY_RESULT_BACKEND = config('CELERY_RESULT_BACKEND', default='redis://localhost:6379/0')
CELERY_ACCEPT_CONTENT = ['json']
CELERY_TASK_SERIALIZER = 'json'
CELERY_RESULT_SERIALIZER = 'json'
CELERY_TIMEZONE = TIME_ZONE
# Without a worker pool, campaigns run in-process
CELERY_TASK_ALWAYS_EAGER = config('CELERY_TASK_ALWAYS_EAGER', default=True, cast=bool)
CELERY_TASK_EAGER_PROPAGATES = True
