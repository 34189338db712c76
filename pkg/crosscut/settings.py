"""
Django settings for the crosscut project.

Only the REST surface and the management commands are served; there is no
database. Tunables are read from the environment (or a .env file) with
python-decouple.
"""

from pathlib import Path
from decouple import config, Csv
import os

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

LOG_LEVEL = config('CROSSCUT_LOG_LEVEL', default='INFO')

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'handlers': {
        'file': {
            'level': 'DEBUG',
            'class': 'logging.FileHandler',
            'filename': config('CROSSCUT_LOG_FILE', default=os.path.join(BASE_DIR, 'crosscut_debug.log')),
            'formatter': 'standard',
            'delay': True,
        },
        'console': {
            'level': 'WARNING',
            'class': 'logging.StreamHandler',
            'formatter': 'standard',
        },
    },
    'formatters': {
        'standard': {
            'format': '%(asctime)s [%(levelname)s] %(name)s: %(message)s'
        },
    },
    'loggers': {
        'django': {
            'handlers': ['file', 'console'],
            'level': 'WARNING',
            'propagate': True,
        },
        'graphs': {'handlers': ['file', 'console'], 'level': LOG_LEVEL, 'propagate': False},
        'reductions': {'handlers': ['file', 'console'], 'level': LOG_LEVEL, 'propagate': False},
        'matching': {'handlers': ['file', 'console'], 'level': LOG_LEVEL, 'propagate': False},
        'solver': {'handlers': ['file', 'console'], 'level': LOG_LEVEL, 'propagate': False},
    },
}

# SECURITY WARNING: keep the secret key used in production secret!
SECRET_KEY = config('SECRET_KEY', default='crosscut-development-key')

DEBUG = config('DEBUG', default=False, cast=bool)
ALLOWED_HOSTS = config('ALLOWED_HOSTS', default='localhost,127.0.0.1,testserver', cast=Csv())

# Application definition

INSTALLED_APPS = [
    'rest_framework',
    'graphs',
    'reductions',
    'matching',
    'solver',
]

REST_FRAMEWORK = {
    'DEFAULT_AUTHENTICATION_CLASSES': [],
    'DEFAULT_PERMISSION_CLASSES': (
        'rest_framework.permissions.AllowAny',
    ),
    'UNAUTHENTICATED_USER': None,
    'DEFAULT_THROTTLE_CLASSES': [
        'rest_framework.throttling.AnonRateThrottle',
    ],
    'DEFAULT_THROTTLE_RATES': {
        'anon': config('CROSSCUT_ANON_RATE', default='600/hour'),
    },
}

MIDDLEWARE = [
    'django.middleware.security.SecurityMiddleware',
    'django.middleware.common.CommonMiddleware',
    'django.middleware.clickjacking.XFrameOptionsMiddleware',
]

ROOT_URLCONF = 'crosscut.urls'

WSGI_APPLICATION = 'crosscut.wsgi.application'

# Nothing is persisted.
DATABASES = {}

# Brute-force bounds and the default worker count for branch leaves.
ORACLE_MAX_VERTICES = config('CROSSCUT_ORACLE_MAX_VERTICES', default=20, cast=int)
ORACLE_MAX_EDGES = config('CROSSCUT_ORACLE_MAX_EDGES', default=24, cast=int)
SOLVER_DEFAULT_JOBS = config('CROSSCUT_JOBS', default=1, cast=int)

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = True

USE_TZ = True

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'
