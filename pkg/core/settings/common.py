"""
Django settings for core project.

Shared by the dev and test settings modules. Library knobs (ALGEBRA_*) are
read from the environment through django-environ.

For more information on this file, see
https://docs.djangoproject.com/en/5.0/topics/settings/
"""
import os
from pathlib import Path

import environ

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent.parent

env = environ.Env(
    ALGEBRA_ENUMERATION_BUDGET=(int, 2 ** 26),
    ALGEBRA_DEFAULT_SEED=(int, 20240229),
    ALGEBRA_HULL_MAX_VERTICES=(int, 5000),
    ALGEBRA_LOG_LEVEL=(str, 'INFO'),
)

# Application definition

INSTALLED_APPS = [
    'django.contrib.contenttypes',
    # Internal apps
    'algebra.apps.AlgebraConfig',
]

MIDDLEWARE = []

# Library settings
# Explicit keyword arguments (budget=, seed=) take precedence over these.

ALGEBRA_ENUMERATION_BUDGET = env('ALGEBRA_ENUMERATION_BUDGET')
ALGEBRA_DEFAULT_SEED = env('ALGEBRA_DEFAULT_SEED')
ALGEBRA_HULL_MAX_VERTICES = env('ALGEBRA_HULL_MAX_VERTICES')
ALGEBRA_LOG_LEVEL = env('ALGEBRA_LOG_LEVEL')

# Logging

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '{asctime} {levelname} {name}: {message}',
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
        'algebra': {
            'handlers': ['console'],
            'level': ALGEBRA_LOG_LEVEL,
            'propagate': False,
        },
    },
}


# Internationalization
# https://docs.djangoproject.com/en/5.0/topics/i18n/

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = True

USE_TZ = True

# Default primary key field type
# https://docs.djangoproject.com/en/5.0/ref/settings/#default-auto-field

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'
