import os

import environ

from core.settings.common import *

# Quick-start development settings - unsuitable for production
# See https://docs.djangoproject.com/en/5.0/howto/deployment/checklist/

# Read .env file if it exists
environ.Env.read_env(os.path.join(BASE_DIR, 'dev.env'))

SECRET_KEY = env('SECRET_KEY', default='dev-only-not-secret')

DEBUG = env.bool('DEBUG', default=True)

ALLOWED_HOSTS = ["*"]

# Computation records live in a local sqlite file unless DATABASE_URL says otherwise
DATABASES = {
    'default': env.db('DATABASE_URL', default=f"sqlite:///{BASE_DIR / 'db.sqlite3'}"),
}

# dev.env may override the library knobs
ALGEBRA_ENUMERATION_BUDGET = env.int('ALGEBRA_ENUMERATION_BUDGET', default=ALGEBRA_ENUMERATION_BUDGET)
ALGEBRA_DEFAULT_SEED = env.int('ALGEBRA_DEFAULT_SEED', default=ALGEBRA_DEFAULT_SEED)
ALGEBRA_HULL_MAX_VERTICES = env.int('ALGEBRA_HULL_MAX_VERTICES', default=ALGEBRA_HULL_MAX_VERTICES)
