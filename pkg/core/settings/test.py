from core.settings.common import *

SECRET_KEY = 'test-only-not-secret'

DEBUG = False

DATABASES = {
    'default': {
        'ENGINE': 'django.db.backends.sqlite3',
        'NAME': ':memory:',
    }
}

LOGGING['loggers']['algebra']['level'] = 'WARNING'
LOGGING['loggers']['algebra']['propagate'] = True
