"""Library defaults, overridable from Django settings."""

from django.conf import settings

DEFAULTS = {
    'ALGEBRA_ENUMERATION_BUDGET': 2 ** 26,
    'ALGEBRA_DEFAULT_SEED': 20240229,
    'ALGEBRA_HULL_MAX_VERTICES': 5000,
}


def get_setting(name: str):
    return getattr(settings, name, DEFAULTS[name])
