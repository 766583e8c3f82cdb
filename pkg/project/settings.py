"""
Django settings for the cbfp-lab project.

The project has no web surface and no database: Django provides the
management-command runner, the settings layer and the test runner, Celery
fans sweep points out to workers.
"""

import math
import os
from pathlib import Path

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

# SECURITY WARNING: keep the secret key used in production secret!
SECRET_KEY = os.getenv(
    "DJANGO_SECRET_KEY", "django-insecure-cbfp-lab-local-only-key-0xcbf0"
)

DEBUG = os.getenv("DJANGO_DEBUG", "0") == "1"

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    "rest_framework",
    "numerics",
    "transceiver",
    "experiments",
]

# NOTE: No models are defined anywhere, every test is a SimpleTestCase
DATABASES = {}

LANGUAGE_CODE = "en-us"

TIME_ZONE = "UTC"

USE_I18N = False

USE_TZ = True


# Logging
LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "plain": {"format": "%(asctime)s %(levelname)s %(name)s: %(message)s"},
    },
    "handlers": {
        "console": {"class": "logging.StreamHandler", "formatter": "plain"},
    },
    "root": {
        "handlers": ["console"],
        "level": os.getenv("CBFP_LOG_LEVEL", "INFO"),
    },
}


# Block floating-point settings
CBFP_DEFAULT_SEED = int(os.getenv("CBFP_DEFAULT_SEED", str(0xCBF0)), 0)
CBFP_DEFAULT_FORMAT = os.getenv("CBFP_DEFAULT_FORMAT", "single")

# Guard bits of the wide accumulator used by the block ALU
CBFP_GUARD_BITS = int(os.getenv("CBFP_GUARD_BITS", "8"))

# Top biased exponent of the inputs-ratio generator
CBFP_RATIO_EXPONENT_TOP = int(os.getenv("CBFP_RATIO_EXPONENT_TOP", "130"))

# QAM transceiver defaults
CBFP_TRANSCEIVER_DEFAULTS = {
    "constellation_order": 1024,
    "upsample": 4,
    "symbol_rate": 2400,
    "filter_order": 32,
    "rolloff": 0.2,
    "snr_db": math.inf,
    "n_symbols": 2400,
}

# "local" runs sweep points in-process, "celery" dispatches them as a group
CBFP_SWEEP_BACKEND = os.getenv("CBFP_SWEEP_BACKEND", "local")
CBFP_SWEEP_TIMEOUT = int(os.getenv("CBFP_SWEEP_TIMEOUT", "3600"))


# Celery Specific Settings
CELERY_BROKER_URL = os.getenv("CELERY_BROKER_URL", "redis://localhost:6379/0")
CELERY_RESULT_BACKEND = os.getenv("CELERY_RESULT_BACKEND", "redis://localhost:6379/0")
CELERY_ACCEPT_CONTENT = ["json"]
CELERY_TASK_SERIALIZER = "json"
CELERY_RESULT_SERIALIZER = "json"
CELERY_TIMEZONE = TIME_ZONE
