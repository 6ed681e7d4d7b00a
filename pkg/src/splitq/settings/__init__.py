"""Settings management module."""
from .api import *  # noqa
