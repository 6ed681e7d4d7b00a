"""Optimal design distributions over the probability simplex."""
from .api import *  # noqa
from .options import *  # noqa
from .priors import *  # noqa
from .solver import *  # noqa
