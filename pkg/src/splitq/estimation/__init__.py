"""Estimators of item means from split questionnaire data."""
from .data import *  # noqa
from .em import *  # noqa
from .estimator_registry import *  # noqa
from .hk import *  # noqa
from .imputation import *  # noqa
from .result import *  # noqa
from .zmvln import *  # noqa
