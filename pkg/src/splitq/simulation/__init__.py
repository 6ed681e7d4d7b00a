"""Monte-Carlo studies comparing designs on simulated populations."""
from .jackknife import *  # noqa
from .population import *  # noqa
from .results import *  # noqa
from .sampling import *  # noqa
from .scenario import *  # noqa
from .study import *  # noqa
