"""Split questionnaire patterns and the probability distributions defined over them."""
from .designs import *  # noqa
from .serialization import *  # noqa
from .space import *  # noqa
from .symmetry import *  # noqa
