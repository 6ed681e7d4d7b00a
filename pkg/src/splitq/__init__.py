"""splitq computes A-optimal split questionnaire designs.

A split questionnaire gives every respondent a subset of m of the K questions.
The library chooses the probability with which each subset is administered:
    * information matrices of multivariate normal and zero-inflated log-normal
    responses observed through a design, and the A-criterion built on them.
    * local, Bayes and minimax optimal designs over the probability simplex.
    * closed-form results for two groups of correlated questions.
    * EM and design-weighted estimators, and a Monte-Carlo harness that compares
    designs on simulated populations.
"""

from .estimation import *  # noqa
from .exceptions import *  # noqa
from .models import *  # noqa
from .optimize import *  # noqa
from .patterns import *  # noqa
from .protocols import *  # noqa
from .simulation import *  # noqa
from .theory import *  # noqa


# Criteria
CRITERION_REGISTRY.register("mvn", MvnCriterion)
CRITERION_REGISTRY.register("zmvln", ZmvlnCriterion)

# Parameter readers
PARAMS_REGISTRY.register("mvn", read_mvn_params)
PARAMS_REGISTRY.register("zmvln", read_zmvln_params)

# Mean estimators
ESTIMATOR_REGISTRY.register("mvn", em_mvn)
ESTIMATOR_REGISTRY.register("zmvln", estimate_zmvln)
