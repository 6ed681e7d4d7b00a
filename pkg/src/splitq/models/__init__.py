"""Response models and the design information they induce."""
from .information import *  # noqa
from .linalg import *  # noqa
from .model_registry import *  # noqa
from .mvn import *  # noqa
from .structured import *  # noqa
from .zmvln import *  # noqa
