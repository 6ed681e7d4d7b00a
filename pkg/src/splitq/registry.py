"""Base name based handler registry."""
import logging
from typing import Dict, Generic, Iterator, TypeVar


T = TypeVar("T")


logger = logging.getLogger(__name__)


class NamedRegistry(Generic[T]):
    """Registry for handlers keyed by a case insensitive name such as a model tag."""

    registry: Dict[str, T]

    def __init__(self):
        """Create a new empty registry."""
        self.registry = {}

    def register(self, name: str, handler: T):
        """Register the handler under the given name."""
        key = name.lower()
        if key not in self.registry:
            logger.info(f"registering handler {key}")
            self.registry[key] = handler

    def get_handler(self, name: str) -> T:
        """Get the handler for the given name. Raise a KeyError if no handler is registered."""
        key = name.lower()
        if key not in self.registry:
            msg = f"Name {name} not found in the registry"
            logger.error(msg)
            raise KeyError(msg)
        return self.registry[key]

    def __contains__(self, name: str) -> bool:
        """Check that the name is in the registry."""
        return name.lower() in self.registry

    def __iter__(self) -> Iterator[str]:
        """Iterate over the registered names."""
        return iter(sorted(self.registry))
