from importlib import import_module

from itflow.data import filters_dict
from itflow.exceptions import FactoryFailure
from itflow.utils import get_logger, suggest_name

logger = get_logger(__name__)


class FactoryRegistry:
    """Type name -> behaviour factory.

    A factory is any callable taking the instance parameters as keyword
    arguments and returning a Filter behaviour; filter classes qualify as they
    are. Built-ins listed in ``itflow.data.filters_dict`` are available without
    registration and imported on first use.
    """

    def __init__(self, builtins=True, catalogue=filters_dict):
        self._factories = {}
        self._catalogue = dict(catalogue) if builtins else {}

    def register_factory(self, type_name, factory):
        """Register <factory> under <type_name>.

        :returns: the factory it displaces, or None.
        """
        if not callable(factory):
            raise TypeError(f"Factory for '{type_name}' is not callable")
        prior = self.get(type_name)
        self._factories[type_name] = factory
        if prior is not None:
            logger.info(f"Factory for '{type_name}' overridden")
        return prior

    def _load_builtin(self, type_name):
        entry = self._catalogue[type_name]
        factory = getattr(import_module(entry["module_name"]), entry["class_name"])
        self._factories[type_name] = factory
        return factory

    def get(self, type_name):
        """The factory registered for <type_name>, or None"""
        if type_name in self._factories:
            return self._factories[type_name]
        if type_name in self._catalogue:
            return self._load_builtin(type_name)
        return None

    def __contains__(self, type_name):
        return type_name in self._factories or type_name in self._catalogue

    def names(self):
        return sorted(set(self._factories) | set(self._catalogue))

    def create(self, type_name, params=None, instance=None):
        """Build a behaviour of <type_name>.

        :param params: dict of parameter values.
        :param instance: instance name, for error messages.
        :returns: the behaviour.
        :raises FactoryFailure: unknown type or rejected parameters.
        """
        factory = self.get(type_name)
        if factory is None:
            raise FactoryFailure(
                f"No factory for type '{type_name}'." + suggest_name(type_name, self.names()),
                instance,
            )
        try:
            return factory(**dict(params or {}))
        except Exception as e:
            raise FactoryFailure(f"{type_name} rejected its parameters: {e}", instance) from e
