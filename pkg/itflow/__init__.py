from itflow import flowcore, devices, scene, filters, dsl, harness
from itflow.data import filters_dict, VERSION
from itflow.dsl import FactoryRegistry, instantiate, parse, validate
from itflow.exceptions import InvalidWorld
from itflow.io import read_text
from itflow.utils import suggest_name

__version__ = VERSION


def load_world(path, reg=None):
    """Wrapper for loading a world file into a runnable dataflow.

    :param path: path to the world XML file.
    :param reg: FactoryRegistry to build instances with. If None, the built-in
        filters are used.
    :returns: (Dataflow, SceneState).
    """
    reg = reg if reg is not None else FactoryRegistry()
    spec = parse(read_text(path))
    diagnostics = validate(spec, reg)
    if diagnostics:
        raise InvalidWorld(
            f"{path} is not a valid world:\n" + "\n".join(str(d) for d in diagnostics),
            diagnostics,
        )
    return instantiate(spec, reg)


def list_filters():
    """Just listing the built-in filter types.

    :returns: a list of type names usable in world files.
    """
    return list(filters_dict.keys())


def get_filter_info(filter_key):
    """Get complete info in data/filters_dict for a particular built-in filter

    :param filter_key: type name from filters_dict
    :returns: information about a particular filter.
    """
    if filter_key not in filters_dict:
        raise ValueError(
            f"Please enter a valid filter key from {list(filters_dict.keys())}."
            + suggest_name(filter_key, filters_dict)
        )
    return filters_dict[filter_key]


def list_tasks():
    """Just listing the filter categories.

    :returns: a list of categories, in catalogue order.
    """
    tasks = []
    for entry in filters_dict.values():
        if entry["category"] not in tasks:
            tasks.append(entry["category"])
    return tasks
