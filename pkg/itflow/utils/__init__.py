import os
import math
import logging
import inspect
import pathlib
import difflib
import functools

from itflow.io import load_yaml

WORKDIR = os.path.dirname(pathlib.Path(__file__).parent.resolve())

defaults_path = os.path.join(WORKDIR, "conf", "defaults.yaml")


@functools.lru_cache(maxsize=None)
def _load_defaults():
    d = load_yaml(defaults_path)
    return d if d is not None else {}


def get_defaults(section):
    """Get a copy of one section of conf/defaults.yaml

    :param section: top-level key in the defaults file.
    :returns: dict with the section contents (empty if missing).
    """
    return dict(_load_defaults().get(section, {}))


def get_logger(name):
    """Create logger

    :param name: logger name
    """
    logging.basicConfig(
        format="[%(asctime)s] %(levelname)s [%(name)s.%(funcName)s:%(lineno)d] %(message)s",
    )
    level = os.environ.get(
        "ITFLOW_LOG_LEVEL", get_defaults("logging").get("level", "INFO")
    )
    logger = logging.getLogger(name)
    logger.setLevel(str(level).upper())
    return logger


logger = get_logger(__name__)


def get_tool_list(modules):
    """Given sys.modules[__name__], prints out the imported classes

    :param modules: basically the sys.modules[__name__] of a file
    """
    list_of_tools = []
    for _, obj in inspect.getmembers(modules):
        if inspect.isclass(obj):
            list_of_tools.append(obj.__name__)
    return list_of_tools


def suggest_name(name, candidates):
    """Build a " Did you mean ...?" suffix for an unresolved <name>.

    :param name: the name that failed to resolve.
    :param candidates: iterable of valid names.
    :returns: the suffix, or an empty string when nothing is close.
    """
    close = difflib.get_close_matches(str(name), [str(c) for c in candidates], n=1)
    if close:
        return f" Did you mean '{close[0]}'?"
    return ""


############################
# Parameter value converters
############################
# Used to turn DSL attribute strings (or already-typed values coming from
# directives) into the values filters work with.


def to_float(value):
    if isinstance(value, bool):
        raise ValueError(f"Expected a number, got {value!r}")
    out = float(value)
    if not math.isfinite(out):
        raise ValueError(f"Expected a finite number, got {value!r}")
    return out


def to_int(value):
    if isinstance(value, bool):
        raise ValueError(f"Expected an integer, got {value!r}")
    if isinstance(value, str):
        return int(value.strip())
    out = int(value)
    if out != value:
        raise ValueError(f"Expected an integer, got {value!r}")
    return out


def to_bool(value):
    if isinstance(value, bool):
        return value
    text = str(value).strip().lower()
    if text in ("true", "1", "yes", "on"):
        return True
    if text in ("false", "0", "no", "off"):
        return False
    raise ValueError(f"Expected a boolean, got {value!r}")


def to_str(value):
    if value is None:
        raise ValueError("Expected a string, got None")
    return str(value)


def to_optional_str(value):
    if value is None:
        return None
    text = str(value)
    return text if text else None


def _to_floats(value, n):
    if isinstance(value, str):
        parts = value.split()
    else:
        parts = list(value)
    if len(parts) != n:
        raise ValueError(f"Expected {n} numbers, got {value!r}")
    return tuple(to_float(p) for p in parts)


def to_vec3(value):
    """"x y z" or a 3-sequence -> tuple of 3 floats"""
    return _to_floats(value, 3)


def to_quat(value):
    """"w x y z" or a 4-sequence -> tuple of 4 floats (not normalised)"""
    return _to_floats(value, 4)


def to_id_list(value):
    """Whitespace or comma separated ids -> tuple of ids"""
    if value is None:
        return ()
    if isinstance(value, str):
        return tuple(p for p in value.replace(",", " ").split() if p)
    return tuple(str(p) for p in value)
