"""In-memory form of a world description.

Line numbers are kept for diagnostics but never take part in equality, so a
parsed, serialised and re-parsed world compares equal to the original.
"""
from enum import Enum
from dataclasses import dataclass, field

from itflow.flowcore.samples import SampleKind

GENERIC_PORT_TYPES = ("port", "iport", "oport")
ACCESS_MODES = ("r", "w", "rw")


class InstanceKind(Enum):
    OBJECT = "object"
    VIDEV = "videv"
    IT = "it"
    FILTER = "filter"


def port_kind(name, type_name):
    """SampleKind of a declared port.

    An explicit type names its kind ("Locator", "ButtonOPort", ...). A generic
    type (OPort, IPort) takes the kind named inside the port name, so
    ``<oport name="locator" type="OPort">`` is a Locator port.

    :returns: SampleKind, or None when no single kind can be found.
    """
    text = name if str(type_name).lower() in GENERIC_PORT_TYPES else type_name
    found = [k for k in SampleKind if k.value in str(text).lower()]
    return found[0] if len(found) == 1 else None


@dataclass(frozen=True)
class PropDecl:
    name: str
    type: str
    access: str = "rw"
    line: int = field(default=None, compare=False)


@dataclass(frozen=True)
class PortDecl:
    name: str
    type: str
    kind: SampleKind
    line: int = field(default=None, compare=False)


@dataclass(frozen=True)
class ClassDecl:
    name: str
    inherits: str = None
    props: tuple = ()
    iports: tuple = ()
    oports: tuple = ()
    line: int = field(default=None, compare=False)

    def prop(self, name):
        for p in self.props:
            if p.name == name:
                return p
        return None


@dataclass(frozen=True)
class InstanceDecl:
    kind: InstanceKind
    name: str
    type: str
    params: dict = field(default_factory=dict)
    # element attributes besides name and type (pos, mode, enabled, ...)
    attrs: dict = field(default_factory=dict)
    line: int = field(default=None, compare=False)
    param_lines: dict = field(default_factory=dict, compare=False)


@dataclass(frozen=True)
class DataflowRel:
    origin: str
    srcport: str
    dest: str
    dstport: str
    line: int = field(default=None, compare=False)


@dataclass(frozen=True)
class ViewpointDecl:
    pos: tuple = (0.0, 0.0, 0.0)
    orient: tuple = (1.0, 0.0, 0.0, 0.0)
    line: int = field(default=None, compare=False)


@dataclass(frozen=True)
class FrustumDecl:
    fov: float = None
    aspect: float = None
    near: float = None
    far: float = None
    line: int = field(default=None, compare=False)


@dataclass(frozen=True)
class PathDecl:
    halfwidth: float
    vertices: tuple = ()
    line: int = field(default=None, compare=False)


@dataclass
class WorldSpec:
    name: str = None
    classes: list = field(default_factory=list)
    instances: list = field(default_factory=list)
    rels: list = field(default_factory=list)
    viewpoint: ViewpointDecl = None
    frustum: FrustumDecl = None
    paths: list = field(default_factory=list)

    def instance(self, name):
        for inst in self.instances:
            if inst.name == name:
                return inst
        return None

    def class_decl(self, name):
        for c in self.classes:
            if c.name == name:
                return c
        return None

    def objects(self):
        return [i for i in self.instances if i.kind is InstanceKind.OBJECT]

    def nodes(self):
        return [i for i in self.instances if i.kind is not InstanceKind.OBJECT]
