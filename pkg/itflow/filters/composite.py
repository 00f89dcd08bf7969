"""Interaction techniques as composite filters.

A composite owns an internal dataflow and behaves, from the outside, like a
single filter whose ports are a subset of the ports of its internal filters.
"""
from itflow.exceptions import (
    CycleDetected,
    InternalCycle,
    UnknownInternalPort,
    UnknownNode,
    UnsupportedVerb,
)
from itflow.flowcore.dataflow import Dataflow, PATH_SEPARATOR
from itflow.flowcore.node import Filter
from itflow.filters.basic import ChangeObject, MoveByLocator
from itflow.filters.gogo import GoGoControl, GoGoFilter
from itflow.filters.selection import Select1ByPointing, Select1ByTouching
from itflow.utils import get_logger, suggest_name, to_id_list, to_str

logger = get_logger(__name__)


def _endpoints(value):
    """A single (node, port) pair or a list of them -> list of pairs"""
    if isinstance(value, tuple) and len(value) == 2 and isinstance(value[0], str):
        return [value]
    return [tuple(v) for v in value]


class CompositeIT(Filter):
    """Filter running an internal dataflow.

    :param internal: the internal Dataflow. Subclasses may leave it out and
        build it in ``build``.
    :param iports: external input port -> (node, port) or list of them; a
        sample received on the external port goes to every mapped port.
    :param oports: external output port -> (node, port).
    :param params: own parameters, or parameters of internal filters. The
        latter are forwarded to every internal node declaring them.
    """

    # parameters accepted on behalf of the internal filters
    FORWARDED_PARAMS = ()

    def __init__(self, internal=None, iports=None, oports=None, **params):
        own = {k: v for k, v in params.items() if k in self.PARAMS}
        super().__init__(**own)
        if internal is None:
            internal, iports, oports = self.build()
        self.internal = internal
        self.iport_map = {name: _endpoints(ends) for name, ends in (iports or {}).items()}
        self.oport_map = {name: tuple(end) for name, end in (oports or {}).items()}
        self.iports = {}
        self.oports = {}
        for name, ends in self.iport_map.items():
            kinds = {self._internal_port(node, port, "iports").kind for node, port in ends}
            if len(kinds) != 1:
                raise UnknownInternalPort(
                    f"External port '{name}' maps to ports of different kinds"
                )
            self.iports[name] = kinds.pop()
        for name, (node, port) in self.oport_map.items():
            self.oports[name] = self._internal_port(node, port, "oports").kind
        try:
            internal.topo_order()
        except CycleDetected as e:
            raise InternalCycle(f"Internal dataflow of {self.type_name()} has a cycle: {e.nodes}")
        for name, value in params.items():
            if name not in own:
                self.set_param(name, value)

    def build(self):
        """Create (internal, iports, oports)"""
        raise UnknownInternalPort(f"{self.type_name()} needs an internal dataflow")

    def _internal_port(self, node_id, port, side):
        try:
            node = self.internal.node(node_id)
        except UnknownNode as e:
            raise UnknownInternalPort(str(e))
        ports = getattr(node, side)
        if port not in ports:
            raise UnknownInternalPort(
                f"Internal node '{node_id}' has no port '{port}'." + suggest_name(port, ports)
            )
        return ports[port]

    @classmethod
    def accepted_params(cls):
        return tuple(cls.PARAMS) + tuple(cls.FORWARDED_PARAMS)

    def has_param(self, name):
        if name in self.PARAMS:
            return True
        return any(n.behavior.has_param(name) for n in self.internal.nodes.values())

    def set_params(self, values):
        """Own parameters are set here, other names go to every internal node
        declaring them. When one value is rejected every node keeps its
        previous parameters.

        :returns: dict of the previous values (of the first internal node
            declaring a name, when forwarded).
        """
        own = {k: v for k, v in values.items() if k in self.PARAMS}
        targets = []
        for node in self.internal.nodes.values():
            names = {k: v for k, v in values.items() if k not in own and node.behavior.has_param(k)}
            if names:
                targets.append((node, names))
        for name in values:
            if name not in own and not any(name in names for _, names in targets):
                raise UnsupportedVerb(f"{self.type_name()} has no parameter '{name}'")
        priors = super().set_params(own)
        applied = []
        try:
            for node, names in targets:
                node_priors = node.behavior.set_params(names)
                applied.append((node, node_priors))
                for name, prior in node_priors.items():
                    priors.setdefault(name, prior)
        except Exception:
            for node, node_priors in reversed(applied):
                node.behavior.set_params(node_priors)
            super().set_params({k: priors[k] for k in own})
            raise
        return {name: priors[name] for name in values}

    def on_enable(self):
        for node in self.internal.nodes.values():
            if node.enabled:
                node.behavior.on_enable()

    def collect(self, inputs):
        super().collect(inputs)
        for name, samples in inputs.items():
            for node_id, port in self.iport_map.get(name, ()):
                target = self.internal.nodes[node_id].iports[port]
                for sample in samples:
                    target.deliver(sample)

    def process(self, ctx):
        inner = ctx.child(self.internal, ctx.prefix + ctx.node_id + PATH_SEPARATOR)
        self.internal.model.run_nodes(self.internal, inner)
        exports = {end: name for name, end in self.oport_map.items()}
        for node_id, oport, sample in inner.emissions:
            name = exports.get((node_id, oport))
            if name is not None:
                ctx.emit(name, sample)


def make_composite(internal, iports, oports, **params):
    """Wrap <internal> behind the exported ports.

    :returns: a CompositeIT behaviour, ready to be added to an outer dataflow.
    """
    return CompositeIT(internal, iports, oports, **params)


class GoGoIT(CompositeIT):
    """Go-Go selection technique.

    Inputs: ``handIport`` (real hand) and ``headIport``. Outputs:
    ``gogoPosOPort`` (virtual hand) and ``pickOPort`` (touched object).
    Internally the virtual ``hand`` object follows the lengthened arm, selects
    what it touches, and the ``cube`` marks the real hand when both differ.
    """

    PARAMS = {
        "hand": (to_str, "virtualHand"),
        "cube": (to_str, "cube"),
        "candidates": (to_id_list, ()),
    }
    FORWARDED_PARAMS = ("D", "k", "epsilon", "center")

    def build(self):
        hand, cube = self.params["hand"], self.params["cube"]
        flow = Dataflow(name="GoGoIT")
        flow.add("gogoFilter", GoGoFilter())
        flow.add("gogoControl", GoGoControl(cube=cube, mover="moveCube"))
        flow.add("moveHand", MoveByLocator(object=hand))
        flow.add("moveCube", MoveByLocator(object=cube), enabled=False)
        flow.add(
            "select",
            Select1ByTouching(hand=hand, exclude=(cube,), candidates=self.params["candidates"]),
        )
        flow.add("changeObj", ChangeObject())
        flow.connect("gogoFilter", "locator", "moveHand", "pos")
        flow.connect("gogoFilter", "locator", "gogoControl", "virtual")
        flow.connect("gogoFilter", "locator", "select", "pos")
        flow.connect("select", "pick", "changeObj", "obj")
        iports = {
            "handIport": [("gogoFilter", "hand"), ("gogoControl", "real"), ("moveCube", "pos")],
            "headIport": [("gogoFilter", "head")],
        }
        oports = {
            "gogoPosOPort": ("gogoFilter", "locator"),
            "pickOPort": ("select", "pick"),
        }
        return flow, iports, oports


class RayCastIT(CompositeIT):
    """Ray-casting selection technique.

    Input ``handIport`` moves the ``hand`` object and the ``ray`` segment and
    casts the selection ray; output ``pickOPort`` carries the pointed object.
    """

    PARAMS = {
        "hand": (to_str, "handRepr"),
        "ray": (to_str, "lineSegment"),
        "candidates": (to_id_list, ()),
    }

    def build(self):
        hand, ray = self.params["hand"], self.params["ray"]
        flow = Dataflow(name="RayCastIT")
        flow.add("moveHand", MoveByLocator(object=hand))
        flow.add("moveRay", MoveByLocator(object=ray))
        flow.add(
            "select",
            Select1ByPointing(exclude=(hand, ray), candidates=self.params["candidates"]),
        )
        flow.add("changeObj", ChangeObject())
        flow.connect("select", "pick", "changeObj", "obj")
        iports = {
            "handIport": [("moveHand", "pos"), ("moveRay", "pos"), ("select", "pos")],
        }
        oports = {"pickOPort": ("select", "pick")}
        return flow, iports, oports
