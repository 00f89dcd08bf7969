import heapq

from collections import namedtuple

from itflow.exceptions import (
    CycleCreated,
    CycleDetected,
    DuplicateId,
    TypeMismatch,
    UnknownNode,
    UnsupportedVerb,
)
from itflow.flowcore.node import FilterNode
from itflow.flowcore.messages import ControlAck, ControlMessage, ControlVerb
from itflow.utils import get_logger, suggest_name

logger = get_logger(__name__)

Edge = namedtuple("Edge", ["src", "oport", "dst", "iport"])

PATH_SEPARATOR = "/"


class Dataflow:
    """Directed acyclic graph of filter nodes.

    Registration order is significant: it breaks ties in the topological order
    and, through connection order, fixes the fan-out order of every output port.
    """

    def __init__(self, name="dataflow", model=None):
        from itflow.flowcore.execution import SimpleExecutionModel

        self.name = name
        self.nodes = {}
        self.edges = []
        self.model = model if model is not None else SimpleExecutionModel()
        self.scene = None
        self.version = 0
        self.step_index = 0
        self.clock = 0.0
        self._order = None
        self._order_version = -1
        self._rank = {}

    def __contains__(self, node_id):
        return node_id in self.nodes

    def __len__(self):
        return len(self.nodes)

    def _changed(self):
        self.version += 1
        self._order = None

    def bind_scene(self, scene):
        """Attach the scene this dataflow reads from and writes to"""
        scene.attach(self)
        self.scene = scene

    ###############
    # Graph editing
    ###############

    def register_node(self, node):
        """Add <node> to the graph.

        :param node: a FilterNode.
        :returns: the node id.
        """
        if node.id in self.nodes:
            raise DuplicateId(f"Node '{node.id}' already registered in '{self.name}'")
        if node.is_device and node.iports:
            raise TypeMismatch(
                f"Virtual input device '{node.id}' must not have input ports, "
                f"found {list(node.iports)}"
            )
        self._rank[node.id] = len(self._rank)
        self.nodes[node.id] = node
        self._changed()
        return node.id

    def add(self, node_id, behavior, enabled=True):
        """Shorthand: wrap <behavior> in a FilterNode and register it.

        :returns: the new FilterNode.
        """
        node = FilterNode(node_id, behavior, enabled=enabled)
        self.register_node(node)
        return node

    def node(self, node_id):
        if node_id not in self.nodes:
            raise UnknownNode(
                f"Unknown node '{node_id}' in '{self.name}'." + suggest_name(node_id, self.nodes)
            )
        return self.nodes[node_id]

    def _reaches(self, start, goal):
        stack, seen = [start], set()
        while stack:
            current = stack.pop()
            if current == goal:
                return True
            if current in seen:
                continue
            seen.add(current)
            stack.extend(e.dst for e in self.edges if e.src == current)
        return False

    def connect(self, src, oport, dst, iport):
        """Connect output port <src>.<oport> to input port <dst>.<iport>.

        :returns: the new Edge.
        """
        out = self.node(src).oport(oport)
        inp = self.node(dst).iport(iport)
        if out.kind is not inp.kind:
            raise TypeMismatch(
                f"Cannot connect {src}.{oport} ({out.kind.title}) to "
                f"{dst}.{iport} ({inp.kind.title})"
            )
        if src == dst or self._reaches(dst, src):
            raise CycleCreated(f"Connecting {src}.{oport} -> {dst}.{iport} creates a cycle")
        edge = Edge(src, oport, dst, iport)
        self.edges.append(edge)
        out.listeners.append((dst, iport))
        self._changed()
        return edge

    def disconnect_node(self, node_id):
        """Remove every edge entering or leaving <node_id>, and every scene
        listener delivering to it. The node stays registered.

        :returns: the number of edges removed.
        """
        self.node(node_id)
        kept, removed = [], 0
        for edge in self.edges:
            if edge.src == node_id or edge.dst == node_id:
                removed += 1
            else:
                kept.append(edge)
        self.edges = kept
        for node in self.nodes.values():
            for port in node.oports.values():
                if node.id == node_id:
                    port.listeners = []
                else:
                    port.listeners = [l for l in port.listeners if l[0] != node_id]
        if self.scene is not None:
            self.scene.remove_listeners(node_id)
        self._changed()
        return removed

    def set_enabled(self, node_id, on):
        """Enable or disable <node_id>.

        :returns: the previous flag.
        """
        node = self.node(node_id)
        prior = node.enabled
        node.enabled = bool(on)
        if on and not prior:
            node.behavior.on_enable()
        return prior

    ############
    # Scheduling
    ############

    def topo_order(self):
        """Topological order of the nodes, ties broken by registration order.

        :returns: list of node ids.
        """
        if self._order is not None and self._order_version == self.version:
            return list(self._order)
        indegree = {n: 0 for n in self.nodes}
        successors = {n: [] for n in self.nodes}
        for edge in self.edges:
            indegree[edge.dst] += 1
            successors[edge.src].append(edge.dst)
        ready = [(self._rank[n], n) for n, d in indegree.items() if d == 0]
        heapq.heapify(ready)
        order = []
        while ready:
            _, current = heapq.heappop(ready)
            order.append(current)
            for nxt in successors[current]:
                indegree[nxt] -= 1
                if indegree[nxt] == 0:
                    heapq.heappush(ready, (self._rank[nxt], nxt))
        if len(order) != len(self.nodes):
            stuck = [n for n in self.nodes if indegree[n] > 0]
            raise CycleDetected(f"Dataflow '{self.name}' has a cycle among {stuck}", stuck)
        logger.debug(f"Sorted '{self.name}': {order}")
        self._order = order
        self._order_version = self.version
        return list(order)

    def order_is_current(self):
        return self._order is not None and self._order_version == self.version

    def step(self, pending=(), dt=None, scene=None):
        """Run one step of the execution model on this dataflow.

        :param pending: batch of DeviceSamples for this step.
        :param dt: step duration in seconds.
        :param scene: SceneState; defaults to the bound scene.
        :returns: a StepReport.
        """
        scene = scene if scene is not None else self.scene
        return self.model.step(self, pending, dt, scene)

    #########
    # Control
    #########

    def resolve(self, path):
        """Find the flow owning <path> and the node it names. "a/b" addresses
        node b inside the composite node a.

        :returns: (Dataflow, FilterNode)
        """
        parts = str(path).split(PATH_SEPARATOR)
        flow = self
        node = flow.node(parts[0])
        for part in parts[1:]:
            inner = getattr(node.behavior, "internal", None)
            if inner is None:
                raise UnknownNode(f"Node '{node.id}' is not a composite, cannot resolve '{path}'")
            flow = inner
            node = flow.node(part)
        return flow, node

    def send_control(self, msg):
        """Apply a control message synchronously.

        :param msg: ControlMessage.
        :returns: a ControlAck holding the prior value.
        """
        if not isinstance(msg, ControlMessage):
            raise UnsupportedVerb(f"Not a control message: {msg!r}")
        flow, node = self.resolve(msg.target)
        verb = msg.verb
        if verb is ControlVerb.ENABLE:
            prior = flow.set_enabled(node.id, True)
        elif verb is ControlVerb.DISABLE:
            prior = flow.set_enabled(node.id, False)
        elif verb is ControlVerb.SET_MODE:
            if "mode" not in msg.payload:
                raise UnsupportedVerb(f"SetMode to '{msg.target}' carries no 'mode'")
            try:
                prior = node.behavior.set_mode(msg.payload["mode"])
            except ValueError as e:
                raise UnsupportedVerb(f"Bad mode for '{msg.target}': {e}")
        elif verb is ControlVerb.SET_PARAM:
            try:
                prior = node.behavior.set_params(dict(msg.payload))
            except (ValueError, TypeError) as e:
                raise UnsupportedVerb(f"Bad parameters for '{msg.target}': {e}")
        else:
            raise UnsupportedVerb(f"Unsupported verb {verb!r}")
        return ControlAck(msg.target, verb, prior)
