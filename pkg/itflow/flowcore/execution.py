"""Execution environments.

Only the simple single-propagation model is provided: every device sample of a
step is propagated through the whole dataflow, in topological order, before the
next step starts. Scene changes are deferred to the end of the step and scene
listeners hear about them at the start of the following one.
"""
from itflow.exceptions import InvalidSample, TypeMismatch, UnknownNode, UnknownObject
from itflow.flowcore.messages import (
    ControlMessage,
    ControlVerb,
    DeferredWrite,
    MutationKind,
    StepReport,
)
from itflow.flowcore.samples import SampleKind
from itflow.scene.geometry import Transform
from itflow.utils import get_logger

logger = get_logger(__name__)


class _StepState:
    """Step-scoped values shared by a context and the contexts of its composites"""

    def __init__(self):
        self.writes = []
        self.sequence = 0
        self.quit = False
        self.deliveries = 0
        self.skipped = 0


class StepContext:
    """What a filter sees while processing: the pre-step scene, the step clock
    and the ways to act (emit, deferred writes, control messages, quit).
    """

    def __init__(self, flow, scene, dt, step_index, time, state=None, parent=None, prefix=""):
        self.flow = flow
        self.scene = scene
        self.dt = dt
        self.step_index = step_index
        self.time = time
        self.parent = parent
        self.prefix = prefix
        self.node = None
        self.emissions = []
        self._state = state if state is not None else _StepState()

    def child(self, flow, prefix):
        """Context for the internal dataflow of a composite node"""
        return StepContext(
            flow,
            self.scene,
            self.dt,
            self.step_index,
            self.time,
            state=self._state,
            parent=self,
            prefix=prefix,
        )

    @property
    def node_id(self):
        return self.node.id if self.node is not None else None

    @property
    def quitting(self):
        return self._state.quit

    def emit(self, oport, sample):
        port = self.node.oport(oport)
        if sample.kind is not port.kind:
            raise TypeMismatch(
                f"{self.node.id}.{oport} emits {port.kind.title}, got {sample.kind.title}"
            )
        self.node.outbox.append((oport, sample))

    def _write(self, object_id, mutation, payload):
        write = DeferredWrite(
            object=str(object_id),
            mutation=mutation,
            payload=payload,
            origin=self.prefix + self.node.id,
            sequence=self._state.sequence,
        )
        self._state.sequence += 1
        self._state.writes.append(write)
        return write

    def write_transform(self, object_id, transform):
        """Request <object_id> be moved to <transform> (a Transform or Locator)
        at the end of the step.
        """
        if not isinstance(transform, Transform):
            transform = Transform(transform.position, transform.orientation)
        return self._write(object_id, MutationKind.SET_TRANSFORM, transform)

    def write_flag(self, object_id, flag, value):
        """Request a boolean flag of <object_id> be set at the end of the step"""
        return self._write(object_id, MutationKind.SET_FLAG, (str(flag), bool(value)))

    def send_control(self, target, verb, payload=None):
        """Send a control message, resolved first in this context's dataflow and
        then in the enclosing ones.

        :returns: ControlAck.
        """
        msg = ControlMessage(target, ControlVerb(verb), dict(payload or {}))
        ctx = self
        while ctx is not None:
            try:
                ctx.flow.resolve(target)
            except UnknownNode:
                ctx = ctx.parent
                continue
            return ctx.flow.send_control(msg)
        raise UnknownNode(f"Control target '{target}' not found from '{self.node_id}'")

    def skip_write(self):
        """Count a write the filter could not build, such as one on an unknown object"""
        self._state.skipped += 1

    def quit(self):
        if not self._state.quit:
            logger.info(f"Quit requested by '{self.prefix}{self.node_id}'")
        self._state.quit = True


class ExecutionModel:
    """Interface of an execution environment"""

    def step(self, flow, pending, dt, scene):
        raise NotImplementedError


class SimpleExecutionModel(ExecutionModel):
    """Single propagation per step with deferred scene writes."""

    def step(self, flow, pending, dt, scene):
        """Run one step.

        :param flow: the Dataflow.
        :param pending: batch of DeviceSamples to inject.
        :param dt: step duration (s), must be positive.
        :param scene: SceneState or None.
        :returns: StepReport.
        """
        if dt is None or not dt > 0:
            raise ValueError(f"Step duration must be positive, got {dt}")
        report = StepReport(step_index=flow.step_index, time=flow.clock)
        ctx = StepContext(flow, scene, dt, report.step_index, report.time)

        if scene is not None:
            for node_id, iport, sample in scene.take_notifications():
                node = flow.nodes.get(node_id)
                if node is None or iport not in node.iports:
                    continue
                node.iports[iport].deliver(sample)
                ctx._state.deliveries += 1

        for device_sample in pending:
            targets = [
                n
                for n in flow.nodes.values()
                if n.is_device and n.enabled and n.behavior.device_id == device_sample.device_id
            ]
            if not targets:
                logger.warning(
                    f"Dropping sample for device '{device_sample.device_id}': no enabled device node"
                )
                report.dropped_samples += 1
                continue
            for node in targets:
                node.behavior.inject(device_sample)
            report.injected.append(device_sample)

        self.run_nodes(flow, ctx)

        for write in sorted(ctx._state.writes, key=lambda w: w.sequence):
            if scene is None:
                report.skipped_writes += 1
                continue
            try:
                changed = scene.apply_mutation(write)
            except UnknownObject as e:
                logger.warning(f"Skipping write from '{write.origin}': {e}")
                report.skipped_writes += 1
                continue
            if changed:
                report.writes.append(write)

        report.writes_applied = len(report.writes)
        report.skipped_writes += ctx._state.skipped
        report.deliveries = ctx._state.deliveries
        report.quit = ctx._state.quit
        report.emissions = ctx.emissions
        flow.step_index += 1
        flow.clock += dt
        return report

    def run_nodes(self, flow, ctx):
        """Run collect/process/send on every node of <flow> in topological order.
        If a process phase rewires the graph, the nodes still to run are
        re-sorted before continuing.
        """
        order = flow.topo_order()
        version = flow.version
        done = set()
        queue = list(order)
        i = 0
        while i < len(queue):
            if flow.version != version:
                logger.debug(f"'{flow.name}' changed during the step, re-sorting")
                order = flow.topo_order()
                version = flow.version
                queue = [n for n in order if n not in done]
                i = 0
                continue
            node_id = queue[i]
            i += 1
            done.add(node_id)
            self.execute_node(flow, flow.nodes[node_id], ctx)

    def execute_node(self, flow, node, ctx):
        inputs = node.drain()
        if not node.enabled:
            node.outbox = []
            return
        node.behavior.collect(inputs)
        ctx.node = node
        node.behavior.process(ctx)
        self.send(flow, node, ctx)

    def send(self, flow, node, ctx):
        outbox, node.outbox = node.outbox, []
        for oport, sample in outbox:
            if (
                sample.kind is SampleKind.PICK
                and sample.target is not None
                and ctx.scene is not None
                and not ctx.scene.has_object(sample.target)
            ):
                raise InvalidSample(
                    f"{node.id}.{oport} picked '{sample.target}', which is not in the scene"
                )
            ctx.emissions.append((node.id, oport, sample))
            for dst, iport in node.oports[oport].listeners:
                flow.nodes[dst].iports[iport].deliver(sample)
                ctx._state.deliveries += 1
