"""Scripted runs: a world is stepped at a fixed dt while an input script is
replayed into it, and every step leaves one line in a JSONL trace.

The first trace line is a header (tool version, run configuration, hashes of
the world and script files); each following line is a TraceRecord with its
fields in TRACE_FIELDS order. Nothing taken from the wall clock enters a
trace, so identical inputs give byte-identical traces.
"""
import os
import sys

from dataclasses import dataclass, field

from itflow.data import VERSION
from itflow.devices.queue import DeviceMode
from itflow.devices.script import DirectiveAction, ScriptReader, load_script
from itflow.dsl.instantiate import instantiate, make_device_queue
from itflow.dsl.parser import parse
from itflow.dsl.registry import FactoryRegistry
from itflow.dsl.validate import class_chain, validate
from itflow.exceptions import (
    ITFlowError,
    InvalidWorld,
    UnresolvedDirective,
    UnsupportedVerb,
    WorldParseError,
)
from itflow.flowcore.messages import ControlMessage, ControlVerb
from itflow.flowcore.samples import SampleKind
from itflow.io import dumps_line, file_sha256, read_text, write_jsonl_atomic
from itflow.scene.state import VIEWPOINT_ID
from itflow.utils import get_defaults, get_logger, to_float, to_int

logger = get_logger(__name__)

TRACE_FIELDS = (
    "step",
    "t",
    "injected",
    "directives",
    "emissions",
    "writes",
    "picks",
    "selected",
    "viewpoint",
    "quit",
)


@dataclass
class RunConfig:
    world_path: str
    script_path: str
    steps: int
    dt: float = None
    trace_path: str = None
    # recorded in the trace header only, runs are deterministic
    seed: int = 0

    def __post_init__(self):
        if self.dt is None:
            self.dt = get_defaults("harness").get("dt", 1.0 / 60.0)
        self.steps = to_int(self.steps)
        self.dt = to_float(self.dt)
        self.seed = to_int(self.seed)
        if self.steps < 0:
            raise ValueError(f"steps must be >= 0, got {self.steps}")
        if not self.dt > 0:
            raise ValueError(f"dt must be > 0, got {self.dt}")

    def to_dict(self):
        """Location-independent view of the configuration, for trace headers"""
        return {
            "world": os.path.basename(self.world_path),
            "script": os.path.basename(self.script_path),
            "steps": self.steps,
            "dt": self.dt,
            "seed": self.seed,
        }


@dataclass
class TraceRecord:
    step: int
    t: float
    injected: list = field(default_factory=list)
    directives: list = field(default_factory=list)
    emissions: list = field(default_factory=list)
    writes: list = field(default_factory=list)
    picks: list = field(default_factory=list)
    selected: list = field(default_factory=list)
    viewpoint: dict = field(default_factory=dict)
    quit: bool = False

    @classmethod
    def from_report(cls, report, step, t, directives, scene):
        """Build the record of one step.

        :param report: the StepReport of the step.
        :param step: step index.
        :param t: step time (step * dt).
        :param directives: Directives applied before the step ran.
        :param scene: the SceneState after the step's writes.
        """
        emissions, picks = [], []
        for node_id, oport, sample in report.emissions:
            d = {"node": node_id, "oport": oport}
            d.update(sample.to_dict())
            emissions.append(d)
            if sample.kind is SampleKind.PICK:
                picks.append({"node": node_id, "target": sample.target})
        return cls(
            step=step,
            t=t,
            injected=[s.to_dict() for s in report.injected],
            directives=[d.to_dict() for d in directives],
            emissions=emissions,
            writes=[w.to_dict() for w in report.writes],
            picks=picks,
            selected=scene.selected() if scene is not None else [],
            viewpoint=scene.viewpoint.to_dict() if scene is not None else {},
            quit=bool(report.quit),
        )

    def to_dict(self):
        return {name: getattr(self, name) for name in TRACE_FIELDS}


############
# Directives
############


def _check_writable(spec, target, name):
    """Refuse SetParam on props a world class declares read-only"""
    if spec is None:
        return
    inst = spec.instance(target)
    if inst is None:
        return
    chain, _ = class_chain(spec, inst.type)
    for decl in chain:
        prop = decl.prop(name)
        if prop is not None:
            if prop.access == "r":
                raise UnsupportedVerb(f"'{name}' is read-only on {decl.name}")
            return


def _connect(flow, args):
    origin, srcport = args["origin"], args["srcport"]
    dest, dstport = args["dest"], args["dstport"]
    scene = flow.scene
    is_object = origin not in flow and scene is not None and (
        origin == VIEWPOINT_ID or scene.has_object(origin)
    )
    if is_object:
        if srcport != "locator":
            raise UnsupportedVerb(f"Scene object '{origin}' only offers 'locator', not '{srcport}'")
        scene.add_listener(origin, dest, dstport)
    else:
        flow.connect(origin, srcport, dest, dstport)


def apply_directive(directive, flow, spec=None):
    """Execute one rewiring directive on <flow>.

    :param directive: a Directive read from the script.
    :param flow: the top-level Dataflow; targets may be "composite/inner" paths.
    :param spec: WorldSpec of the world, used to reject writes to read-only props.
    :returns: True once applied.
    :raises UnresolvedDirective: the directive names something that does not
        exist or cannot take the operation.
    """
    action, args = directive.action, directive.args
    try:
        if action is DirectiveAction.DISABLE:
            flow.send_control(ControlMessage(args["target"], ControlVerb.DISABLE))
        elif action is DirectiveAction.ENABLE:
            flow.send_control(ControlMessage(args["target"], ControlVerb.ENABLE))
        elif action is DirectiveAction.DISCONNECT_NODE:
            owner, node = flow.resolve(args["target"])
            owner.disconnect_node(node.id)
        elif action is DirectiveAction.CONNECT:
            _connect(flow, args)
        elif action is DirectiveAction.SET_SELECTION_IT:
            owner, node = flow.resolve(args["target"])
            if not hasattr(node.behavior, "set_selection_it"):
                raise UnsupportedVerb(f"'{args['target']}' does not drive a selection IT")
            node.behavior.set_selection_it(owner, args["it"])
        elif action is DirectiveAction.SET_PARAM:
            _check_writable(spec, args["target"], args["name"])
            flow.send_control(
                ControlMessage(args["target"], ControlVerb.SET_PARAM, {args["name"]: args["value"]})
            )
        elif action is DirectiveAction.SET_MODE:
            flow.send_control(
                ControlMessage(args["target"], ControlVerb.SET_MODE, {"mode": args["mode"]})
            )
    except (ITFlowError, ValueError, TypeError) as e:
        raise UnresolvedDirective(
            f"line {directive.line}: {action.value} at t={directive.at} failed: {e}"
        ) from e
    logger.info(f"Applied {action.value} {args}")
    return True


#########
# Session
#########


class Session:
    """A world instantiated for a scripted run.

    ``step`` follows the order: push the script samples due by t = k * dt to
    the device queue, drain them, apply the directives due by t, run one step
    of the dataflow and record it.
    """

    def __init__(self, spec, reg, devices, directives, dt, tolerance=None):
        self.spec = spec
        self.dt = float(dt)
        if tolerance is None:
            tolerance = get_defaults("harness").get("time_tolerance", 0.0)
        self.tolerance = float(tolerance)
        self.flow, self.scene = instantiate(spec, reg)
        self.queue = make_device_queue(self.flow, self.tolerance)
        for device in devices:
            if device.device_id not in self.queue.devices:
                logger.warning(
                    f"Script device '{device.device_id}' is not in the world, "
                    "its samples will be dropped"
                )
                self.queue.register(device.device_id, DeviceMode.default_for(device.emits))
        self.reader = ScriptReader(devices, self.queue, self.tolerance)
        self.directives = list(directives)
        self.next_directive = 0
        self.step_index = 0
        self.quit = False

    @classmethod
    def open(cls, world_path, script_path, dt=None, reg=None):
        """Load, validate and instantiate a world and its script.

        :raises InvalidWorld: the world has validation diagnostics.
        """
        reg = reg if reg is not None else FactoryRegistry()
        spec = parse(read_text(world_path))
        diagnostics = validate(spec, reg)
        if diagnostics:
            raise InvalidWorld(
                f"{world_path} has {len(diagnostics)} problem(s), first: {diagnostics[0]}",
                diagnostics,
            )
        devices, directives = load_script(read_text(script_path))
        if dt is None:
            dt = get_defaults("harness").get("dt", 1.0 / 60.0)
        return cls(spec, reg, devices, directives, dt)

    def due_directives(self, t):
        due = []
        while (
            self.next_directive < len(self.directives)
            and self.directives[self.next_directive].at <= t + self.tolerance
        ):
            due.append(self.directives[self.next_directive])
            self.next_directive += 1
        return due

    def step(self):
        """Run the next step.

        :returns: its TraceRecord.
        """
        k = self.step_index
        t = k * self.dt
        self.reader.feed_until(t)
        batch = self.queue.drain_for_step(t)
        applied = self.due_directives(t)
        for directive in applied:
            apply_directive(directive, self.flow, self.spec)
        report = self.flow.step(batch, self.dt)
        self.step_index += 1
        self.quit = report.quit
        return TraceRecord.from_report(report, k, t, applied, self.scene)

    def run(self, steps):
        """Yield the records of up to <steps> steps, stopping after a quit step"""
        for _ in range(steps):
            record = self.step()
            yield record
            if record.quit:
                logger.info(f"Quit at step {record.step}")
                break


##########
# Commands
##########


def trace_header(config):
    return {
        "header": {
            "tool": "itflow",
            "version": VERSION,
            "config": config.to_dict(),
            "world_sha256": file_sha256(config.world_path),
            "script_sha256": file_sha256(config.script_path),
        }
    }


def _discard(path):
    if path is not None and os.path.isfile(path):
        os.remove(path)


def cmd_run(config, reg=None):
    """Run a world against a script and write its trace.

    Without a trace path the trace goes to standard output once the run is
    over. A failed run writes nothing and removes any file at the trace path.

    :param config: RunConfig.
    :param reg: FactoryRegistry, defaults to the built-ins.
    :returns: exit status, 0 on success and 1 on failure.
    """
    try:
        session = Session.open(config.world_path, config.script_path, config.dt, reg)
        header = trace_header(config)
    except (OSError, ITFlowError, ValueError) as e:
        print(f"itflow run: {e}", file=sys.stderr)
        _discard(config.trace_path)
        return 1

    def records():
        yield header
        for record in session.run(config.steps):
            yield record.to_dict()

    try:
        if config.trace_path is None:
            lines = [dumps_line(r) + "\n" for r in records()]
            sys.stdout.write("".join(lines))
            count = len(lines)
        else:
            count = write_jsonl_atomic(records(), config.trace_path)
    except (ITFlowError, ValueError) as e:
        print(f"itflow run: step {session.step_index}: {e}", file=sys.stderr)
        _discard(config.trace_path)
        return 1
    logger.info(f"Wrote {count - 1} step records")
    return 0


def cmd_validate(world_path, reg=None):
    """Check a world file, printing one diagnostic per line to standard error.

    :returns: 0 if the world is valid, 1 if it has diagnostics, 2 if it cannot
        be read or parsed.
    """
    try:
        spec = parse(read_text(world_path))
    except OSError as e:
        print(f"itflow validate: {e}", file=sys.stderr)
        return 2
    except WorldParseError as e:
        print(f"{world_path}: {type(e).__name__}: {e}", file=sys.stderr)
        return 2
    diagnostics = validate(spec, reg if reg is not None else FactoryRegistry())
    for d in diagnostics:
        print(f"{world_path}: {d}", file=sys.stderr)
    return 1 if diagnostics else 0
