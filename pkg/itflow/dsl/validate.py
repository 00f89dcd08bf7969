from dataclasses import dataclass

from itflow.dsl.world import InstanceKind
from itflow.exceptions import FactoryFailure, UnsupportedVerb
from itflow.flowcore.samples import SampleKind
from itflow.scene.state import VIEWPOINT_ID
from itflow.utils import get_logger, suggest_name

logger = get_logger(__name__)

# oport offered by every scene object, carrying its transform on change
OBJECT_OPORT = "locator"

# object type standing for the viewpoint rather than a box
VIEWPOINT_TYPE = "Viewpoint"


@dataclass(frozen=True)
class Diagnostic:
    code: str
    message: str
    line: int = None

    def __str__(self):
        where = f"line {self.line}" if self.line is not None else "world"
        return f"{where}: {self.code}: {self.message}"


def instance_params(inst):
    """Parameters handed to the factory of <inst>: its <param> children, plus
    the device id and queue mode of a videv.
    """
    params = dict(inst.params)
    if inst.kind is InstanceKind.VIDEV:
        for name in ("device", "mode"):
            if name in inst.attrs:
                params[name] = inst.attrs[name]
    return params


def class_chain(spec, type_name):
    """Class declarations met walking up from <type_name>.

    :returns: (list of ClassDecl, True when the walk loops).
    """
    chain, seen = [], set()
    current = type_name
    while current is not None:
        decl = spec.class_decl(current)
        if decl is None:
            break
        if current in seen:
            return chain, True
        seen.add(current)
        chain.append(decl)
        current = decl.inherits
    return chain, False


def resolve_type(spec, reg, type_name):
    """Registered type building instances of <type_name>: itself when
    registered, otherwise its nearest registered ancestor.

    :returns: the registered type name, or None.
    """
    if type_name in reg:
        return type_name
    chain, _ = class_chain(spec, type_name)
    for decl in chain:
        if decl.inherits is not None and decl.inherits in reg:
            return decl.inherits
    return None


class _Validator:
    def __init__(self, spec, reg):
        self.spec = spec
        self.reg = reg
        self.diagnostics = []
        self.behaviors = {}
        self.objects = {i.name for i in spec.objects()}
        self.nodes = {i.name: i for i in spec.nodes()}

    def report(self, code, message, line=None):
        self.diagnostics.append(Diagnostic(code, message, line))

    def check_classes(self):
        reported = set()
        for decl in self.spec.classes:
            chain, loops = class_chain(self.spec, decl.name)
            if loops and decl.name not in reported:
                reported.update(c.name for c in chain)
                self.report(
                    "InheritanceCycle", f"Class '{decl.name}' inherits from itself", decl.line
                )

    def check_objects(self):
        for inst in self.spec.objects():
            if inst.name == VIEWPOINT_ID and inst.type != VIEWPOINT_TYPE:
                self.report(
                    "ReservedName",
                    f"'{VIEWPOINT_ID}' names the viewpoint; object of type '{inst.type}' "
                    f"must be called something else, or have type '{VIEWPOINT_TYPE}'",
                    inst.line,
                )

    def check_instances(self):
        for inst in self.spec.nodes():
            base = resolve_type(self.spec, self.reg, inst.type)
            if base is None:
                known = self.reg.names() + [c.name for c in self.spec.classes]
                self.report(
                    "UnknownType",
                    f"'{inst.name}' has type '{inst.type}', which is neither registered "
                    f"nor derived from a registered type." + suggest_name(inst.type, known),
                    inst.line,
                )
                continue
            try:
                behavior = self.reg.create(base, instance_params(inst), instance=inst.name)
            except FactoryFailure as e:
                code = "UnknownParam" if isinstance(e.__cause__, UnsupportedVerb) else "InvalidParam"
                self.report(code, str(e), inst.line)
                continue
            self.behaviors[inst.name] = behavior
            if inst.kind is InstanceKind.VIDEV:
                if not hasattr(behavior, "inject"):
                    self.report("NotADevice", f"'{inst.name}' ({inst.type}) is not a device", inst.line)
                elif behavior.iports:
                    self.report(
                        "DeviceHasInputs",
                        f"Device '{inst.name}' must not have input ports, found {list(behavior.iports)}",
                        inst.line,
                    )
            self.check_declared_ports(inst, behavior)

    def check_declared_ports(self, inst, behavior):
        chain, _ = class_chain(self.spec, inst.type)
        for decl in chain:
            for side, ports in (("iports", decl.iports), ("oports", decl.oports)):
                actual = getattr(behavior, side)
                for port in ports:
                    if port.name not in actual:
                        self.report(
                            "UnknownPort",
                            f"Class '{decl.name}' declares {side[:-1]} '{port.name}', "
                            f"missing on {inst.type}." + suggest_name(port.name, actual),
                            port.line,
                        )
                    elif actual[port.name] is not port.kind:
                        self.report(
                            "TypeMismatch",
                            f"Class '{decl.name}' declares {port.name} as {port.kind.title}, "
                            f"{inst.type} has {actual[port.name].title}",
                            port.line,
                        )

    def resolve_name(self, name, line, role):
        if name in self.nodes or (role == "origin" and (name in self.objects or name == VIEWPOINT_ID)):
            return True
        known = list(self.nodes) + (list(self.objects) if role == "origin" else [])
        self.report(
            "UnresolvedName",
            f"dataflowRel {role} '{name}' is not declared." + suggest_name(name, known),
            line,
        )
        return False

    def port(self, node, name, side, line):
        behavior = self.behaviors.get(node)
        if behavior is None:
            return None
        ports = getattr(behavior, side)
        if name not in ports:
            self.report(
                "UnknownPort",
                f"'{node}' has no {side[:-1]} '{name}'." + suggest_name(name, ports),
                line,
            )
            return None
        return ports[name]

    def check_rels(self):
        edges = []
        for rel in self.spec.rels:
            ok = self.resolve_name(rel.origin, rel.line, "origin")
            ok = self.resolve_name(rel.dest, rel.line, "dest") and ok
            if not ok:
                continue
            if rel.origin in self.nodes:
                src = self.port(rel.origin, rel.srcport, "oports", rel.line)
                edges.append((rel.origin, rel.dest, rel.line))
            elif rel.srcport != OBJECT_OPORT:
                self.report(
                    "UnknownPort",
                    f"Scene object '{rel.origin}' only offers '{OBJECT_OPORT}', not '{rel.srcport}'",
                    rel.line,
                )
                continue
            else:
                src = SampleKind.LOCATOR
            dst = self.port(rel.dest, rel.dstport, "iports", rel.line)
            if src is not None and dst is not None and src is not dst:
                self.report(
                    "TypeMismatch",
                    f"{rel.origin}.{rel.srcport} ({src.title}) cannot feed "
                    f"{rel.dest}.{rel.dstport} ({dst.title})",
                    rel.line,
                )
        self.check_cycles(edges)

    def check_cycles(self, edges):
        successors = {}
        for src, dst, line in edges:
            successors.setdefault(src, []).append((dst, line))
        state = {}

        def visit(node):
            state[node] = "active"
            for nxt, line in successors.get(node, ()):
                if state.get(nxt) == "active":
                    self.report("CycleCreated", f"dataflowRel {node} -> {nxt} closes a cycle", line)
                    return True
                if nxt not in state and visit(nxt):
                    return True
            state[node] = "done"
            return False

        for node in self.nodes:
            if node not in state and visit(node):
                break

    def run(self):
        self.check_classes()
        self.check_objects()
        self.check_instances()
        self.check_rels()
        return self.diagnostics


def validate(spec, reg):
    """Check a parsed world against <reg>.

    Checks name resolution, port kinds of every dataflowRel, inheritance
    acyclicity, inputless devices, the reserved viewpoint name, parameter
    names and values.

    :returns: list of Diagnostic, empty when the world is valid.
    """
    diagnostics = _Validator(spec, reg).run()
    for d in diagnostics:
        logger.debug(str(d))
    return diagnostics
