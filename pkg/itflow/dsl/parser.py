"""Reader and writer of the XML world language.

Root ``<world>``; children ``<class>`` (with ``<prop>``, ``<iport>``,
``<oport>``), ``<object>``, ``<videv>``, ``<it>``, ``<filter>`` (with nested
``<param name value>``), ``<dataflowRel origin srcport dest dstport>``,
``<viewpoint>``, ``<frustum>`` and ``<path halfwidth>`` (with ``<v x y z>``).
Vectors are written "x y z", quaternions "w x y z".

Parsing is strict: unknown elements or attributes and missing attributes are
errors, reported with the line they occur on.
"""
import xml.etree.ElementTree as ET

from xml.parsers import expat

from itflow.devices.queue import DeviceMode
from itflow.dsl.world import (
    ACCESS_MODES,
    ClassDecl,
    DataflowRel,
    FrustumDecl,
    InstanceDecl,
    InstanceKind,
    PathDecl,
    PortDecl,
    PropDecl,
    ViewpointDecl,
    WorldSpec,
    port_kind,
)
from itflow.exceptions import (
    DuplicateName,
    InvalidValue,
    MissingAttribute,
    UnknownElement,
    XmlSyntax,
)
from itflow.utils import get_logger, suggest_name, to_bool, to_float, to_quat, to_vec3
from itflow.utils.quaternion import IDENTITY, quat_norm

logger = get_logger(__name__)


# element -> (required attributes, optional attributes, allowed children)
SCHEMA = {
    "world": ((), ("name",), (
        "class", "object", "videv", "it", "filter", "dataflowRel", "viewpoint", "frustum", "path",
    )),
    "class": (("name",), ("inherits",), ("prop", "iport", "oport")),
    "prop": (("name", "type"), ("access",), ()),
    "iport": (("name", "type"), (), ()),
    "oport": (("name", "type"), (), ()),
    "object": (("name", "type"), (
        "pos", "orient", "halfextents", "visible", "selectable", "bboxvisible",
    ), ()),
    "videv": (("name", "type"), ("mode", "device"), ("param",)),
    "it": (("name", "type"), ("enabled",), ("param",)),
    "filter": (("name", "type"), ("enabled",), ("param",)),
    "param": (("name", "value"), (), ()),
    "dataflowRel": (("origin", "srcport", "dest", "dstport"), (), ()),
    "viewpoint": (("pos",), ("orient",), ()),
    "frustum": ((), ("fov", "aspect", "near", "far"), ()),
    "path": (("halfwidth",), (), ("v",)),
    "v": (("x", "y", "z"), (), ()),
}


def _unit_quat(value):
    q = to_quat(value)
    if not quat_norm(q) > 0:
        raise ValueError(f"Orientation {value!r} has zero length")
    return q


def _half_extents(value):
    h = to_vec3(value)
    if any(x < 0 for x in h):
        raise ValueError(f"Half extents must be >= 0, got {value!r}")
    return h


# checks applied to optional instance attributes
ATTRIBUTE_CHECKS = {
    "pos": to_vec3,
    "orient": _unit_quat,
    "halfextents": _half_extents,
    "visible": to_bool,
    "selectable": to_bool,
    "bboxvisible": to_bool,
    "enabled": to_bool,
    "mode": DeviceMode.parse,
}


class _Parser:
    def __init__(self, text):
        self.lines = {}
        self.root = self._build_tree(text)

    def _build_tree(self, text):
        builder = ET.TreeBuilder()
        parser = expat.ParserCreate()
        parser.SetParamEntityParsing(expat.XML_PARAM_ENTITY_PARSING_NEVER)

        def start(tag, attrs):
            self.lines[builder.start(tag, attrs)] = parser.CurrentLineNumber

        parser.StartElementHandler = start
        parser.EndElementHandler = builder.end
        try:
            parser.Parse(text, True)
            return builder.close()
        except expat.ExpatError as e:
            raise XmlSyntax(expat.ErrorString(e.code), e.lineno)
        except (ValueError, LookupError, AssertionError) as e:
            # undecodable input or an unbalanced tree
            raise XmlSyntax(f"unreadable document: {e}", getattr(parser, "ErrorLineNumber", None))

    def line(self, elem):
        return self.lines.get(elem)

    def check(self, elem, parent_tag):
        tag = elem.tag
        allowed = SCHEMA[parent_tag][2]
        if tag not in allowed:
            raise UnknownElement(
                f"<{tag}> is not allowed in <{parent_tag}>." + suggest_name(tag, allowed),
                self.line(elem),
            )
        required, optional, _ = SCHEMA[tag]
        for name in elem.attrib:
            if name not in required and name not in optional:
                raise UnknownElement(
                    f"<{tag}> has no attribute '{name}'."
                    + suggest_name(name, required + optional),
                    self.line(elem),
                )
        for name in required:
            if name not in elem.attrib:
                raise MissingAttribute(f"<{tag}> needs attribute '{name}'", self.line(elem))
        if not SCHEMA[tag][2]:
            for child in elem:
                raise UnknownElement(f"<{child.tag}> is not allowed in <{tag}>", self.line(child))

    def value(self, elem, name, converter):
        try:
            return converter(elem.attrib[name])
        except (ValueError, TypeError) as e:
            raise InvalidValue(f"<{elem.tag}> {name}={elem.attrib[name]!r}: {e}", self.line(elem))

    def parse(self):
        root = self.root
        if root.tag != "world":
            raise UnknownElement(f"Root element must be <world>, got <{root.tag}>", self.line(root))
        for name in root.attrib:
            if name not in SCHEMA["world"][1]:
                raise UnknownElement(f"<world> has no attribute '{name}'", self.line(root))
        spec = WorldSpec(name=root.get("name"))
        names = set()
        for elem in root:
            self.check(elem, "world")
            tag = elem.tag
            if tag == "class":
                decl = self.parse_class(elem)
                if spec.class_decl(decl.name) is not None:
                    raise DuplicateName(f"Class '{decl.name}' declared twice", decl.line)
                spec.classes.append(decl)
            elif tag == "dataflowRel":
                spec.rels.append(DataflowRel(**elem.attrib, line=self.line(elem)))
            elif tag == "viewpoint":
                if spec.viewpoint is not None:
                    raise DuplicateName("<viewpoint> given twice", self.line(elem))
                orient = IDENTITY
                if "orient" in elem.attrib:
                    orient = self.value(elem, "orient", _unit_quat)
                spec.viewpoint = ViewpointDecl(
                    self.value(elem, "pos", to_vec3), orient, line=self.line(elem)
                )
            elif tag == "frustum":
                if spec.frustum is not None:
                    raise DuplicateName("<frustum> given twice", self.line(elem))
                spec.frustum = FrustumDecl(
                    **{k: self.value(elem, k, to_float) for k in elem.attrib},
                    line=self.line(elem),
                )
            elif tag == "path":
                spec.paths.append(self.parse_path(elem))
            else:
                inst = self.parse_instance(elem)
                if inst.name in names:
                    raise DuplicateName(f"Instance '{inst.name}' declared twice", inst.line)
                names.add(inst.name)
                spec.instances.append(inst)
        return spec

    def parse_class(self, elem):
        props, iports, oports = [], [], []
        seen = set()
        for child in elem:
            self.check(child, "class")
            name = child.get("name")
            if name in seen:
                raise DuplicateName(
                    f"'{name}' declared twice in class '{elem.get('name')}'", self.line(child)
                )
            seen.add(name)
            if child.tag == "prop":
                access = child.get("access", "rw")
                if access not in ACCESS_MODES:
                    raise InvalidValue(
                        f"Prop '{name}' access must be one of {ACCESS_MODES}, got {access!r}",
                        self.line(child),
                    )
                props.append(PropDecl(name, child.get("type"), access, line=self.line(child)))
                continue
            kind = port_kind(name, child.get("type"))
            if kind is None:
                raise InvalidValue(
                    f"Cannot tell the sample kind of port '{name}' (type {child.get('type')!r})",
                    self.line(child),
                )
            decl = PortDecl(name, child.get("type"), kind, line=self.line(child))
            (iports if child.tag == "iport" else oports).append(decl)
        return ClassDecl(
            elem.get("name"),
            elem.get("inherits"),
            tuple(props),
            tuple(iports),
            tuple(oports),
            line=self.line(elem),
        )

    def parse_instance(self, elem):
        attrs = {}
        for name, raw in elem.attrib.items():
            if name in ("name", "type"):
                continue
            if name in ATTRIBUTE_CHECKS:
                self.value(elem, name, ATTRIBUTE_CHECKS[name])
            attrs[name] = raw
        params, param_lines = {}, {}
        for child in elem:
            self.check(child, elem.tag)
            name = child.get("name")
            if name in params:
                raise DuplicateName(
                    f"Parameter '{name}' given twice to '{elem.get('name')}'", self.line(child)
                )
            params[name] = child.get("value")
            param_lines[name] = self.line(child)
        return InstanceDecl(
            InstanceKind(elem.tag),
            elem.get("name"),
            elem.get("type"),
            params,
            attrs,
            line=self.line(elem),
            param_lines=param_lines,
        )

    def parse_path(self, elem):
        halfwidth = self.value(elem, "halfwidth", to_float)
        if not halfwidth > 0:
            raise InvalidValue(f"Path half-width must be > 0, got {halfwidth}", self.line(elem))
        vertices = []
        for child in elem:
            self.check(child, "path")
            vertices.append(tuple(self.value(child, axis, to_float) for axis in ("x", "y", "z")))
        if len(vertices) < 2:
            raise InvalidValue(f"A path needs at least 2 vertices, got {len(vertices)}", self.line(elem))
        return PathDecl(halfwidth, tuple(vertices), line=self.line(elem))


def parse(text):
    """Parse a world document.

    :param text: XML document (str or bytes).
    :returns: WorldSpec.
    :raises WorldParseError: XmlSyntax, UnknownElement, MissingAttribute,
        DuplicateName or InvalidValue, carrying the offending line.
    """
    return _Parser(text).parse()


def _fmt(values):
    return " ".join(repr(float(v)) for v in values)


def _indent(elem, level=0):
    pad = "\n" + "  " * level
    if len(elem):
        elem.text = pad + "  "
        for child in elem:
            _indent(child, level + 1)
        child.tail = pad
    if level:
        elem.tail = elem.tail or pad


def serialize(spec):
    """Write <spec> back as a world document; ``parse(serialize(spec)) == spec``.

    :returns: str.
    """
    root = ET.Element("world")
    if spec.name is not None:
        root.set("name", spec.name)
    for decl in spec.classes:
        elem = ET.SubElement(root, "class", name=decl.name)
        if decl.inherits is not None:
            elem.set("inherits", decl.inherits)
        for prop in decl.props:
            ET.SubElement(elem, "prop", name=prop.name, type=prop.type, access=prop.access)
        for tag, ports in (("iport", decl.iports), ("oport", decl.oports)):
            for port in ports:
                ET.SubElement(elem, tag, name=port.name, type=port.type)
    if spec.viewpoint is not None:
        ET.SubElement(
            root, "viewpoint", pos=_fmt(spec.viewpoint.pos), orient=_fmt(spec.viewpoint.orient)
        )
    if spec.frustum is not None:
        elem = ET.SubElement(root, "frustum")
        for name in ("fov", "aspect", "near", "far"):
            value = getattr(spec.frustum, name)
            if value is not None:
                elem.set(name, repr(float(value)))
    for path in spec.paths:
        elem = ET.SubElement(root, "path", halfwidth=repr(float(path.halfwidth)))
        for x, y, z in path.vertices:
            ET.SubElement(elem, "v", x=repr(float(x)), y=repr(float(y)), z=repr(float(z)))
    for inst in spec.instances:
        elem = ET.SubElement(root, inst.kind.value, name=inst.name, type=inst.type)
        for name, value in inst.attrs.items():
            elem.set(name, value)
        for name, value in inst.params.items():
            ET.SubElement(elem, "param", name=name, value=value)
    for rel in spec.rels:
        ET.SubElement(
            root, "dataflowRel", origin=rel.origin, srcport=rel.srcport, dest=rel.dest, dstport=rel.dstport
        )
    _indent(root)
    return ET.tostring(root, encoding="unicode") + "\n"
