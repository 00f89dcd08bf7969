import sys

from itflow.utils import get_tool_list

from itflow.dsl.world import (
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
)
from itflow.dsl.parser import parse, serialize
from itflow.dsl.registry import FactoryRegistry
from itflow.dsl.validate import Diagnostic, validate
from itflow.dsl.instantiate import build_scene, instantiate, make_device_queue


# Show user the available tools
def list_tools():
    return get_tool_list(modules=sys.modules[__name__])
