import sys

from itflow.utils import get_tool_list

from itflow.flowcore.samples import SampleKind, Locator, Valuator, Button, Pick, sample_from_dict
from itflow.flowcore.node import Filter, FilterNode, InputPort, OutputPort
from itflow.flowcore.messages import (
    ControlAck,
    ControlMessage,
    ControlVerb,
    DeferredWrite,
    MutationKind,
    StepReport,
)
from itflow.flowcore.dataflow import Dataflow, Edge
from itflow.flowcore.execution import ExecutionModel, SimpleExecutionModel, StepContext


# Show user the available tools
def list_tools():
    return get_tool_list(modules=sys.modules[__name__])
