import sys

from itflow.utils import get_tool_list

from itflow.harness.run import (
    RunConfig,
    Session,
    TraceRecord,
    TRACE_FIELDS,
    apply_directive,
    cmd_run,
    cmd_validate,
)
from itflow.harness.cli import main


# Show user the available tools
def list_tools():
    return get_tool_list(modules=sys.modules[__name__])
