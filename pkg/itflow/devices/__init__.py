import sys

from itflow.utils import get_tool_list

from itflow.devices.queue import DeviceMode, DeviceQueue, DeviceSample
from itflow.devices.virtual import (
    VirtualInputDevice,
    LocatorDevice,
    ButtonDevice,
    ValuatorDevice,
    XInput,
)
from itflow.devices.adapters import Buttons2Locator, buttons_to_locator, BUTTON_IDS
from itflow.devices.script import (
    Directive,
    DirectiveAction,
    ScriptedDevice,
    ScriptReader,
    load_script,
)


# Show user the available tools
def list_tools():
    return get_tool_list(modules=sys.modules[__name__])
