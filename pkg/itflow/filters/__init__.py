import sys

from itflow.utils import get_tool_list

from itflow.filters.basic import (
    MoveByLocator,
    ChangeObject,
    Location2Viewpoint,
    Timer,
    QuitByButton,
    QuitByNavigate,
    Relay,
)
from itflow.filters.selection import SelectObj, Select1ByPointing, Select1ByTouching
from itflow.filters.gogo import GoGoParams, GoGoFilter, GoGoControl, gogo_map, gogo_radius
from itflow.filters.control import MoveControl, MovePhase
from itflow.filters.walkthrough import (
    PathSet,
    Motorcycle,
    InsidePath,
    MoveUpDn,
    CombineXZY,
    point_segment_distance_xz,
)
from itflow.filters.composite import CompositeIT, GoGoIT, RayCastIT, make_composite


# Show user the available tools
def list_tools():
    return get_tool_list(modules=sys.modules[__name__])
