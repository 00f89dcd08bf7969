import sys

from itflow.utils import get_tool_list

from itflow.scene.geometry import (
    Transform,
    WorldAABB,
    world_aabb,
    overlap,
    ray_aabb,
    nearest_hit,
)
from itflow.scene.state import Frustum, SceneObject, SceneState, VIEWPOINT_ID


# Show user the available tools
def list_tools():
    return get_tool_list(modules=sys.modules[__name__])
