from itflow.devices.queue import DeviceQueue
from itflow.dsl.validate import VIEWPOINT_TYPE, instance_params, resolve_type
from itflow.filters.walkthrough import PathSet
from itflow.flowcore.dataflow import Dataflow
from itflow.scene.geometry import Transform
from itflow.scene.state import Frustum, SceneObject, SceneState, VIEWPOINT_ID
from itflow.utils import get_logger, to_bool, to_quat, to_vec3
from itflow.utils.quaternion import quat_normalize

logger = get_logger(__name__)


def _transform(attrs, default=None):
    default = default if default is not None else Transform()
    position = to_vec3(attrs["pos"]) if "pos" in attrs else default.position
    orientation = (
        quat_normalize(to_quat(attrs["orient"])) if "orient" in attrs else default.orientation
    )
    return Transform(position, orientation)


def build_scene(spec):
    """Scene objects, viewpoint, frustum and paths of a world.

    :returns: SceneState.
    """
    frustum = Frustum()
    if spec.frustum is not None:
        f = spec.frustum
        frustum = Frustum(fov=f.fov, aspect=f.aspect, near=f.near, far=f.far)
    viewpoint = Transform()
    if spec.viewpoint is not None:
        viewpoint = Transform(spec.viewpoint.pos, quat_normalize(spec.viewpoint.orient))
    scene = SceneState(frustum=frustum, viewpoint=viewpoint)
    for inst in spec.objects():
        if inst.type == VIEWPOINT_TYPE:
            scene.set_viewpoint(_transform(inst.attrs, scene.viewpoint))
            continue
        attrs = inst.attrs
        scene.add_object(
            SceneObject(
                inst.name,
                _transform(attrs),
                half_extents=to_vec3(attrs.get("halfextents", "0.5 0.5 0.5")),
                visible=to_bool(attrs.get("visible", True)),
                bbox_visible=to_bool(attrs.get("bboxvisible", False)),
                selectable=to_bool(attrs.get("selectable", True)),
                type=inst.type,
            )
        )
    if spec.paths:
        scene.paths = PathSet((p.vertices, p.halfwidth) for p in spec.paths)
    return scene


def instantiate(spec, reg):
    """Build the dataflow and the scene a world describes. Declaration order
    fixes node registration order and connection order.

    :param spec: WorldSpec, expected to validate cleanly.
    :param reg: FactoryRegistry.
    :returns: (Dataflow, SceneState).
    :raises FactoryFailure: a type without factory or a rejected parameter.
    """
    scene = build_scene(spec)
    flow = Dataflow(name=spec.name or "world")
    flow.bind_scene(scene)
    viewpoints = {i.name for i in spec.objects() if i.type == VIEWPOINT_TYPE}
    for inst in spec.nodes():
        base = resolve_type(spec, reg, inst.type)
        behavior = reg.create(base or inst.type, instance_params(inst), instance=inst.name)
        enabled = to_bool(inst.attrs.get("enabled", True))
        flow.add(inst.name, behavior, enabled=enabled)
        logger.debug(f"Created '{inst.name}' ({inst.type})")
    for rel in spec.rels:
        if rel.origin in flow:
            flow.connect(rel.origin, rel.srcport, rel.dest, rel.dstport)
        else:
            observed = VIEWPOINT_ID if rel.origin in viewpoints else rel.origin
            scene.add_listener(observed, rel.dest, rel.dstport)
    logger.info(f"World '{flow.name}': {len(flow)} nodes, {len(flow.edges)} edges")
    return flow, scene


def make_device_queue(flow, tolerance=0.0):
    """DeviceQueue with every device node of <flow> registered in its mode"""
    queue = DeviceQueue(tolerance=tolerance)
    for node in flow.nodes.values():
        if node.is_device and node.behavior.device_id not in queue.devices:
            queue.register(node.behavior.device_id, node.behavior.queue_mode())
    return queue
