import numpy as np

from itflow.exceptions import DuplicateId, TypeMismatch, UnknownObject
from itflow.flowcore.messages import MutationKind
from itflow.flowcore.samples import SampleKind
from itflow.scene.geometry import (
    Transform,
    aabb_in_frustum,
    frustum_planes,
    nearest_hit,
    world_aabb,
)
from itflow.utils import get_defaults, suggest_name

VIEWPOINT_ID = "viewpoint"
FLAGS = ("visible", "bbox_visible", "selectable")


class SceneObject:
    """Scene entry: an oriented box with visibility/selection flags."""

    def __init__(
        self,
        id,
        transform=None,
        half_extents=(0.5, 0.5, 0.5),
        visible=True,
        bbox_visible=False,
        selectable=True,
        type="Box",
    ):
        self.id = str(id)
        self.type = type
        self.transform = transform if transform is not None else Transform()
        half_extents = tuple(float(h) for h in half_extents)
        if len(half_extents) != 3 or any(h < 0 for h in half_extents):
            raise ValueError(f"Half extents of '{id}' must be 3 values >= 0, got {half_extents}")
        self.half_extents = half_extents
        self.visible = bool(visible)
        self.bbox_visible = bool(bbox_visible)
        self.selectable = bool(selectable)

    def aabb(self):
        return world_aabb(self.transform, self.half_extents)

    def to_dict(self):
        return {
            "id": self.id,
            "pos": list(self.transform.position),
            "orient": list(self.transform.orientation),
            "visible": self.visible,
            "bbox": self.bbox_visible,
        }


class Frustum:
    def __init__(self, fov=None, aspect=None, near=None, far=None):
        defaults = get_defaults("frustum")
        self.fov = float(fov if fov is not None else defaults.get("fov", 60.0))
        self.aspect = float(aspect if aspect is not None else defaults.get("aspect", 4.0 / 3.0))
        self.near = float(near if near is not None else defaults.get("near", 0.1))
        self.far = float(far if far is not None else defaults.get("far", 1000.0))
        if not 0.0 < self.near < self.far:
            raise ValueError(f"Frustum needs 0 < near < far, got {self.near}, {self.far}")
        if not 0.0 < self.fov < 180.0 or self.aspect <= 0.0:
            raise ValueError(f"Bad frustum fov/aspect {self.fov}, {self.aspect}")


class SceneState:
    """Headless scene: objects, viewpoint, frustum, change listeners.

    Writes reach the scene only through ``apply_mutation`` at step end, so any
    read made during a process phase sees the state of the previous step.
    """

    def __init__(self, frustum=None, viewpoint=None):
        self.objects = {}
        self.viewpoint = viewpoint if viewpoint is not None else Transform()
        self.frustum = frustum if frustum is not None else Frustum()
        self.listeners = {}
        self.paths = None
        self.flow = None
        self._notifications = []

    ##########
    # Objects
    ##########

    def add_object(self, obj):
        if obj.id in self.objects or obj.id == VIEWPOINT_ID:
            raise DuplicateId(f"Object '{obj.id}' already in the scene")
        self.objects[obj.id] = obj
        return obj

    def has_object(self, object_id):
        return object_id in self.objects

    def get(self, object_id):
        if object_id not in self.objects:
            raise UnknownObject(
                f"Unknown object '{object_id}'." + suggest_name(object_id, self.objects)
            )
        return self.objects[object_id]

    def get_transform(self, object_id):
        if object_id == VIEWPOINT_ID:
            return self.viewpoint
        return self.get(object_id).transform

    def set_viewpoint(self, transform):
        """Direct update, for set-up code outside a step. Filters go through a
        deferred write to the "viewpoint" pseudo-object instead.
        """
        self.viewpoint = transform
        return self.viewpoint

    def get_viewpoint(self):
        return self.viewpoint

    def selected(self):
        """Ids of objects whose bounding box is shown, sorted"""
        return sorted(o.id for o in self.objects.values() if o.bbox_visible)

    def candidates(self, exclude=()):
        """Visible, selectable objects, sorted by id"""
        return sorted(
            o.id
            for o in self.objects.values()
            if o.visible and o.selectable and o.id not in exclude
        )

    ###########
    # Mutations
    ###########

    def apply_mutation(self, write):
        """Apply a DeferredWrite.

        :returns: True if the scene changed (listeners are then notified at the
            start of the next step).
        """
        if write.mutation is MutationKind.SET_TRANSFORM:
            transform = write.payload
            if write.object == VIEWPOINT_ID:
                if transform == self.viewpoint:
                    return False
                self.viewpoint = transform
                self._notify(VIEWPOINT_ID)
                return True
            obj = self.get(write.object)
            if transform == obj.transform:
                return False
            obj.transform = transform
        elif write.mutation is MutationKind.SET_FLAG:
            flag, value = write.payload
            if flag not in FLAGS:
                raise ValueError(f"Unknown object flag '{flag}'." + suggest_name(flag, FLAGS))
            obj = self.get(write.object)
            if getattr(obj, flag) == value:
                return False
            setattr(obj, flag, value)
        else:
            raise ValueError(f"Unknown mutation {write.mutation!r}")
        self._notify(write.object)
        return True

    ###########
    # Listeners
    ###########

    def attach(self, flow):
        """Make <flow> the dataflow listeners deliver to. Listeners registered
        before any dataflow was attached are checked against it first.
        """
        for listeners in self.listeners.values():
            for dest, iport in listeners:
                self._check_listener(flow, dest, iport)
        self.flow = flow

    @staticmethod
    def _check_listener(flow, dest, iport):
        port = flow.node(dest).iport(iport)
        if port.kind is not SampleKind.LOCATOR:
            raise TypeMismatch(
                f"Scene listener port {dest}.{iport} must accept Locator, not {port.kind.title}"
            )

    def add_listener(self, object_id, dest, iport):
        """Deliver future changes of <object_id> as Locator samples to
        <dest>.<iport>, at the start of the step after the change.

        The port is checked against the attached dataflow; without one the
        check waits for ``attach``.

        :returns: the registration tuple (object_id, dest, iport).
        :raises UnknownNode, UnknownPort, TypeMismatch: <dest>.<iport> is not
            a Locator input of the dataflow.
        """
        if object_id != VIEWPOINT_ID:
            self.get(object_id)
        if self.flow is not None:
            self._check_listener(self.flow, dest, iport)
        registration = (object_id, dest, iport)
        self.listeners.setdefault(object_id, []).append((dest, iport))
        return registration

    def remove_listeners(self, node_id):
        for object_id in list(self.listeners):
            self.listeners[object_id] = [l for l in self.listeners[object_id] if l[0] != node_id]

    def _notify(self, object_id):
        sample = self.get_transform(object_id).to_locator()
        for dest, iport in self.listeners.get(object_id, []):
            self._notifications.append((dest, iport, sample))

    def take_notifications(self):
        pending, self._notifications = self._notifications, []
        return pending

    #########
    # Queries
    #########

    def ray_nearest(self, origin, direction, candidates=None):
        """Nearest candidate hit by the ray <origin> + t * <direction>, t >= 0.

        :param candidates: ids to test; defaults to every visible selectable object.
        :returns: (object_id, t) or None.
        """
        direction = np.asarray(direction, dtype=np.float64)
        if abs(np.linalg.norm(direction) - 1.0) > 1e-9:
            raise ValueError(f"Ray direction must be unit length, got {direction}")
        if candidates is None:
            candidates = self.candidates()
        boxes = {}
        for object_id in candidates:
            obj = self.objects.get(object_id)
            if obj is None or not (obj.visible and obj.selectable):
                continue
            boxes[object_id] = obj.aabb()
        return nearest_hit(origin, direction, boxes)

    def frustum_objects(self):
        """Visible objects whose bounds intersect the view frustum (conservative).

        :returns: set of object ids.
        """
        f = self.frustum
        planes = frustum_planes(self.viewpoint, f.fov, f.aspect, f.near, f.far)
        return {
            o.id for o in self.objects.values() if o.visible and aabb_in_frustum(o.aabb(), planes)
        }

    def snapshot(self):
        """Serialisable view of the scene for traces"""
        return {
            "viewpoint": self.viewpoint.to_dict(),
            "objects": [self.objects[k].to_dict() for k in self.objects],
        }
