"""Walkthrough navigation: a motorcycle-like mouse control kept inside a set of
predefined paths, plus vertical movement.
"""
import numpy as np

from itflow.exceptions import InvalidStartPose
from itflow.flowcore.node import Filter
from itflow.flowcore.samples import Locator, SampleKind, Valuator
from itflow.utils import get_logger, to_float, to_vec3
from itflow.utils.quaternion import forward, yaw_of, yaw_quat

logger = get_logger(__name__)


def point_segment_distance_xz(point, a, b):
    """Distance from <point> to the segment [<a>, <b>] in the ground plane"""
    p = np.array([point[0], point[2]], dtype=np.float64)
    a = np.array([a[0], a[2]], dtype=np.float64)
    b = np.array([b[0], b[2]], dtype=np.float64)
    ab = b - a
    length2 = float(ab @ ab)
    if length2 == 0.0:
        return float(np.linalg.norm(p - a))
    t = min(1.0, max(0.0, float((p - a) @ ab) / length2))
    return float(np.linalg.norm(p - (a + t * ab)))


class PathSet:
    """Polylines the viewpoint may travel along, each with its half-width"""

    def __init__(self, paths=()):
        self.paths = []
        for vertices, half_width in paths:
            self.add(vertices, half_width)

    def add(self, vertices, half_width):
        vertices = [to_vec3(v) for v in vertices]
        half_width = float(half_width)
        if len(vertices) < 2:
            raise ValueError(f"A path needs at least 2 vertices, got {len(vertices)}")
        if not half_width > 0:
            raise ValueError(f"Path half-width must be > 0, got {half_width}")
        self.paths.append((vertices, half_width))

    def __len__(self):
        return len(self.paths)

    def distance(self, point):
        """Smallest margin-relative distance: <= 0 means inside some path"""
        best = np.inf
        for vertices, half_width in self.paths:
            for a, b in zip(vertices, vertices[1:]):
                best = min(best, point_segment_distance_xz(point, a, b) - half_width)
        return best

    def contains(self, point):
        """Closed test: a point at exactly half-width from a segment is inside"""
        for vertices, half_width in self.paths:
            for a, b in zip(vertices, vertices[1:]):
                if point_segment_distance_xz(point, a, b) <= half_width:
                    return True
        return False


class Motorcycle(Filter):
    """Computes a candidate viewpoint pose from the mouse position in the
    window. The horizontal offset from the window center sets the yaw rate, the
    vertical offset the forward speed (mouse up goes forward). Movement only
    happens between a ``start`` and a ``stop`` press, integrated over the
    durations received on ``dt``.
    """

    IPORTS = {
        "mouse": SampleKind.LOCATOR,
        "start": SampleKind.BUTTON,
        "stop": SampleKind.BUTTON,
        "dt": SampleKind.VALUATOR,
    }
    OPORTS = {"locator": SampleKind.LOCATOR}
    PARAMS = {
        "width": (to_float, 640.0),
        "height": (to_float, 480.0),
        "omega_max": (to_float, 60.0),
        "speed_max": (to_float, 5.0),
        "pos": (to_vec3, None),
        "yaw": (to_float, None),
    }
    DEFAULTS_SECTION = "motorcycle"

    def __init__(self, **params):
        super().__init__(**params)
        self.engaged = False
        self.position = None
        self.yaw = None
        self.mouse = (self.params["width"] / 2.0, self.params["height"] / 2.0)

    def check_params(self):
        if not (self.params["width"] > 0 and self.params["height"] > 0):
            raise ValueError("Window dimensions must be > 0")

    def _init_pose(self, scene):
        viewpoint = scene.get_viewpoint() if scene is not None else None
        if self.params["pos"] is not None:
            self.position = np.array(self.params["pos"])
        else:
            self.position = np.array(viewpoint.position if viewpoint else (0.0, 0.0, 0.0))
        if self.params["yaw"] is not None:
            self.yaw = self.params["yaw"]
        else:
            self.yaw = yaw_of(viewpoint.orientation) if viewpoint else 0.0

    def process(self, ctx):
        if self.position is None:
            self._init_pose(ctx.scene)
        mouse = self.latest("mouse")
        if mouse is not None:
            self.mouse = (mouse.position[0], mouse.position[1])
        if any(b.pressed for b in self.inputs.get("start", ())):
            self.engaged = True
        if any(b.pressed for b in self.inputs.get("stop", ())):
            self.engaged = False
        tick = self.latest("dt")
        if not self.engaged or tick is None or not tick.value > 0:
            return
        dt = tick.value
        u = float(np.clip(2.0 * self.mouse[0] / self.params["width"] - 1.0, -1.0, 1.0))
        v = float(np.clip(2.0 * self.mouse[1] / self.params["height"] - 1.0, -1.0, 1.0))
        self.yaw += -u * self.params["omega_max"] * dt
        speed = -v * self.params["speed_max"]
        orientation = yaw_quat(self.yaw)
        self.position = self.position + forward(orientation) * speed * dt
        ctx.emit("locator", Locator(tuple(float(x) for x in self.position), orientation))


class InsidePath(Filter):
    """Keeps candidate poses inside the scene paths: a valid candidate passes
    through, an invalid one is replaced by the last valid position (keeping the
    candidate's orientation).
    """

    IPORTS = {"candidate": SampleKind.LOCATOR}
    OPORTS = {"locator": SampleKind.LOCATOR}
    PARAMS = {"start": (to_vec3, None)}

    def __init__(self, **params):
        super().__init__(**params)
        self.last_valid = None

    def _init_start(self, scene):
        paths = scene.paths
        if not paths:
            raise InvalidStartPose("No paths defined in the scene")
        start = self.params["start"]
        if start is None:
            start = scene.get_viewpoint().position
        if not paths.contains(start):
            raise InvalidStartPose(
                f"Start position {tuple(start)} is off every path "
                f"(margin {paths.distance(start):.3f} m)"
            )
        self.last_valid = tuple(float(x) for x in start)

    def process(self, ctx):
        if self.last_valid is None:
            self._init_start(ctx.scene)
        paths = ctx.scene.paths
        for candidate in self.inputs.get("candidate", ()):
            if paths.contains(candidate.position):
                self.last_valid = candidate.position
                ctx.emit("locator", candidate)
            else:
                logger.debug(f"'{ctx.node_id}' clamps {candidate.position} to {self.last_valid}")
                ctx.emit("locator", Locator(self.last_valid, candidate.orientation))


class MoveUpDn(Filter):
    """Vertical position driven by two buttons, held to move"""

    IPORTS = {
        "up": SampleKind.BUTTON,
        "down": SampleKind.BUTTON,
        "dt": SampleKind.VALUATOR,
    }
    OPORTS = {"y": SampleKind.VALUATOR}
    PARAMS = {"speed": (to_float, 1.0), "y0": (to_float, None)}
    DEFAULTS_SECTION = "move_updn"

    def __init__(self, **params):
        super().__init__(**params)
        self.held_up = False
        self.held_down = False
        self.y = self.params["y0"]

    def process(self, ctx):
        if self.y is None:
            self.y = ctx.scene.get_viewpoint().position[1] if ctx.scene is not None else 0.0
        for b in self.inputs.get("up", ()):
            self.held_up = b.pressed
        for b in self.inputs.get("down", ()):
            self.held_down = b.pressed
        tick = self.latest("dt")
        if tick is None or not tick.value > 0:
            return
        direction = int(self.held_up) - int(self.held_down)
        if direction == 0:
            return
        self.y += direction * self.params["speed"] * tick.value
        ctx.emit("y", Valuator(self.y))


class CombineXZY(Filter):
    """Ground position (x, z) and orientation from ``ground``, height from ``y``"""

    IPORTS = {"ground": SampleKind.LOCATOR, "y": SampleKind.VALUATOR}
    OPORTS = {"locator": SampleKind.LOCATOR}

    def __init__(self, **params):
        super().__init__(**params)
        self.ground = None
        self.y = None

    def process(self, ctx):
        ground, y = self.latest("ground"), self.latest("y")
        if ground is not None:
            self.ground = ground
        if y is not None:
            self.y = y.value
        if self.ground is None or (ground is None and y is None):
            return
        height = self.y if self.y is not None else self.ground.position[1]
        x, _, z = self.ground.position
        ctx.emit("locator", Locator((x, height, z), self.ground.orientation))
