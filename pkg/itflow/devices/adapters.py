"""Device replacement: a 6DOF tracker emulated by 12 buttons, one pair per
degree of freedom. Any technique reading a Locator works unchanged with it.
"""
from itflow.devices.queue import DeviceMode
from itflow.devices.virtual import VirtualInputDevice
from itflow.flowcore.samples import Locator, SampleKind
from itflow.utils import get_logger, to_float, to_quat, to_vec3
from itflow.utils.quaternion import IDENTITY, quat_from_axis_angle, quat_multiply, quat_normalize

logger = get_logger(__name__)

TRANSLATION_AXES = ("x", "y", "z")
ROTATION_AXES = ("rx", "ry", "rz")
BUTTON_IDS = tuple(
    sign + axis for axis in TRANSLATION_AXES + ROTATION_AXES for sign in ("+", "-")
)


def _axis_sign(state, axis):
    return int(bool(state.get("+" + axis))) - int(bool(state.get("-" + axis)))


def buttons_to_locator(state, prev, dt, rates):
    """Integrate the held buttons over one step.

    :param state: button id -> held flag, ids in BUTTON_IDS. Held pairs cancel.
    :param prev: the previous Locator.
    :param dt: step duration (s).
    :param rates: {"lin": m/s, "ang": deg/s}.
    :returns: the new Locator, or None when no button is held.
    """
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt}")
    if not any(state.get(b) for b in BUTTON_IDS):
        return None
    lin, ang = rates["lin"], rates["ang"]
    position = list(prev.position)
    for i, axis in enumerate(TRANSLATION_AXES):
        position[i] += _axis_sign(state, axis) * lin * dt
    orientation = prev.orientation
    # fixed X, Y, Z order, each applied in the world frame
    for axis in ROTATION_AXES:
        sign = _axis_sign(state, axis)
        if sign:
            step = quat_from_axis_angle(axis[1], sign * ang * dt)
            orientation = quat_multiply(step, orientation)
    if orientation is not prev.orientation:
        orientation = quat_normalize(orientation)
    return Locator(tuple(position), orientation)


class Buttons2Locator(VirtualInputDevice):
    """Virtual tracker fed by Button samples whose ids are in BUTTON_IDS
    ("+x", "-x", ..., "+rz", "-rz"). Emits its integrated pose every step in
    which a button is held.
    """

    OPORTS = {"locator": SampleKind.LOCATOR}
    PARAMS = dict(
        VirtualInputDevice.PARAMS,
        pos=(to_vec3, (0.0, 0.0, 0.0)),
        orient=(to_quat, IDENTITY),
        lin=(to_float, 0.5),
        ang=(to_float, 45.0),
    )
    DEFAULTS_SECTION = "buttons2locator"

    def __init__(self, **params):
        super().__init__(**params)
        self.held = {b: False for b in BUTTON_IDS}
        self.pose = Locator(self.params["pos"], quat_normalize(self.params["orient"]))

    def check_params(self):
        super().check_params()
        if self.params["lin"] < 0 or self.params["ang"] < 0:
            raise ValueError("Button rates must be >= 0")

    def queue_mode(self):
        if self.params.get("mode") is not None:
            return DeviceMode.parse(self.params["mode"])
        return DeviceMode.QUEUE_ALL

    def process(self, ctx):
        pending, self.pending = self.pending, []
        for sample in pending:
            if sample.kind is not SampleKind.BUTTON or sample.id not in self.held:
                logger.warning(f"'{self.device_id}' ignores {sample}")
                continue
            self.held[sample.id] = sample.pressed
        rates = {"lin": self.params["lin"], "ang": self.params["ang"]}
        pose = buttons_to_locator(self.held, self.pose, ctx.dt, rates)
        if pose is not None:
            self.pose = pose
            ctx.emit("locator", pose)
