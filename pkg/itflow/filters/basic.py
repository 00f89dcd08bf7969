import numpy as np

from itflow.flowcore.node import Filter
from itflow.flowcore.samples import SampleKind, Valuator
from itflow.scene.geometry import Transform
from itflow.scene.state import VIEWPOINT_ID
from itflow.utils import get_logger, to_optional_str, to_str, to_vec3
from itflow.utils.quaternion import quat_conjugate, quat_multiply, quat_normalize

logger = get_logger(__name__)

MOVE_MODES = ("absolute", "offset")


def to_move_mode(value):
    mode = str(value).strip().lower()
    if mode not in MOVE_MODES:
        raise ValueError(f"Move mode must be one of {MOVE_MODES}, got {value!r}")
    return mode


def to_kind_name(value):
    return SampleKind.parse(value).value


class MoveByLocator(Filter):
    """Moves the object received on ``obj`` (or the ``object`` parameter)
    following the locators received on ``pos``.

    In absolute mode the object takes each new pose. In offset mode the change
    between consecutive locators is applied to the object's current pose; the
    first locator after (re)enabling only sets the reference.
    """

    IPORTS = {"obj": SampleKind.PICK, "pos": SampleKind.LOCATOR}
    PARAMS = {
        "object": (to_optional_str, None),
        "mode": (to_move_mode, "absolute"),
    }
    MODES = MOVE_MODES

    def __init__(self, **params):
        super().__init__(**params)
        self.target = self.params["object"]
        self.reference = None

    def params_changed(self, names):
        if "mode" in names:
            self.reference = None
        if "object" in names:
            self.target = self.params["object"]

    def on_enable(self):
        self.reference = None

    def collect(self, inputs):
        super().collect(inputs)
        picks = inputs.get("obj")
        if picks:
            self.target = picks[-1].target

    def process(self, ctx):
        samples = self.inputs.get("pos")
        if not samples:
            return
        last = samples[-1]
        if self.params["mode"] == "absolute":
            if self.target is not None:
                ctx.write_transform(self.target, last)
            return
        reference, self.reference = self.reference, last
        if reference is None or self.target is None:
            return
        if not ctx.scene.has_object(self.target) and self.target != VIEWPOINT_ID:
            logger.warning(f"'{ctx.node_id}' cannot move unknown object '{self.target}'")
            ctx.skip_write()
            return
        current = ctx.scene.get_transform(self.target)
        delta = np.asarray(last.position) - np.asarray(reference.position)
        turn = quat_multiply(last.orientation, quat_conjugate(reference.orientation))
        ctx.write_transform(
            self.target,
            Transform(
                np.asarray(current.position) + delta,
                quat_normalize(quat_multiply(turn, current.orientation)),
            ),
        )


class ChangeObject(Filter):
    """Shows a characteristic (by default the bounding box) of the last picked
    object and hides it on the previous one.
    """

    IPORTS = {"obj": SampleKind.PICK}
    PARAMS = {"flag": (to_str, "bbox_visible")}

    def __init__(self, **params):
        super().__init__(**params)
        self.last = None

    def process(self, ctx):
        picks = self.inputs.get("obj")
        if not picks:
            return
        target = picks[-1].target
        if target == self.last:
            return
        flag = self.params["flag"]
        if self.last is not None and ctx.scene.has_object(self.last):
            ctx.write_flag(self.last, flag, False)
        if target is not None:
            ctx.write_flag(target, flag, True)
        self.last = target


class Location2Viewpoint(Filter):
    """Places the viewpoint at every locator received"""

    IPORTS = {"iportLocator": SampleKind.LOCATOR}

    def process(self, ctx):
        locator = self.latest("iportLocator")
        if locator is not None:
            ctx.write_transform(VIEWPOINT_ID, locator)


class Timer(Filter):
    """Sends the step duration once per execution of the dataflow"""

    OPORTS = {"dt": SampleKind.VALUATOR}

    def process(self, ctx):
        ctx.emit("dt", Valuator(ctx.dt))


class QuitByButton(Filter):
    """Ends the application when a button is pressed (releases are ignored)"""

    IPORTS = {"button": SampleKind.BUTTON}

    def process(self, ctx):
        if any(b.pressed for b in self.inputs.get("button", ())):
            ctx.quit()


class QuitByNavigate(Filter):
    """Ends the application when the tracked locator leaves the box
    [``min``, ``max``].
    """

    IPORTS = {"locator": SampleKind.LOCATOR}
    PARAMS = {
        "min": (to_vec3, (-1000.0, -1000.0, -1000.0)),
        "max": (to_vec3, (1000.0, 1000.0, 1000.0)),
    }

    def check_params(self):
        if any(lo > hi for lo, hi in zip(self.params["min"], self.params["max"])):
            raise ValueError("QuitByNavigate bounds need min <= max")

    def process(self, ctx):
        locator = self.latest("locator")
        if locator is None:
            return
        lo, hi = self.params["min"], self.params["max"]
        if any(p < a or p > b for p, a, b in zip(locator.position, lo, hi)):
            ctx.quit()


class Relay(Filter):
    """Typed pass-through from ``in`` to ``out``"""

    PARAMS = {"kind": (to_kind_name, "locator")}

    def __init__(self, **params):
        super().__init__(**params)
        kind = SampleKind.parse(self.params["kind"])
        self.iports = {"in": kind}
        self.oports = {"out": kind}

    def process(self, ctx):
        for sample in self.inputs.get("in", ()):
            ctx.emit("out", sample)
