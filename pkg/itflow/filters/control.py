from enum import Enum

from itflow.exceptions import NoPickPort
from itflow.flowcore.messages import ControlVerb
from itflow.flowcore.node import Filter
from itflow.flowcore.samples import Pick, SampleKind
from itflow.utils import get_logger, to_optional_str

logger = get_logger(__name__)


class MovePhase(Enum):
    SELECTING = "selecting"
    MOVING = "moving"


class MoveControl(Filter):
    """Switches an application between selecting and moving objects.

    While selecting, the selection IT is enabled and the mover disabled; the
    last pick received on ``selected`` is remembered. A grab press with a pick
    at hand switches to moving: the selection IT is disabled, the mover enabled
    and the pick forwarded on ``obj``. A release press goes back to selecting.
    """

    IPORTS = {
        "grab": SampleKind.BUTTON,
        "release": SampleKind.BUTTON,
        "selected": SampleKind.PICK,
    }
    OPORTS = {"obj": SampleKind.PICK}
    PARAMS = {
        "selection_it": (to_optional_str, None),
        "mover": (to_optional_str, None),
    }

    def __init__(self, **params):
        super().__init__(**params)
        self.phase = MovePhase.SELECTING
        self.current_pick = None
        self.synced = False

    @property
    def selection_it(self):
        return self.params["selection_it"]

    @property
    def mover(self):
        return self.params["mover"]

    def on_enable(self):
        self.synced = False

    def params_changed(self, names):
        self.synced = False

    def set_selection_it(self, flow, it):
        """Make <it> the selection IT driven by this filter.

        :param flow: the dataflow owning <it>.
        :param it: node id exposing a Pick output port.
        :returns: the previous selection IT.
        """
        node = flow.node(it)
        if not any(p.kind is SampleKind.PICK for p in node.oports.values()):
            raise NoPickPort(f"Node '{it}' has no Pick output port")
        prior = self.params["selection_it"]
        self.params["selection_it"] = node.id
        if prior != node.id:
            logger.info(f"Selection IT: {prior} -> {node.id}")
            self.synced = False
        return prior

    def _apply_phase(self, ctx):
        moving = self.phase is MovePhase.MOVING
        if self.selection_it is not None:
            ctx.send_control(self.selection_it, ControlVerb.DISABLE if moving else ControlVerb.ENABLE)
        if self.mover is not None:
            ctx.send_control(self.mover, ControlVerb.ENABLE if moving else ControlVerb.DISABLE)
        self.synced = True

    def process(self, ctx):
        for pick in self.inputs.get("selected", ()):
            self.current_pick = pick.target
        if not self.synced:
            self._apply_phase(ctx)
        grab = any(b.pressed for b in self.inputs.get("grab", ()))
        release = any(b.pressed for b in self.inputs.get("release", ()))
        if self.phase is MovePhase.SELECTING and grab and self.current_pick is not None:
            self.phase = MovePhase.MOVING
            logger.debug(f"'{ctx.node_id}' moving '{self.current_pick}'")
            self._apply_phase(ctx)
            ctx.emit("obj", Pick(self.current_pick))
        elif self.phase is MovePhase.MOVING and release:
            self.phase = MovePhase.SELECTING
            logger.debug(f"'{ctx.node_id}' back to selection")
            self._apply_phase(ctx)
