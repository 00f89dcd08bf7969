"""Go-Go arm extension.

Within a radius D of the head the virtual hand follows the real hand; beyond
it the virtual arm grows quadratically: r_v = r + k * (r - D) ** 2.
"""
from dataclasses import dataclass

import numpy as np

from itflow.flowcore.messages import ControlVerb
from itflow.flowcore.node import Filter
from itflow.flowcore.samples import Locator, SampleKind
from itflow.utils import get_defaults, get_logger, to_float, to_optional_str, to_vec3

logger = get_logger(__name__)


@dataclass(frozen=True)
class GoGoParams:
    D: float = 0.5
    k: float = 1.0 / 6.0
    epsilon: float = 1e-6

    def __post_init__(self):
        if not self.D > 0:
            raise ValueError(f"GoGo D must be > 0, got {self.D}")
        if self.k < 0:
            raise ValueError(f"GoGo k must be >= 0, got {self.k}")
        if not self.epsilon > 0:
            raise ValueError(f"GoGo epsilon must be > 0, got {self.epsilon}")

    @classmethod
    def from_defaults(cls, **overrides):
        values = {k: float(v) for k, v in get_defaults("gogo").items() if k in ("D", "k", "epsilon")}
        values.update(overrides)
        return cls(**values)


def gogo_radius(r, D, k):
    """Virtual arm length for a real arm length <r>"""
    if r < D:
        return r
    return r + k * (r - D) ** 2


def gogo_map(head, hand, params):
    """Virtual hand pose for the given head and real hand locators.

    :param head: Locator, radial origin.
    :param hand: Locator of the real hand.
    :param params: GoGoParams.
    :returns: Locator; <hand> itself in the identity region or when it sits
        on the head.
    """
    origin = np.asarray(head.position, dtype=np.float64)
    arm = np.asarray(hand.position, dtype=np.float64) - origin
    r = float(np.linalg.norm(arm))
    if r == 0.0 or r < params.D:
        return hand
    r_v = gogo_radius(r, params.D, params.k)
    position = origin + (r_v / r) * arm
    return Locator(tuple(float(x) for x in position), hand.orientation)


class GoGoFilter(Filter):
    """Outputs the virtual hand position computed from the ``hand`` and ``head``
    locators. Until a head sample arrives, ``center`` (or the origin) is used as
    the radial origin.
    """

    IPORTS = {"head": SampleKind.LOCATOR, "hand": SampleKind.LOCATOR}
    OPORTS = {"locator": SampleKind.LOCATOR}
    PARAMS = {
        "D": (to_float, 0.5),
        "k": (to_float, 1.0 / 6.0),
        "center": (to_vec3, (0.0, 0.0, 0.0)),
    }
    DEFAULTS_SECTION = "gogo"

    def __init__(self, **params):
        super().__init__(**params)
        self.head = None
        self.hand = None

    def check_params(self):
        self.gogo_params()

    def gogo_params(self):
        return GoGoParams(D=self.params["D"], k=self.params["k"])

    def process(self, ctx):
        head, hand = self.latest("head"), self.latest("hand")
        if head is not None:
            self.head = head
        if hand is not None:
            self.hand = hand
        if self.hand is None or (head is None and hand is None):
            return
        origin = self.head if self.head is not None else Locator(self.params["center"])
        ctx.emit("locator", gogo_map(origin, self.hand, self.gogo_params()))


class GoGoControl(Filter):
    """Compares the real and virtual hand positions. While they differ by more
    than ``epsilon`` the ``cube`` showing the real hand is visible and the
    ``mover`` node is enabled; both change only when the state flips.
    """

    IPORTS = {"real": SampleKind.LOCATOR, "virtual": SampleKind.LOCATOR}
    PARAMS = {
        "epsilon": (to_float, 1e-6),
        "cube": (to_optional_str, "cube"),
        "mover": (to_optional_str, "moveCube"),
    }
    DEFAULTS_SECTION = "gogo"

    def __init__(self, **params):
        super().__init__(**params)
        self.real = None
        self.virtual = None
        self.diverged = None

    def check_params(self):
        if not self.params["epsilon"] > 0:
            raise ValueError(f"epsilon must be > 0, got {self.params['epsilon']}")

    def process(self, ctx):
        real, virtual = self.latest("real"), self.latest("virtual")
        if real is not None:
            self.real = real
        if virtual is not None:
            self.virtual = virtual
        if self.real is None or self.virtual is None or (real is None and virtual is None):
            return
        gap = np.linalg.norm(np.subtract(self.virtual.position, self.real.position))
        diverged = bool(gap > self.params["epsilon"])
        if diverged == self.diverged:
            return
        self.diverged = diverged
        logger.debug(f"'{ctx.node_id}' hands {'diverged' if diverged else 'coincide'}")
        if self.params["cube"] is not None:
            ctx.write_flag(self.params["cube"], "visible", diverged)
        if self.params["mover"] is not None:
            verb = ControlVerb.ENABLE if diverged else ControlVerb.DISABLE
            ctx.send_control(self.params["mover"], verb)
