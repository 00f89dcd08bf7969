"""Values exchanged with the execution environment: control messages between
filters, deferred scene writes and the per-step report.
"""
from enum import Enum
from dataclasses import dataclass, field


class ControlVerb(Enum):
    ENABLE = "enable"
    DISABLE = "disable"
    SET_MODE = "setMode"
    SET_PARAM = "setParam"


@dataclass(frozen=True)
class ControlMessage:
    target: str
    verb: ControlVerb
    payload: dict = field(default_factory=dict)


@dataclass(frozen=True)
class ControlAck:
    target: str
    verb: ControlVerb
    prior: object = None


class MutationKind(Enum):
    SET_TRANSFORM = "setTransform"
    SET_FLAG = "setFlag"


@dataclass(frozen=True)
class DeferredWrite:
    """A scene change requested during a process phase and applied at step end.

    For SET_TRANSFORM the payload is a Transform, for SET_FLAG a
    ``(flag_name, bool)`` pair.
    """

    object: str
    mutation: MutationKind
    payload: object
    origin: str
    sequence: int

    def to_dict(self):
        d = {"object": self.object, "mutation": self.mutation.value}
        if self.mutation is MutationKind.SET_TRANSFORM:
            d["pos"] = list(self.payload.position)
            d["orient"] = list(self.payload.orientation)
        else:
            flag, value = self.payload
            d["flag"] = flag
            d["value"] = value
        d["origin"] = self.origin
        return d


@dataclass
class StepReport:
    step_index: int
    time: float
    deliveries: int = 0
    writes_applied: int = 0
    quit: bool = False
    skipped_writes: int = 0
    dropped_samples: int = 0
    injected: list = field(default_factory=list)
    emissions: list = field(default_factory=list)
    writes: list = field(default_factory=list)
