"""Sample kinds flowing between ports: Locator (6DOF), Valuator (real),
Button (state) and Pick (optional object reference).
"""
import math

from enum import Enum
from dataclasses import dataclass

from itflow.exceptions import InvalidSample, UnknownSampleKind
from itflow.utils.quaternion import IDENTITY, NORM_TOLERANCE, quat_norm


class SampleKind(Enum):
    LOCATOR = "locator"
    VALUATOR = "valuator"
    BUTTON = "button"
    PICK = "pick"

    @classmethod
    def parse(cls, value):
        """Accept a SampleKind, "locator", "Locator", ..."""
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            raise UnknownSampleKind(
                f"Unknown sample kind {value!r}, expected one of "
                f"{[k.value for k in cls]}"
            )

    @property
    def title(self):
        return self.value.capitalize()


def _finite(values, what):
    out = tuple(float(v) for v in values)
    if not all(math.isfinite(v) for v in out):
        raise InvalidSample(f"{what} must be finite, got {out}")
    return out


@dataclass(frozen=True)
class Locator:
    position: tuple = (0.0, 0.0, 0.0)
    orientation: tuple = IDENTITY

    kind = SampleKind.LOCATOR

    def __post_init__(self):
        position = _finite(self.position, "Locator position")
        orientation = _finite(self.orientation, "Locator orientation")
        if len(position) != 3 or len(orientation) != 4:
            raise InvalidSample(
                f"Locator needs a 3-vector and a quaternion, got {position}, {orientation}"
            )
        if abs(quat_norm(orientation) - 1.0) > NORM_TOLERANCE:
            raise InvalidSample(f"Locator orientation {orientation} is not unit length")
        object.__setattr__(self, "position", position)
        object.__setattr__(self, "orientation", orientation)

    def to_dict(self):
        return {
            "kind": self.kind.value,
            "pos": list(self.position),
            "orient": list(self.orientation),
        }


@dataclass(frozen=True)
class Valuator:
    value: float = 0.0

    kind = SampleKind.VALUATOR

    def __post_init__(self):
        object.__setattr__(self, "value", _finite([self.value], "Valuator value")[0])

    def to_dict(self):
        return {"kind": self.kind.value, "value": self.value}


@dataclass(frozen=True)
class Button:
    id: str = ""
    pressed: bool = False

    kind = SampleKind.BUTTON

    def __post_init__(self):
        if not isinstance(self.pressed, bool):
            raise InvalidSample(f"Button state must be a boolean, got {self.pressed!r}")
        object.__setattr__(self, "id", str(self.id))

    def to_dict(self):
        return {"kind": self.kind.value, "id": self.id, "pressed": self.pressed}


@dataclass(frozen=True)
class Pick:
    target: str = None

    kind = SampleKind.PICK

    def __post_init__(self):
        if self.target is not None:
            object.__setattr__(self, "target", str(self.target))

    def to_dict(self):
        return {"kind": self.kind.value, "target": self.target}


SAMPLE_CLASSES = {
    SampleKind.LOCATOR: Locator,
    SampleKind.VALUATOR: Valuator,
    SampleKind.BUTTON: Button,
    SampleKind.PICK: Pick,
}


def sample_from_dict(d, default_button_id=""):
    """Build a Sample from its dict form (the script/trace representation).

    :param d: dict with a "kind" key and the kind's fields.
    :param default_button_id: id given to Button samples lacking one.
    :returns: a Locator, Valuator, Button or Pick.
    """
    if "kind" not in d:
        raise UnknownSampleKind("Sample has no 'kind'")
    kind = SampleKind.parse(d["kind"])
    try:
        if kind is SampleKind.LOCATOR:
            return Locator(tuple(d.get("pos", (0.0, 0.0, 0.0))), tuple(d.get("orient", IDENTITY)))
        if kind is SampleKind.VALUATOR:
            return Valuator(d["value"])
        if kind is SampleKind.BUTTON:
            return Button(d.get("id", default_button_id), d["pressed"])
        return Pick(d.get("target"))
    except (KeyError, TypeError, ValueError) as e:
        raise InvalidSample(f"Malformed {kind.value} sample {d!r}: {e}")
