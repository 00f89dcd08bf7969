"""Input scripts: line-delimited JSON documents replaying device samples and
carrying timed rewiring directives.

Sample line::

    {"t": 0.1, "device": "handTracker", "kind": "locator", "pos": [x, y, z], "orient": [w, x, y, z]}
    {"t": 0.2, "device": "buttonGrab", "kind": "button", "pressed": true}

Directive line::

    {"t": 1.0, "directive": "setSelectionIT", "target": "moveControl", "it": "raycast"}
"""
import json
import math

from enum import Enum
from dataclasses import dataclass, field

from itflow.devices.queue import DeviceSample
from itflow.exceptions import (
    InvalidSample,
    ScriptParseError,
    UnknownSampleKind,
    UnsortedTimestamps,
)
from itflow.flowcore.samples import SampleKind, sample_from_dict
from itflow.io import iter_lines
from itflow.utils import suggest_name


class DirectiveAction(Enum):
    DISABLE = "disable"
    ENABLE = "enable"
    DISCONNECT_NODE = "disconnectNode"
    CONNECT = "connect"
    SET_SELECTION_IT = "setSelectionIT"
    SET_PARAM = "setParam"
    SET_MODE = "setMode"

    @classmethod
    def parse(cls, value):
        for action in cls:
            if action.value.lower() == str(value).lower():
                return action
        raise ValueError(
            f"Unknown directive {value!r}." + suggest_name(value, [a.value for a in cls])
        )


# Arguments each directive needs, besides "t" and "directive"
DIRECTIVE_ARGS = {
    DirectiveAction.DISABLE: ("target",),
    DirectiveAction.ENABLE: ("target",),
    DirectiveAction.DISCONNECT_NODE: ("target",),
    DirectiveAction.CONNECT: ("origin", "srcport", "dest", "dstport"),
    DirectiveAction.SET_SELECTION_IT: ("target", "it"),
    DirectiveAction.SET_PARAM: ("target", "name", "value"),
    DirectiveAction.SET_MODE: ("target", "mode"),
}


@dataclass(frozen=True)
class Directive:
    at: float
    action: DirectiveAction
    args: dict = field(default_factory=dict)
    line: int = None

    def to_dict(self):
        d = {"t": self.at, "directive": self.action.value}
        d.update(self.args)
        return d


@dataclass
class ScriptedDevice:
    """Time-ordered samples of one kind coming from one device"""

    device_id: str
    emits: SampleKind
    events: list = field(default_factory=list)

    def add(self, timestamp, sample, line=None):
        if sample.kind is not self.emits:
            raise InvalidSample(
                f"Device '{self.device_id}' emits {self.emits.title}, got {sample.kind.title}"
            )
        if self.events and timestamp < self.events[-1][0]:
            raise UnsortedTimestamps(
                f"line {line}: '{self.device_id}' goes back in time "
                f"({timestamp} after {self.events[-1][0]})"
            )
        self.events.append((timestamp, sample))


def _timestamp(record, lineno):
    if "t" not in record:
        raise ScriptParseError("missing 't'", lineno)
    t = record["t"]
    if isinstance(t, bool) or not isinstance(t, (int, float)) or not math.isfinite(t) or t < 0:
        raise ScriptParseError(f"'t' must be a finite number >= 0, got {t!r}", lineno)
    return float(t)


def _directive(record, lineno):
    try:
        action = DirectiveAction.parse(record["directive"])
    except ValueError as e:
        raise ScriptParseError(str(e), lineno)
    args = {k: v for k, v in record.items() if k not in ("t", "directive")}
    missing = [a for a in DIRECTIVE_ARGS[action] if a not in args]
    if missing:
        raise ScriptParseError(f"directive '{action.value}' needs {missing}", lineno)
    return Directive(_timestamp(record, lineno), action, args, lineno)


def load_script(text):
    """Parse an input script.

    :param text: the JSONL document.
    :returns: (list of ScriptedDevice, list of Directive), devices in order of
        first appearance.
    """
    devices = {}
    directives = []
    for lineno, line in iter_lines(text):
        try:
            record = json.loads(line)
        except json.JSONDecodeError as e:
            raise ScriptParseError(f"invalid JSON: {e.msg}", lineno)
        if not isinstance(record, dict):
            raise ScriptParseError("each line must be a JSON object", lineno)
        if "directive" in record:
            directive = _directive(record, lineno)
            if directives and directive.at < directives[-1].at:
                raise UnsortedTimestamps(
                    f"line {lineno}: directive at t={directive.at} after t={directives[-1].at}"
                )
            directives.append(directive)
            continue
        if "device" not in record:
            raise ScriptParseError("line has neither 'device' nor 'directive'", lineno)
        timestamp = _timestamp(record, lineno)
        device_id = str(record["device"])
        if "kind" not in record:
            raise ScriptParseError("sample has no 'kind'", lineno)
        try:
            kind = SampleKind.parse(record["kind"])
        except UnknownSampleKind as e:
            raise UnknownSampleKind(f"line {lineno}: {e}")
        try:
            sample = sample_from_dict(record, default_button_id=device_id)
        except InvalidSample as e:
            raise ScriptParseError(str(e), lineno)
        key = (device_id, kind)
        if key not in devices:
            devices[key] = ScriptedDevice(device_id, kind)
        devices[key].add(timestamp, sample, lineno)
    return list(devices.values()), directives


class ScriptReader:
    """Replays scripted devices into a DeviceQueue, playing the part of the
    context that reads physical devices.
    """

    def __init__(self, devices, queue, tolerance=0.0):
        events = []
        for device in devices:
            for index, (timestamp, sample) in enumerate(device.events):
                events.append((timestamp, device.device_id, device.emits.value, index, sample))
        events.sort(key=lambda e: e[:4])
        self.events = [DeviceSample(e[1], e[0], e[4]) for e in events]
        self.queue = queue
        self.tolerance = float(tolerance)
        self.position = 0

    @property
    def exhausted(self):
        return self.position >= len(self.events)

    def feed_until(self, upto):
        """Push every event with timestamp <= <upto> not pushed yet.

        :returns: number of samples pushed.
        """
        pushed = 0
        limit = upto + self.tolerance
        while not self.exhausted and self.events[self.position].timestamp <= limit:
            self.queue.push_sample(self.events[self.position])
            self.position += 1
            pushed += 1
        return pushed

    def feed_all(self):
        return self.feed_until(math.inf)
