"""Virtual input devices: source filters with no input ports. Samples handed to
``inject`` by the execution model are re-emitted on the matching output port.
"""
from itflow.devices.queue import DeviceMode
from itflow.flowcore.node import Filter
from itflow.flowcore.samples import SampleKind
from itflow.utils import get_logger, to_optional_str

logger = get_logger(__name__)


class VirtualInputDevice(Filter):
    """Base of all devices. ``device`` names the physical device the samples
    come from (defaults to the node id); ``mode`` picks its queue policy.
    """

    PARAMS = {
        "device": (to_optional_str, None),
        "mode": (to_optional_str, None),
    }

    def __init__(self, **params):
        super().__init__(**params)
        self.pending = []
        self.device_id = self.params["device"] or ""

    def bind(self, node_id):
        """Bind to <node_id> when no explicit device id was given"""
        if not self.device_id:
            self.device_id = str(node_id)

    def check_params(self):
        if self.params.get("mode") is not None:
            DeviceMode.parse(self.params["mode"])

    def queue_mode(self):
        if self.params.get("mode") is not None:
            return DeviceMode.parse(self.params["mode"])
        first_kind = next(iter(self.oports.values()))
        return DeviceMode.default_for(first_kind)

    def inject(self, device_sample):
        self.pending.append(device_sample.sample)

    def route(self, sample):
        """Name of the output port carrying <sample>, or None"""
        if sample.kind is SampleKind.BUTTON and self.oports.get(sample.id) is SampleKind.BUTTON:
            return sample.id
        matching = [name for name, kind in self.oports.items() if kind is sample.kind]
        if len(matching) == 1:
            return matching[0]
        return None

    def process(self, ctx):
        pending, self.pending = self.pending, []
        for sample in pending:
            oport = self.route(sample)
            if oport is None:
                logger.warning(
                    f"Device '{self.device_id}' has no output for {sample.kind.title} {sample}"
                )
                continue
            ctx.emit(oport, sample)


class LocatorDevice(VirtualInputDevice):
    """A 6DOF tracker"""

    TYPE_NAME = "MRLocator"
    OPORTS = {"locator": SampleKind.LOCATOR}


class ButtonDevice(VirtualInputDevice):
    TYPE_NAME = "MRButton"
    OPORTS = {"button": SampleKind.BUTTON}


class ValuatorDevice(VirtualInputDevice):
    TYPE_NAME = "MRValuator"
    OPORTS = {"valuator": SampleKind.VALUATOR}


class XInput(VirtualInputDevice):
    """Desktop window input: the mouse position (window pixels in
    position.x/y) and the keys driving a walkthrough, routed by button id.
    """

    TYPE_NAME = "XInput"
    OPORTS = {
        "mouse": SampleKind.LOCATOR,
        "start": SampleKind.BUTTON,
        "stop": SampleKind.BUTTON,
        "up": SampleKind.BUTTON,
        "down": SampleKind.BUTTON,
        "quit": SampleKind.BUTTON,
    }

    def queue_mode(self):
        if self.params.get("mode") is not None:
            return DeviceMode.parse(self.params["mode"])
        return DeviceMode.QUEUE_ALL
