import math
import threading

from enum import Enum
from dataclasses import dataclass

from itflow.exceptions import UnknownDevice
from itflow.utils import get_defaults, get_logger, suggest_name

logger = get_logger(__name__)


class DeviceMode(Enum):
    QUEUE_ALL = "queueall"
    KEEP_LAST = "keeplast"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        text = str(value).strip().lower().replace("_", "")
        for mode in cls:
            if mode.value == text:
                return mode
        raise ValueError(f"Unknown device mode {value!r}, expected queueall or keeplast")

    @classmethod
    def default_for(cls, kind):
        """Configured default mode for a device emitting <kind> samples"""
        return cls.parse(get_defaults("devices").get(kind.value, cls.QUEUE_ALL.value))


@dataclass(frozen=True)
class DeviceSample:
    device_id: str
    timestamp: float
    sample: object

    def to_dict(self):
        d = {"t": self.timestamp, "device": self.device_id}
        d.update(self.sample.to_dict())
        return d


class DeviceQueue:
    """Hand-off between the context reading devices and the stepping context.

    ``push_sample`` may be called from one reader thread while the stepping
    thread calls ``drain_for_step``; a single lock guards the buffers.
    """

    def __init__(self, tolerance=0.0):
        self.tolerance = float(tolerance)
        self._lock = threading.Lock()
        self._modes = {}
        self._buffers = {}
        self._last_timestamp = {}
        self._arrival = 0
        self._upto = -math.inf

    def register(self, device_id, mode=DeviceMode.QUEUE_ALL):
        with self._lock:
            self._modes[device_id] = DeviceMode.parse(mode)
            self._buffers.setdefault(device_id, [])

    def mode(self, device_id):
        return self._modes[device_id]

    @property
    def devices(self):
        return list(self._modes)

    def push_sample(self, device_sample):
        """Queue one sample; KeepLast devices keep only the newest one.

        :returns: False if the sample was rejected for going back in time.
        """
        device_id = device_sample.device_id
        with self._lock:
            if device_id not in self._modes:
                raise UnknownDevice(
                    f"Device '{device_id}' is not registered." + suggest_name(device_id, self._modes)
                )
            last = self._last_timestamp.get(device_id)
            if last is not None and device_sample.timestamp < last:
                logger.warning(
                    f"Rejecting sample of '{device_id}' at t={device_sample.timestamp}: "
                    f"earlier than t={last}"
                )
                return False
            self._last_timestamp[device_id] = device_sample.timestamp
            entry = (device_sample.timestamp, device_id, self._arrival, device_sample)
            self._arrival += 1
            if self._modes[device_id] is DeviceMode.KEEP_LAST:
                self._buffers[device_id] = [entry]
            else:
                self._buffers[device_id].append(entry)
            return True

    def drain_for_step(self, upto):
        """Remove and return every sample with timestamp <= <upto>, ordered by
        (timestamp, device id, arrival). Later samples stay queued.

        :returns: list of DeviceSamples.
        """
        if upto < self._upto:
            raise ValueError(f"Drain time went backwards: {upto} < {self._upto}")
        limit = upto + self.tolerance
        batch = []
        with self._lock:
            self._upto = upto
            for device_id, entries in self._buffers.items():
                due = [e for e in entries if e[0] <= limit]
                if due:
                    self._buffers[device_id] = [e for e in entries if e[0] > limit]
                    batch.extend(due)
        batch.sort(key=lambda e: (e[0], e[1], e[2]))
        return [e[3] for e in batch]

    def __len__(self):
        with self._lock:
            return sum(len(entries) for entries in self._buffers.values())
