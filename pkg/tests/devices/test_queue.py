import threading

import pytest

from itflow.devices import DeviceMode, DeviceQueue, DeviceSample
from itflow.exceptions import UnknownDevice
from itflow.flowcore import Button, Locator, SampleKind


def _loc(device, t, x=0.0):
    return DeviceSample(device, t, Locator((x, 0.0, 0.0)))


def _button(device, t, pressed=True):
    return DeviceSample(device, t, Button(device, pressed))


def test_device_mode_parse():
    assert DeviceMode.parse("KeepLast") is DeviceMode.KEEP_LAST
    assert DeviceMode.parse("queue_all") is DeviceMode.QUEUE_ALL
    assert DeviceMode.default_for(SampleKind.LOCATOR) is DeviceMode.KEEP_LAST
    assert DeviceMode.default_for(SampleKind.BUTTON) is DeviceMode.QUEUE_ALL
    with pytest.raises(ValueError):
        DeviceMode.parse("latest")


def test_keep_last():
    queue = DeviceQueue()
    queue.register("tracker", DeviceMode.KEEP_LAST)
    for i in range(3):
        queue.push_sample(_loc("tracker", 0.01 * i, x=float(i)))
    assert len(queue) == 1
    batch = queue.drain_for_step(0.1)
    assert [s.sample.position[0] for s in batch] == [2.0]


def test_queue_all_ordering():
    queue = DeviceQueue()
    queue.register("grab", DeviceMode.QUEUE_ALL)
    queue.register("release", DeviceMode.QUEUE_ALL)
    queue.push_sample(_button("release", 0.02))
    queue.push_sample(_button("grab", 0.01))
    queue.push_sample(_button("grab", 0.02, pressed=False))
    queue.push_sample(_button("grab", 0.02, pressed=True))
    batch = queue.drain_for_step(0.05)
    assert [(s.device_id, s.timestamp, s.sample.pressed) for s in batch] == [
        ("grab", 0.01, True),
        ("grab", 0.02, False),
        ("grab", 0.02, True),
        ("release", 0.02, True),
    ]
    assert len(queue) == 0


def test_later_samples_stay_queued():
    queue = DeviceQueue()
    queue.register("grab")
    queue.push_sample(_button("grab", 0.1))
    queue.push_sample(_button("grab", 0.5))
    assert [s.timestamp for s in queue.drain_for_step(0.2)] == [0.1]
    assert len(queue) == 1
    assert queue.drain_for_step(0.3) == []
    assert [s.timestamp for s in queue.drain_for_step(0.5)] == [0.5]
    with pytest.raises(ValueError):
        queue.drain_for_step(0.4)


def test_tolerance():
    queue = DeviceQueue(tolerance=1e-9)
    queue.register("grab")
    queue.push_sample(_button("grab", 2.0))
    assert len(queue.drain_for_step(120 * (1.0 / 60.0))) == 1


def test_push_errors():
    queue = DeviceQueue()
    queue.register("tracker", DeviceMode.KEEP_LAST)
    with pytest.raises(UnknownDevice):
        queue.push_sample(_loc("traker", 0.0))
    assert queue.push_sample(_loc("tracker", 1.0)) is True
    assert queue.push_sample(_loc("tracker", 0.5)) is False
    assert [s.timestamp for s in queue.drain_for_step(2.0)] == [1.0]


def test_concurrent_push():
    queue = DeviceQueue()
    queue.register("grab")
    total = 2000

    def reader():
        for i in range(total):
            queue.push_sample(_button("grab", i * 0.001))

    thread = threading.Thread(target=reader)
    thread.start()
    drained = []
    upto = 0.0
    while thread.is_alive():
        drained.extend(queue.drain_for_step(upto))
        upto += 0.01
    thread.join()
    drained.extend(queue.drain_for_step(max(upto, total * 0.001)))
    assert len(drained) == total
    timestamps = [s.timestamp for s in drained]
    assert timestamps == sorted(timestamps)
