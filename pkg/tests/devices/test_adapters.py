import os
import json

import pytest

from itflow.data import TESTDIR
from itflow.devices import BUTTON_IDS, Buttons2Locator, DeviceSample, buttons_to_locator
from itflow.flowcore import Button, Dataflow, Locator
from itflow.harness import Session
from itflow.utils.quaternion import quat_from_axis_angle

DT = 1.0 / 60.0
RATES = {"lin": 0.5, "ang": 45.0}


def _world(name):
    return os.path.join(TESTDIR, "resources", "worlds", name)


def _script(name):
    return os.path.join(TESTDIR, "resources", "scripts", name)


def test_button_ids():
    assert len(BUTTON_IDS) == 12
    assert BUTTON_IDS[:4] == ("+x", "-x", "+y", "-y")


def test_buttons_to_locator():
    prev = Locator((1.0, 2.0, 3.0))
    assert buttons_to_locator({}, prev, DT, RATES) is None
    assert buttons_to_locator({"+x": False}, prev, DT, RATES) is None

    moved = buttons_to_locator({"+x": True, "-z": True}, prev, 1.0, RATES)
    assert moved.position == pytest.approx((1.5, 2.0, 2.5))
    assert moved.orientation == prev.orientation

    # opposite buttons of one pair cancel
    still = buttons_to_locator({"+y": True, "-y": True}, prev, 1.0, RATES)
    assert still.position == prev.position

    turned = buttons_to_locator({"+ry": True}, prev, 1.0, RATES)
    assert turned.position == prev.position
    assert turned.orientation == pytest.approx(quat_from_axis_angle("y", 45.0))

    with pytest.raises(ValueError):
        buttons_to_locator({"+x": True}, prev, 0.0, RATES)


def test_buttons2locator_node():
    flow = Dataflow()
    flow.add("hand", Buttons2Locator(lin=1.0))
    flow.step([DeviceSample("hand", 0.0, Button("+x", True))], DT)
    report = flow.step([], DT)
    assert len(report.emissions) == 1
    assert report.emissions[0][2].position == pytest.approx((2 * DT, 0.0, 0.0))
    # an id outside the twelve buttons is ignored
    report = flow.step(
        [
            DeviceSample("hand", 2 * DT, Button("+w", True)),
            DeviceSample("hand", 2 * DT, Button("+x", False)),
        ],
        DT,
    )
    assert report.emissions == []


def test_buttons2locator_rejects_negative_rates():
    with pytest.raises(ValueError):
        Buttons2Locator(lin=-1.0)


##################
# Device swapping
##################


def test_buttons_drive_box():
    session = Session.open(_world("buttons.xml"), _script("buttons_plus_x.jsonl"))
    for _ in session.run(130):
        pass
    x, y, z = session.scene.get("box").transform.position
    assert abs(x - 1.0) <= 1e-9
    assert (y, z) == (0.0, 0.0)


def test_buttons_replace_tracker(tmp_path):
    ramp = tmp_path / "ramp.jsonl"
    with open(ramp, "w") as f:
        for k in range(120):
            line = {
                "t": k / 60.0,
                "device": "hand",
                "kind": "locator",
                "pos": [(k + 1) * 0.5 / 60.0, 0.0, 0.0],
            }
            f.write(json.dumps(line) + "\n")

    buttons = Session.open(_world("buttons.xml"), _script("buttons_plus_x.jsonl"))
    tracker = Session.open(_world("tracker.xml"), str(ramp))
    for _ in range(130):
        buttons.step()
        tracker.step()
        a = buttons.scene.get("box").transform
        b = tracker.scene.get("box").transform
        assert a.position == pytest.approx(b.position, abs=1e-9)
        assert a.orientation == pytest.approx(b.orientation, abs=1e-9)
