import os
import json

import numpy as np
import pytest

from itflow.data import TESTDIR
from itflow.devices import ButtonDevice, DeviceSample
from itflow.exceptions import NoPickPort
from itflow.filters import MoveControl, MovePhase, Relay
from itflow.flowcore import Button, Dataflow, Filter, Pick, SampleKind
from itflow.harness import Session

DT = 1.0 / 60.0


class Picker(Filter):
    """Emits the pick queued in ``next``"""

    OPORTS = {"pick": SampleKind.PICK}

    def __init__(self, **params):
        super().__init__(**params)
        self.next = None

    def process(self, ctx):
        if self.next is not None:
            ctx.emit("pick", Pick(self.next))
            self.next = None


def _flow():
    flow = Dataflow()
    flow.add("grab", ButtonDevice())
    flow.add("release", ButtonDevice())
    flow.add("sel", Picker())
    flow.add("mover", Relay())
    flow.add("control", MoveControl(selection_it="sel", mover="mover"))
    flow.connect("grab", "button", "control", "grab")
    flow.connect("release", "button", "control", "release")
    flow.connect("sel", "pick", "control", "selected")
    return flow


def _press(device, t=0.0, pressed=True):
    return DeviceSample(device, t, Button(device, pressed))


def test_phases():
    flow = _flow()
    control = flow.nodes["control"].behavior

    flow.step([], DT)
    assert control.phase is MovePhase.SELECTING
    assert flow.nodes["sel"].enabled and not flow.nodes["mover"].enabled

    # a grab without any pick keeps selecting
    flow.step([_press("grab")], DT)
    assert control.phase is MovePhase.SELECTING

    flow.nodes["sel"].behavior.next = "boxA"
    report = flow.step([_press("grab", DT)], DT)
    assert control.phase is MovePhase.MOVING
    assert not flow.nodes["sel"].enabled and flow.nodes["mover"].enabled
    assert [(n, p, s.target) for n, p, s in report.emissions if n == "control"] == [
        ("control", "obj", "boxA")
    ]

    # releasing the grab button does nothing, pressing release does
    flow.step([_press("grab", 2 * DT, pressed=False)], DT)
    assert control.phase is MovePhase.MOVING
    flow.step([_press("release", 3 * DT)], DT)
    assert control.phase is MovePhase.SELECTING
    assert flow.nodes["sel"].enabled and not flow.nodes["mover"].enabled


def test_set_selection_it():
    flow = _flow()
    flow.add("sel2", Picker())
    control = flow.nodes["control"].behavior
    assert control.set_selection_it(flow, "sel2") == "sel"
    assert control.selection_it == "sel2"
    with pytest.raises(NoPickPort):
        control.set_selection_it(flow, "mover")
    assert control.selection_it == "sel2"

    flow.step([], DT)
    assert flow.nodes["sel2"].enabled
    # the previous selection IT is left as it was
    assert flow.nodes["sel"].enabled


def _random_script(path, steps, seed):
    rng = np.random.default_rng(seed)
    lines = [{"t": 0.0, "device": "headTracker", "kind": "locator", "pos": [0.0, 0.0, 0.0]}]
    for k in range(steps):
        t = k / 60.0
        pos = [float(x) for x in np.array([0.0, 0.0, -0.4]) + rng.uniform(-0.3, 0.3, size=3)]
        lines.append({"t": t, "device": "handTracker", "kind": "locator", "pos": pos})
        for device in ("buttonGrab", "buttonRelease"):
            if rng.random() < 0.05:
                lines.append({"t": t, "device": device, "kind": "button", "pressed": True})
            elif rng.random() < 0.05:
                lines.append({"t": t, "device": device, "kind": "button", "pressed": False})
    with open(path, "w") as f:
        for line in lines:
            f.write(json.dumps(line) + "\n")


def test_phase_invariant_under_random_input(tmp_path):
    script = tmp_path / "random.jsonl"
    _random_script(script, 500, seed=11)
    world = os.path.join(TESTDIR, "resources", "worlds", "move_gogo.xml")
    session = Session.open(world, str(script))
    control = session.flow.nodes["moveControl"].behavior
    phases = set()
    for _ in session.run(500):
        selection = session.flow.nodes[control.selection_it]
        mover = session.flow.nodes[control.mover]
        if control.phase is MovePhase.SELECTING:
            assert selection.enabled and not mover.enabled
        else:
            assert mover.enabled and not selection.enabled
        phases.add(control.phase)
    assert session.step_index == 500
    assert phases == {MovePhase.SELECTING, MovePhase.MOVING}
