import copy
import os
import json

import numpy as np
import pytest

from itflow.data import TESTDIR
from itflow.devices import DeviceSample, LocatorDevice
from itflow.exceptions import InternalCycle, UnknownInternalPort, UnsupportedVerb
from itflow.filters import CompositeIT, GoGoIT, RayCastIT, Relay, make_composite
from itflow.flowcore import Dataflow, Edge, Locator
from itflow.harness import Session, TRACE_FIELDS

DT = 1.0 / 60.0


def _relays(*names):
    flow = Dataflow()
    for name in names:
        flow.add(name, Relay())
    return flow


###########
# Structure
###########


def test_external_ports():
    inner = _relays("a", "b")
    inner.connect("a", "out", "b", "in")
    comp = make_composite(inner, {"in": ("a", "in")}, {"out": ("b", "out")})
    assert list(comp.iports) == ["in"]
    assert list(comp.oports) == ["out"]


def test_unknown_internal_port():
    inner = _relays("a")
    with pytest.raises(UnknownInternalPort):
        make_composite(inner, {"in": ("a", "nope")}, {})
    with pytest.raises(UnknownInternalPort):
        make_composite(inner, {"in": ("q", "in")}, {})
    with pytest.raises(UnknownInternalPort):
        make_composite(inner, {}, {"out": ("a", "in")})
    with pytest.raises(UnknownInternalPort):
        CompositeIT()


def test_mixed_kinds_on_one_external_port():
    inner = Dataflow()
    inner.add("a", Relay())
    inner.add("b", Relay(kind="valuator"))
    with pytest.raises(UnknownInternalPort):
        make_composite(inner, {"in": [("a", "in"), ("b", "in")]}, {})


def test_internal_cycle():
    inner = _relays("a", "b")
    inner.connect("a", "out", "b", "in")
    # bypass connect, which refuses cycles
    inner.edges.append(Edge("b", "out", "a", "in"))
    inner._changed()
    with pytest.raises(InternalCycle):
        make_composite(inner, {"in": ("a", "in")}, {})


def test_composite_runs_internal_flow():
    inner = _relays("a", "b")
    inner.connect("a", "out", "b", "in")
    flow = Dataflow()
    flow.add("tracker", LocatorDevice())
    flow.add("comp", make_composite(inner, {"in": ("a", "in")}, {"out": ("b", "out")}))
    flow.add("sink", Relay())
    flow.connect("tracker", "locator", "comp", "in")
    flow.connect("comp", "out", "sink", "in")
    report = flow.step([DeviceSample("tracker", 0.0, Locator((1.0, 0.0, 0.0)))], DT)
    # internal emissions stay inside
    assert [(n, p) for n, p, _ in report.emissions] == [
        ("tracker", "locator"),
        ("comp", "out"),
        ("sink", "out"),
    ]


############
# Parameters
############


def test_param_forwarding():
    gogo = GoGoIT(D=0.6, epsilon=1e-3, hand="myHand")
    nodes = gogo.internal.nodes
    assert gogo.params["hand"] == "myHand"
    assert nodes["moveHand"].behavior.params["object"] == "myHand"
    assert nodes["gogoFilter"].behavior.params["D"] == 0.6
    assert nodes["gogoControl"].behavior.params["epsilon"] == 1e-3
    assert gogo.has_param("k")
    assert not gogo.has_param("speed")
    assert "D" in GoGoIT.accepted_params()

    assert gogo.set_param("D", 0.8) == 0.6
    assert nodes["gogoFilter"].behavior.params["D"] == 0.8
    with pytest.raises(UnsupportedVerb):
        gogo.set_param("speed", 1.0)
    with pytest.raises(ValueError):
        gogo.set_param("D", -1.0)
    assert nodes["gogoFilter"].behavior.params["D"] == 0.8


def test_param_batch_is_all_or_nothing():
    gogo = GoGoIT(D=0.6)
    nodes = gogo.internal.nodes
    epsilon = nodes["gogoControl"].behavior.params["epsilon"]
    with pytest.raises(ValueError):
        gogo.set_params({"D": 0.9, "epsilon": -1.0})
    assert nodes["gogoFilter"].behavior.params["D"] == 0.6
    assert nodes["gogoControl"].behavior.params["epsilon"] == epsilon
    with pytest.raises(UnsupportedVerb):
        gogo.set_params({"D": 0.9, "speed": 1.0})
    assert nodes["gogoFilter"].behavior.params["D"] == 0.6

    assert gogo.set_params({"D": 0.9, "epsilon": 0.01}) == {"D": 0.6, "epsilon": epsilon}
    assert nodes["gogoControl"].behavior.params["epsilon"] == 0.01


def test_raycast_ports():
    raycast = RayCastIT()
    assert list(raycast.iports) == ["handIport"]
    assert list(raycast.oports) == ["pickOPort"]
    assert set(raycast.internal.nodes) == {"moveHand", "moveRay", "select", "changeObj"}


###############
# Flat vs. nested
###############


def _waypoint(k):
    """Real hand sweep: towards boxB for 100 steps, then on towards boxA"""
    start, mid, end = np.array([0.0, 0.0, -0.3]), np.array([0.4, 0.0, -0.6]), np.array([0.0, 0.0, -1.0])
    if k <= 100:
        return start + (mid - start) * k / 100.0
    return mid + (end - mid) * (k - 100) / 99.0


def _sweep_script(path, steps):
    with open(path, "w") as f:
        f.write(json.dumps({"t": 0.0, "device": "headTracker", "kind": "locator", "pos": [0.0, 0.0, 0.0]}) + "\n")
        for k in range(steps):
            pos = [float(x) for x in _waypoint(k)]
            f.write(json.dumps({"t": k / 60.0, "device": "handTracker", "kind": "locator", "pos": pos}) + "\n")


# exported ports of the nested "gogo" node -> the flat node and port behind them
EXPORTED = {"gogoPosOPort": ("gogoFilter", "locator"), "pickOPort": ("select", "pick")}


def _as_flat(record):
    """Record of the nested run written with the node names of the flat one"""
    d = copy.deepcopy(record.to_dict())
    for emission in d["emissions"]:
        if emission["node"] == "gogo":
            emission["node"], emission["oport"] = EXPORTED[emission["oport"]]
    for pick in d["picks"]:
        if pick["node"] == "gogo":
            pick["node"] = "select"
    for write in d["writes"]:
        assert write["origin"].startswith("gogo/")
        write["origin"] = write["origin"][len("gogo/"):]
    return d


def test_composite_matches_flat_wiring(tmp_path):
    script = tmp_path / "sweep.jsonl"
    _sweep_script(script, 200)
    worlds = os.path.join(TESTDIR, "resources", "worlds")
    nested = Session.open(os.path.join(worlds, "gogo_composite.xml"), str(script))
    flat = Session.open(os.path.join(worlds, "gogo_flat.xml"), str(script))

    picked = []
    for a, b in zip(nested.run(200), flat.run(200)):
        a_dict, b_dict = _as_flat(a), b.to_dict()
        for name in TRACE_FIELDS:
            assert a_dict[name] == b_dict[name], (a.step, name)
        picked.extend(p["target"] for p in a.picks)
    assert "boxB" in picked
    assert "boxA" in picked
    assert nested.scene.get("cube").visible is True
