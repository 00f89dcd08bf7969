import pytest

from itflow.devices.virtual import ButtonDevice, LocatorDevice
from itflow.exceptions import (
    CycleCreated,
    DuplicateId,
    TypeMismatch,
    UnknownNode,
    UnknownPort,
    UnsupportedVerb,
)
from itflow.filters import (
    ChangeObject,
    GoGoControl,
    GoGoFilter,
    Location2Viewpoint,
    MoveByLocator,
    Relay,
    Select1ByTouching,
    make_composite,
)
from itflow.flowcore import ControlMessage, ControlVerb, Dataflow, Filter, FilterNode, SampleKind


class WithInputs(LocatorDevice):
    IPORTS = {"reset": SampleKind.BUTTON}


def _relays(*names, kind="locator"):
    flow = Dataflow()
    for name in names:
        flow.add(name, Relay(kind=kind))
    return flow


def _fig3_nodes():
    flow = Dataflow(name="gogo")
    flow.add("handTracker", LocatorDevice())
    flow.add("gogoFilter", GoGoFilter())
    flow.add("gogoControl", GoGoControl())
    flow.add("moveHand", MoveByLocator(object="virtualHand"))
    flow.add("moveCube", MoveByLocator(object="cube"), enabled=False)
    flow.add("select", Select1ByTouching())
    flow.add("changeObj", ChangeObject())
    return flow


##############
# Registration
##############


def test_register_node():
    flow = Dataflow()
    assert flow.register_node(FilterNode("gogo", GoGoFilter())) == "gogo"
    assert len(flow) == 1
    assert "gogo" in flow
    with pytest.raises(DuplicateId):
        flow.register_node(FilterNode("gogo", GoGoFilter()))


def test_register_fig3_nodes():
    flow = _fig3_nodes()
    assert len(flow) == 7
    assert flow.edges == []
    assert flow.nodes["moveCube"].enabled is False


def test_device_must_not_have_inputs():
    flow = Dataflow()
    with pytest.raises(TypeMismatch):
        flow.add("tracker", WithInputs())


def test_duplicate_port_names():
    class Clash(Filter):
        IPORTS = {"x": SampleKind.LOCATOR}
        OPORTS = {"x": SampleKind.LOCATOR}

    with pytest.raises(DuplicateId):
        FilterNode("clash", Clash())


def test_device_binds_to_node_id():
    flow = Dataflow()
    node = flow.add("headTracker", LocatorDevice())
    assert node.is_device
    assert node.behavior.device_id == "headTracker"
    other = flow.add("second", LocatorDevice(device="headTracker"))
    assert other.behavior.device_id == "headTracker"


#########
# Connect
#########


def test_connect():
    flow = Dataflow()
    flow.add("headTracker", LocatorDevice())
    flow.add("moveViewpoint", Location2Viewpoint())
    edge = flow.connect("headTracker", "locator", "moveViewpoint", "iportLocator")
    assert edge == ("headTracker", "locator", "moveViewpoint", "iportLocator")
    assert flow.edges == [edge]
    assert flow.nodes["headTracker"].oports["locator"].listeners == [
        ("moveViewpoint", "iportLocator")
    ]


def test_connect_errors():
    flow = Dataflow()
    flow.add("button", ButtonDevice())
    flow.add("moveViewpoint", Location2Viewpoint())
    with pytest.raises(TypeMismatch):
        flow.connect("button", "button", "moveViewpoint", "iportLocator")
    with pytest.raises(UnknownNode) as e:
        flow.connect("buton", "button", "moveViewpoint", "iportLocator")
    assert "Did you mean 'button'" in str(e.value)
    with pytest.raises(UnknownPort):
        flow.connect("button", "locator", "moveViewpoint", "iportLocator")
    assert flow.edges == []


def test_connect_rejects_cycles():
    flow = _relays("a", "b", "c")
    flow.connect("a", "out", "b", "in")
    flow.connect("b", "out", "c", "in")
    with pytest.raises(CycleCreated):
        flow.connect("c", "out", "a", "in")
    with pytest.raises(CycleCreated):
        flow.connect("a", "out", "a", "in")
    assert len(flow.edges) == 2


def test_fan_out_follows_connection_order():
    flow = _relays("src", "x", "y", "z")
    for dst in ("z", "x", "y"):
        flow.connect("src", "out", dst, "in")
    assert [l[0] for l in flow.nodes["src"].oports["out"].listeners] == ["z", "x", "y"]


############
# Disconnect
############


def test_disconnect_node():
    flow = _relays("a", "b", "c", "d")
    assert flow.disconnect_node("a") == 0
    flow.connect("a", "out", "b", "in")
    flow.connect("b", "out", "c", "in")
    flow.connect("b", "out", "d", "in")
    assert flow.disconnect_node("b") == 3
    assert flow.edges == []
    assert flow.nodes["a"].oports["out"].listeners == []
    assert "b" in flow
    with pytest.raises(UnknownNode):
        flow.disconnect_node("e")


def test_disconnect_composite_leaves_no_reference():
    flow = _relays("tracker", "sink")
    inner = _relays("r")
    flow.add("gogo", make_composite(inner, {"in": ("r", "in")}, {"out": ("r", "out")}))
    flow.connect("tracker", "out", "gogo", "in")
    flow.connect("gogo", "out", "sink", "in")
    flow.disconnect_node("gogo")
    assert not [e for e in flow.edges if "gogo" in (e.src, e.dst)]
    assert flow.nodes["tracker"].oports["out"].listeners == []


#########
# Enabled
#########


def test_set_enabled():
    flow = _relays("a")
    assert flow.set_enabled("a", False) is True
    assert flow.nodes["a"].enabled is False
    assert flow.set_enabled("a", False) is False
    assert flow.set_enabled("a", True) is False
    assert flow.nodes["a"].enabled is True


############
# Topo order
############


def test_topo_order():
    flow = _relays("a", "b", "c")
    flow.connect("a", "out", "b", "in")
    flow.connect("b", "out", "c", "in")
    assert flow.topo_order() == ["a", "b", "c"]

    flow = _relays("a", "b", "c")
    flow.connect("a", "out", "c", "in")
    flow.connect("a", "out", "b", "in")
    assert flow.topo_order() == ["a", "b", "c"]

    flow = _relays("c", "b", "a")
    assert flow.topo_order() == ["c", "b", "a"]


def test_topo_order_is_cached_per_version():
    flow = _relays("a", "b")
    first = flow.topo_order()
    assert flow.order_is_current()
    flow.connect("b", "out", "a", "in")
    assert not flow.order_is_current()
    assert flow.topo_order() == ["b", "a"]
    assert first == ["a", "b"]


#########
# Control
#########


def test_resolve_paths():
    flow = _relays("tracker")
    inner = _relays("r")
    flow.add("comp", make_composite(inner, {"in": ("r", "in")}, {"out": ("r", "out")}))
    owner, node = flow.resolve("comp/r")
    assert owner is inner
    assert node.id == "r"
    with pytest.raises(UnknownNode):
        flow.resolve("tracker/r")
    with pytest.raises(UnknownNode):
        flow.resolve("comp/q")


def test_send_control():
    flow = Dataflow()
    flow.add("gogoFilter", GoGoFilter())
    flow.add("moveHand", MoveByLocator(object="virtualHand"))

    ack = flow.send_control(ControlMessage("moveHand", ControlVerb.DISABLE))
    assert ack.prior is True
    assert flow.nodes["moveHand"].enabled is False
    ack = flow.send_control(ControlMessage("moveHand", ControlVerb.ENABLE))
    assert ack.prior is False

    ack = flow.send_control(ControlMessage("gogoFilter", ControlVerb.SET_PARAM, {"D": 0.6}))
    assert ack.prior == {"D": 0.5}
    assert flow.nodes["gogoFilter"].behavior.params["D"] == 0.6

    ack = flow.send_control(ControlMessage("moveHand", ControlVerb.SET_MODE, {"mode": "offset"}))
    assert ack.prior == "absolute"


def test_send_control_rejected():
    flow = Dataflow()
    flow.add("gogoFilter", GoGoFilter())
    with pytest.raises(UnsupportedVerb):
        flow.send_control(ControlMessage("gogoFilter", ControlVerb.SET_MODE, {"mode": "fast"}))
    with pytest.raises(UnsupportedVerb):
        flow.send_control(ControlMessage("gogoFilter", ControlVerb.SET_PARAM, {"D": -1}))
    with pytest.raises(UnsupportedVerb):
        flow.send_control(ControlMessage("gogoFilter", ControlVerb.SET_PARAM, {"speed": 1}))
    with pytest.raises(UnknownNode):
        flow.send_control(ControlMessage("gogo", ControlVerb.DISABLE))
    # a rejected value leaves the parameter untouched
    assert flow.nodes["gogoFilter"].behavior.params["D"] == 0.5


def test_send_control_param_batch():
    flow = Dataflow()
    flow.add("gogoFilter", GoGoFilter())
    params = flow.nodes["gogoFilter"].behavior.params
    before = dict(params)
    with pytest.raises(UnsupportedVerb):
        flow.send_control(ControlMessage("gogoFilter", ControlVerb.SET_PARAM, {"k": 0.5, "D": -1}))
    assert params == before
    with pytest.raises(UnsupportedVerb):
        flow.send_control(ControlMessage("gogoFilter", ControlVerb.SET_PARAM, {"D": 0.7, "speed": 1}))
    assert params == before

    ack = flow.send_control(ControlMessage("gogoFilter", ControlVerb.SET_PARAM, {"k": 0.5, "D": 0.7}))
    assert ack.prior == {"k": before["k"], "D": 0.5}
    assert (params["k"], params["D"]) == (0.5, 0.7)
