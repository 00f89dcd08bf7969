import pytest

import itflow
from itflow import get_filter_info, list_filters, list_tasks, load_world
from itflow.exceptions import InvalidWorld
from itflow.flowcore import Dataflow
from itflow.scene import SceneState


######################
# Test base operations
######################


def test_load_world(resources):
    flow, scene = load_world(resources("worlds", "walkthrough.xml"))
    assert isinstance(flow, Dataflow)
    assert isinstance(scene, SceneState)
    assert "motorcycle" in flow.nodes
    with pytest.raises(InvalidWorld) as e:
        load_world(resources("invalid", "unknown_type.xml"))
    assert e.value.diagnostics[0].code == "UnknownType"
    with pytest.raises(FileNotFoundError):
        load_world(resources("worlds", "hola.xml"))


def test_filter_info():
    info = get_filter_info("GoGoFilter")
    assert info["module_name"] == "itflow.filters.gogo"
    assert info["category"] == "selection"
    with pytest.raises(ValueError) as e:
        get_filter_info("GoGoFiltr")
    assert "Did you mean 'GoGoFilter'" in str(e.value)


def test_lists():
    assert type(list_filters()) is list
    assert type(list_tasks()) is list
    assert "Select1ByPointing" in list_filters()
    assert "GoGoIT" in list_filters()
    assert list_tasks()[0] == "device"
    assert "navigation" in list_tasks()


def test_list_tools():
    assert "Dataflow" in itflow.flowcore.list_tools()
    assert "Session" in itflow.harness.list_tools()
