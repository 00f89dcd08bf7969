import math

import numpy as np
import pytest

from itflow.exceptions import DuplicateId, TypeMismatch, UnknownNode, UnknownObject, UnknownPort
from itflow.filters import Relay
from itflow.flowcore import Dataflow, DeferredWrite, MutationKind
from itflow.scene import Frustum, SceneObject, SceneState, Transform, VIEWPOINT_ID
from itflow.utils.quaternion import quat_from_axis_angle


def _write(obj, mutation, payload, sequence=0):
    return DeferredWrite(obj, mutation, payload, origin="test", sequence=sequence)


def _scene():
    scene = SceneState()
    scene.add_object(SceneObject("b", Transform((0.0, 0.0, -2.0))))
    scene.add_object(SceneObject("a", Transform((0.0, 0.0, -5.0))))
    scene.add_object(SceneObject("hidden", Transform((0.0, 0.0, -1.0)), visible=False))
    scene.add_object(SceneObject("hand", Transform((3.0, 0.0, 0.0)), selectable=False))
    return scene


#########
# Objects
#########


def test_objects():
    scene = _scene()
    assert scene.has_object("a")
    assert not scene.has_object(VIEWPOINT_ID)
    with pytest.raises(DuplicateId):
        scene.add_object(SceneObject("a"))
    with pytest.raises(DuplicateId):
        scene.add_object(SceneObject(VIEWPOINT_ID))
    with pytest.raises(UnknownObject) as e:
        scene.get("hnad")
    assert "Did you mean 'hand'" in str(e.value)
    with pytest.raises(ValueError):
        SceneObject("bad", half_extents=(1.0, -1.0, 1.0))
    assert scene.get_transform(VIEWPOINT_ID) == Transform()


def test_candidates_and_selected():
    scene = _scene()
    assert scene.candidates() == ["a", "b"]
    assert scene.candidates(exclude=("a",)) == ["b"]
    assert scene.selected() == []
    scene.apply_mutation(_write("b", MutationKind.SET_FLAG, ("bbox_visible", True)))
    assert scene.selected() == ["b"]


###########
# Mutations
###########


def test_apply_mutation():
    scene = _scene()
    moved = Transform((1.0, 0.0, -2.0))
    assert scene.apply_mutation(_write("b", MutationKind.SET_TRANSFORM, moved)) is True
    assert scene.get("b").transform == moved
    # same value again is not a change
    assert scene.apply_mutation(_write("b", MutationKind.SET_TRANSFORM, moved)) is False
    assert scene.apply_mutation(_write("a", MutationKind.SET_FLAG, ("visible", False))) is True
    assert scene.candidates() == ["b"]
    with pytest.raises(UnknownObject):
        scene.apply_mutation(_write("ghost", MutationKind.SET_TRANSFORM, moved))
    with pytest.raises(ValueError):
        scene.apply_mutation(_write("a", MutationKind.SET_FLAG, ("glowing", True)))


def test_viewpoint_mutation():
    scene = _scene()
    pose = Transform((0.0, 1.7, 0.0))
    assert scene.apply_mutation(_write(VIEWPOINT_ID, MutationKind.SET_TRANSFORM, pose))
    assert scene.get_viewpoint() == pose
    assert not scene.apply_mutation(_write(VIEWPOINT_ID, MutationKind.SET_TRANSFORM, pose))


###########
# Listeners
###########


def test_listeners():
    scene = _scene()
    assert scene.add_listener("b", "follow", "pos") == ("b", "follow", "pos")
    scene.add_listener(VIEWPOINT_ID, "follow", "view")
    with pytest.raises(UnknownObject):
        scene.add_listener("ghost", "follow", "pos")

    scene.apply_mutation(_write("b", MutationKind.SET_TRANSFORM, Transform((2.0, 0.0, 0.0))))
    scene.apply_mutation(_write("a", MutationKind.SET_TRANSFORM, Transform((2.0, 0.0, 0.0))))
    scene.apply_mutation(_write(VIEWPOINT_ID, MutationKind.SET_TRANSFORM, Transform((0.0, 1.0, 0.0))))
    notes = scene.take_notifications()
    assert [(dst, port, s.position) for dst, port, s in notes] == [
        ("follow", "pos", (2.0, 0.0, 0.0)),
        ("follow", "view", (0.0, 1.0, 0.0)),
    ]
    assert scene.take_notifications() == []

    scene.remove_listeners("follow")
    scene.apply_mutation(_write("b", MutationKind.SET_TRANSFORM, Transform()))
    assert scene.take_notifications() == []


def test_listeners_checked_on_attach():
    flow = Dataflow()
    flow.add("follow", Relay())
    flow.add("press", Relay(kind="Button"))

    scene = _scene()
    scene.add_listener("b", "press", "in")
    with pytest.raises(TypeMismatch):
        flow.bind_scene(scene)
    assert scene.flow is None and flow.scene is not scene

    scene = _scene()
    scene.add_listener("b", "folow", "in")
    with pytest.raises(UnknownNode):
        flow.bind_scene(scene)

    scene = _scene()
    scene.add_listener("b", "follow", "in")
    flow.bind_scene(scene)
    assert scene.flow is flow
    with pytest.raises(UnknownPort):
        scene.add_listener("a", "follow", "pos")


#########
# Queries
#########


def test_ray_nearest():
    scene = _scene()
    forward = (0.0, 0.0, -1.0)
    # "hidden" is closer but invisible, "hand" is not selectable
    assert scene.ray_nearest((0.0, 0.0, 0.0), forward) == ("b", pytest.approx(1.5))
    assert scene.ray_nearest((0.0, 0.0, 0.0), forward, candidates=["a"])[0] == "a"
    assert scene.ray_nearest((3.0, 0.0, 1.0), forward) is None
    with pytest.raises(ValueError):
        scene.ray_nearest((0.0, 0.0, 0.0), (0.0, 0.0, -2.0))


def test_frustum_objects():
    scene = _scene()
    scene.add_object(SceneObject("behind", Transform((0.0, 0.0, 5.0))))
    assert scene.frustum_objects() == {"a", "b"}
    scene.set_viewpoint(Transform(orientation=quat_from_axis_angle("y", 180.0)))
    assert scene.frustum_objects() == {"behind"}
    with pytest.raises(ValueError):
        Frustum(near=2.0, far=1.0)


def test_snapshot():
    snap = _scene().snapshot()
    assert [o["id"] for o in snap["objects"]] == ["b", "a", "hidden", "hand"]
    assert snap["viewpoint"] == {"pos": [0.0, 0.0, 0.0], "orient": [1.0, 0.0, 0.0, 0.0]}


##############
# Ray vs plane
##############


def _plane_oracle(origin, direction, box):
    """Entry distance found by crossing each of the six face planes"""
    lo, hi = np.asarray(box.min), np.asarray(box.max)
    if np.all(origin >= lo) and np.all(origin <= hi):
        return 0.0
    best = None
    for axis in range(3):
        if direction[axis] == 0.0:
            continue
        for bound in (lo[axis], hi[axis]):
            t = (bound - origin[axis]) / direction[axis]
            if t < 0:
                continue
            point = origin + t * direction
            others = [i for i in range(3) if i != axis]
            if all(lo[i] - 1e-12 <= point[i] <= hi[i] + 1e-12 for i in others):
                if best is None or t < best:
                    best = t
    return best


def _random_scene(rng):
    scene = SceneState()
    for i in range(int(rng.integers(0, 11))):
        axis = rng.normal(size=3)
        if not np.any(axis):
            axis = np.array([0.0, 1.0, 0.0])
        transform = Transform(rng.uniform(-5, 5, size=3), quat_from_axis_angle(axis, rng.uniform(0, 360)))
        scene.add_object(SceneObject(f"box{i:02d}", transform, half_extents=rng.uniform(0.1, 1.5, size=3)))
    return scene


def test_ray_nearest_matches_plane_oracle():
    rng = np.random.default_rng(1234)
    for _ in range(1000):
        scene = _random_scene(rng)
        origin = rng.uniform(-6, 6, size=3)
        direction = rng.normal(size=3)
        direction = direction / np.linalg.norm(direction)

        expected = None
        for object_id in sorted(scene.objects):
            t = _plane_oracle(origin, direction, scene.get(object_id).aabb())
            if t is not None and (expected is None or t < expected[1]):
                expected = (object_id, t)

        hit = scene.ray_nearest(origin, direction)
        if expected is None:
            assert hit is None
        else:
            assert hit[0] == expected[0]
            assert math.isclose(hit[1], expected[1], rel_tol=0.0, abs_tol=1e-9)
