import numpy as np

from itflow.flowcore.node import Filter
from itflow.flowcore.samples import Pick, SampleKind
from itflow.scene.geometry import overlap
from itflow.utils import get_logger, to_id_list, to_str
from itflow.utils.quaternion import forward

logger = get_logger(__name__)


class SelectObj(Filter):
    """Common part of the selection filters: the candidate set and an
    edge-triggered ``pick`` output.

    ``candidates`` restricts the selection to the listed objects; when empty,
    every visible selectable object of the scene is a candidate. Objects listed
    in ``exclude`` are never selected.
    """

    OPORTS = {"pick": SampleKind.PICK}
    PARAMS = {
        "candidates": (to_id_list, ()),
        "exclude": (to_id_list, ()),
    }

    def __init__(self, **params):
        super().__init__(**params)
        self.current = None
        self.started = False

    def excluded(self):
        return set(self.params["exclude"])

    def candidate_ids(self, scene):
        excluded = self.excluded()
        if not self.params["candidates"]:
            return scene.candidates(exclude=excluded)
        ids = []
        for object_id in self.params["candidates"]:
            if object_id in excluded or not scene.has_object(object_id):
                continue
            obj = scene.get(object_id)
            if obj.visible and obj.selectable:
                ids.append(object_id)
        return sorted(ids)

    def emit_if_changed(self, ctx, target):
        """Send Pick(<target>) only when the selection changes"""
        if self.started and target == self.current:
            return
        if not self.started and target is None:
            self.started = True
            return
        self.started = True
        self.current = target
        logger.debug(f"'{ctx.node_id}' now selects {target}")
        ctx.emit("pick", Pick(target))


class Select1ByPointing(SelectObj):
    """Ray-casting selection: the ray starts at the ``pos`` locator and follows
    its forward direction; the nearest candidate hit is selected.
    """

    IPORTS = {"pos": SampleKind.LOCATOR}

    def process(self, ctx):
        locator = self.latest("pos")
        if locator is None:
            return
        hit = ctx.scene.ray_nearest(
            locator.position,
            forward(locator.orientation),
            candidates=self.candidate_ids(ctx.scene),
        )
        self.emit_if_changed(ctx, hit[0] if hit is not None else None)


class Select1ByTouching(SelectObj):
    """Collision selection: the candidate whose bounds overlap the bounds of the
    ``hand`` object is selected. With several overlaps, the nearest center wins
    and equal distances go to the smallest id.

    A ``pos`` sample triggers the test, which uses the hand object's current
    transform; the step after the last ``pos`` sample tests once more, so the
    hand's final position is always evaluated.
    """

    IPORTS = {"pos": SampleKind.LOCATOR}
    PARAMS = dict(SelectObj.PARAMS, hand=(to_str, "virtualHand"))

    def __init__(self, **params):
        super().__init__(**params)
        self.settling = False

    def excluded(self):
        return super().excluded() | {self.params["hand"]}

    def process(self, ctx):
        if self.latest("pos") is not None:
            self.settling = True
        elif self.settling:
            self.settling = False
        else:
            return
        hand = ctx.scene.get(self.params["hand"]).aabb()
        center = np.asarray(hand.center)
        best = None
        for object_id in self.candidate_ids(ctx.scene):
            box = ctx.scene.get(object_id).aabb()
            if not overlap(hand, box):
                continue
            distance = float(np.linalg.norm(np.asarray(box.center) - center))
            if best is None or distance < best[1]:
                best = (object_id, distance)
        self.emit_if_changed(ctx, best[0] if best is not None else None)
