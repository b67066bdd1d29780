"""Scene graph: typed nodes in a transform forest, plus ray picking."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .errors import InvalidArgumentError, NotFoundError
from .math3d import Obb, Pose, Ray, compose, ray_intersect_obb

# Two ray hits closer than this are a tie; the lower node id wins.
PICK_TIE_EPS = 1e-9


class NodeKind(str, Enum):
    PANEL = "Panel"
    BUTTON = "Button"
    SLIDER = "Slider"
    MARKER = "Marker"
    POINT_CLOUD = "PointCloud"
    MAP_PLANE = "MapPlane"
    HANDLE = "Handle"


@dataclass
class SceneNode:
    node_id: int
    kind: NodeKind
    parent: int | None = None
    local: Pose = field(default_factory=Pose.identity)
    collider: Obb | None = None
    grabbable: bool = False
    context_tags: frozenset[str] = frozenset()
    visible: bool = True
    opacity: float = 1.0

    def __post_init__(self):
        self.opacity = min(max(self.opacity, 0.0), 1.0)


class Scene:
    """Single-owner node forest. Mutated only by the runtime tick."""

    def __init__(self):
        self._nodes: dict[int, SceneNode] = {}
        self._names: dict[str, int] = {}
        self._next_id = 1

    def add(
        self,
        kind: NodeKind,
        *,
        parent: int | None = None,
        local: Pose | None = None,
        collider: Obb | None = None,
        grabbable: bool = False,
        context_tags: frozenset[str] | set[str] = frozenset(),
        visible: bool = True,
        opacity: float = 1.0,
        name: str | None = None,
    ) -> SceneNode:
        if parent is not None and parent not in self._nodes:
            raise NotFoundError(f"parent node {parent} does not exist")
        node = SceneNode(
            node_id=self._next_id,
            kind=kind,
            parent=parent,
            local=local if local is not None else Pose.identity(),
            collider=collider,
            grabbable=grabbable,
            context_tags=frozenset(context_tags),
            visible=visible,
            opacity=opacity,
        )
        self._nodes[node.node_id] = node
        self._next_id += 1
        if name is not None:
            self.set_name(name, node.node_id)
        return node

    def node(self, node_id: int) -> SceneNode:
        try:
            return self._nodes[node_id]
        except KeyError:
            raise NotFoundError(f"no node with id {node_id}") from None

    def __contains__(self, node_id: int) -> bool:
        return node_id in self._nodes

    def ids(self) -> list[int]:
        return sorted(self._nodes)

    def nodes(self) -> list[SceneNode]:
        return [self._nodes[i] for i in self.ids()]

    # Name registry: named components are what layouts and context rules address.
    def set_name(self, name: str, node_id: int) -> None:
        if not name:
            raise InvalidArgumentError("component name must be non-empty")
        self.node(node_id)
        self._names[name] = node_id

    def lookup(self, name: str) -> int | None:
        return self._names.get(name)

    def names(self) -> dict[str, int]:
        return dict(self._names)

    def world_pose(self, node_id: int) -> Pose:
        node = self.node(node_id)
        if node.parent is None:
            return node.local
        return compose(self.world_pose(node.parent), node.local)

    def set_world_pose(self, node_id: int, world: Pose) -> None:
        """Set the node's local pose so its world pose equals ``world``.

        Root nodes take ``world`` verbatim (no float round-trip).
        """
        from .math3d import inverse  # local import avoids cycle in type checkers

        node = self.node(node_id)
        if node.parent is None:
            node.local = world
        else:
            node.local = compose(inverse(self.world_pose(node.parent)), world)

    def effectively_visible(self, node_id: int) -> bool:
        node = self.node(node_id)
        while True:
            if not node.visible:
                return False
            if node.parent is None:
                return True
            node = self.node(node.parent)

    def world_collider(self, node_id: int) -> Obb | None:
        node = self.node(node_id)
        if node.collider is None:
            return None
        return Obb(
            compose(self.world_pose(node_id), node.collider.center),
            node.collider.half_extents,
        )


def pick(scene: Scene, ray: Ray) -> tuple[int, float] | None:
    """Nearest effectively-visible collider node hit by the ray.

    Distance ties within PICK_TIE_EPS go to the lower node id.
    """
    best: tuple[int, float] | None = None
    for node_id in scene.ids():
        node = scene.node(node_id)
        if node.collider is None or not scene.effectively_visible(node_id):
            continue
        t = ray_intersect_obb(ray, scene.world_collider(node_id))
        if t is None:
            continue
        if best is None or t < best[1] - PICK_TIE_EPS:
            best = (node_id, t)
    return best
