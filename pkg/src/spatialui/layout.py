"""Grab-to-reposition, contextual visibility, and layout persistence."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from .errors import (
    FormatError,
    InvalidStateError,
    NotFoundError,
    NotGrabbableError,
    UnsupportedVersionError,
)
from .events import Event, EventKind
from .math3d import Pose, Quat, Vec3, compose, inverse
from .scene import NodeKind, Scene

LAYOUT_VERSION = 1


@dataclass(frozen=True)
class SnapPolicy:
    enabled: bool = False
    cell: float = 0.05  # m
    yaw_snap: bool = False
    yaw_step_deg: float = 15.0


@dataclass
class GrabSession:
    grabbed_node_id: int  # the node the user took hold of
    moved_node_id: int  # what actually moves (panel root for handles)
    offset: Pose  # node pose expressed in the grabber frame
    active: bool = True


def begin_grab(scene: Scene, node_id: int, grabber: Pose) -> tuple[GrabSession, list[Event]]:
    node = scene.node(node_id)
    if not scene.effectively_visible(node_id):
        raise NotFoundError(f"node {node_id} is hidden")
    if not node.grabbable:
        raise NotGrabbableError(f"node {node_id} is not grabbable")
    # A handle drags its whole panel, so content is never dragged by accident.
    moved_id = node.parent if node.kind == NodeKind.HANDLE and node.parent is not None else node_id
    offset = compose(inverse(grabber), scene.world_pose(moved_id))
    session = GrabSession(node_id, moved_id, offset)
    return session, [Event(EventKind.GRAB_STARTED, node_id)]


def update_grab(scene: Scene, session: GrabSession, grabber: Pose) -> Pose:
    if not session.active:
        raise InvalidStateError("grab session already ended")
    world = compose(grabber, session.offset)
    scene.set_world_pose(session.moved_node_id, world)
    return world


def _snap_yaw(rotation: Quat, step_deg: float) -> Quat:
    # Swing-twist split about +y: rotation = swing * twist.
    twist = Quat(0.0, rotation.y, 0.0, rotation.w)
    n = math.sqrt(twist.y * twist.y + twist.w * twist.w)
    if n < 1e-12:
        return rotation  # pure pitch/roll, no yaw to snap
    twist = Quat(0.0, twist.y / n, 0.0, twist.w / n)
    swing = rotation.mul(twist.conjugate())
    yaw = 2.0 * math.atan2(twist.y, twist.w)
    step = math.radians(step_deg)
    snapped = round(yaw / step) * step
    return swing.mul(Quat.from_axis_angle(Vec3(0.0, 1.0, 0.0), snapped)).normalized()


def end_grab(scene: Scene, session: GrabSession, snap: SnapPolicy) -> tuple[Pose, list[Event]]:
    if not session.active:
        raise InvalidStateError("grab session already ended")
    session.active = False
    world = scene.world_pose(session.moved_node_id)
    if snap.enabled:
        p = world.position
        cell = snap.cell
        world = Pose(
            Vec3(round(p.x / cell) * cell, round(p.y / cell) * cell, round(p.z / cell) * cell),
            _snap_yaw(world.rotation, snap.yaw_step_deg) if snap.yaw_snap else world.rotation,
        )
        scene.set_world_pose(session.moved_node_id, world)
    elif snap.yaw_snap:
        world = Pose(world.position, _snap_yaw(world.rotation, snap.yaw_step_deg))
        scene.set_world_pose(session.moved_node_id, world)
    return world, [Event(EventKind.GRAB_ENDED, session.grabbed_node_id)]


@dataclass(frozen=True)
class ContextRule:
    context_tag: str
    visible_components: frozenset[str]

    def __post_init__(self):
        if not self.context_tag:
            raise FormatError("context tag must be non-empty")


def set_context(scene: Scene, rules: list[ContextRule], context_tag: str) -> list[str]:
    """Apply contextual visibility; returns warnings.

    Components named by any rule become visible iff the active tag lists
    them; components no rule mentions keep their visibility. An unknown
    tag falls back to "default".
    """
    warnings: list[str] = []
    if not rules:
        return warnings
    known_tags = {r.context_tag for r in rules}
    tag = context_tag
    if tag not in known_tags:
        warnings.append(f"unknown context tag {tag!r}, falling back to 'default'")
        tag = "default"
    active: set[str] = set()
    ruled: set[str] = set()
    for rule in rules:
        ruled |= rule.visible_components
        if rule.context_tag == tag:
            active |= rule.visible_components
    for name in sorted(ruled):
        node_id = scene.lookup(name)
        if node_id is None:
            warnings.append(f"context rule names unknown component {name!r}")
            continue
        scene.node(node_id).visible = name in active
    return warnings


def rules_from_json(text: str) -> list[ContextRule]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"rules file is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or doc.get("version") != 1:
        raise UnsupportedVersionError(f"unsupported rules version {doc.get('version')!r}")
    rules = []
    for entry in doc.get("rules", []):
        rules.append(
            ContextRule(
                context_tag=str(entry["tag"]),
                visible_components=frozenset(str(n) for n in entry["visible"]),
            )
        )
    return rules


def _canon(value: float) -> float:
    """Canonicalize to 9 significant decimal digits for stable round trips."""
    return float(f"{value:.9g}")


def _canon_pose(pose: Pose) -> Pose:
    return Pose(
        Vec3(_canon(pose.position.x), _canon(pose.position.y), _canon(pose.position.z)),
        Quat(
            _canon(pose.rotation.x),
            _canon(pose.rotation.y),
            _canon(pose.rotation.z),
            _canon(pose.rotation.w),
        ),
    )


@dataclass(frozen=True)
class LayoutDocument:
    version: int
    saved_at: str
    entries: dict[str, Pose] = field(default_factory=dict)

    def to_json(self) -> str:
        payload = {
            "version": self.version,
            "saved_at": self.saved_at,
            "entries": {
                name: {
                    "p": [pose.position.x, pose.position.y, pose.position.z],
                    "q": [pose.rotation.x, pose.rotation.y, pose.rotation.z, pose.rotation.w],
                }
                for name, pose in sorted(self.entries.items())
            },
        }
        return json.dumps(payload, separators=(",", ":"))

    @staticmethod
    def from_json(text: str) -> "LayoutDocument":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise FormatError(f"layout file is not valid JSON: {exc}") from exc
        if not isinstance(doc, dict):
            raise FormatError("layout file must contain a JSON object")
        version = doc.get("version")
        if version != LAYOUT_VERSION:
            raise UnsupportedVersionError(f"unsupported layout version {version!r}")
        entries: dict[str, Pose] = {}
        for name, entry in doc.get("entries", {}).items():
            if not name:
                raise FormatError("layout entry names must be non-empty")
            try:
                px, py, pz = (float(v) for v in entry["p"])
                qx, qy, qz, qw = (float(v) for v in entry["q"])
            except (KeyError, TypeError, ValueError) as exc:
                raise FormatError(f"bad pose for component {name!r}: {exc}") from exc
            entries[name] = Pose(Vec3(px, py, pz), Quat(qx, qy, qz, qw))
        return LayoutDocument(version=version, saved_at=str(doc.get("saved_at", "")), entries=entries)


def save_layout(
    scene: Scene, component_names: list[str], saved_at: str
) -> LayoutDocument:
    entries: dict[str, Pose] = {}
    for name in component_names:
        node_id = scene.lookup(name)
        if node_id is None:
            raise NotFoundError(f"no component named {name!r}")
        entries[name] = _canon_pose(scene.world_pose(node_id))
    return LayoutDocument(version=LAYOUT_VERSION, saved_at=saved_at, entries=entries)


def load_layout(scene: Scene, doc: LayoutDocument) -> list[str]:
    """Apply saved world poses to named components; returns warnings."""
    if doc.version != LAYOUT_VERSION:
        raise UnsupportedVersionError(f"unsupported layout version {doc.version!r}")
    warnings: list[str] = []
    for name, pose in doc.entries.items():
        node_id = scene.lookup(name)
        if node_id is None:
            warnings.append(f"layout names unknown component {name!r}, skipped")
            continue
        scene.set_world_pose(node_id, pose)
    return warnings
