"""Multimodal input: controller rays and pinch hands, one event stream.

Both modalities share a single activation hysteresis (engage at 0.8,
release at 0.6) so a widget behaves identically whichever device drives
it. Hands try near interaction first and fall back to a wrist ray, which
keeps every widget reachable without a controller.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .errors import InvalidArgumentError, ProtocolError
from .events import Event, EventKind
from .math3d import Pose, Ray, Vec3, point_obb_distance
from .scene import Scene, pick

ENGAGE_THRESHOLD = 0.8
RELEASE_THRESHOLD = 0.6
NEAR_RADIUS = 0.05  # m, fingertip slop for hand near-interaction

_FORWARD = Vec3(0.0, 0.0, -1.0)


class DeviceKind(str, Enum):
    CONTROLLER_RAY = "ray"
    TRACKED_HAND = "hand"


class EngageKind(str, Enum):
    SELECT = "Select"
    GRAB = "Grab"


def _clamp01(v: float) -> float:
    return min(max(v, 0.0), 1.0)


@dataclass(frozen=True)
class DeviceSample:
    device_id: str
    kind: DeviceKind
    pose: Pose
    pinch_strength: float = 0.0
    trigger: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "pinch_strength", _clamp01(self.pinch_strength))
        object.__setattr__(self, "trigger", _clamp01(self.trigger))

    @property
    def pointer(self) -> Ray:
        """Derived pointing ray along the pose's -z."""
        return Ray(self.pose.position, self.pose.rotation.rotate(_FORWARD))

    @property
    def activation(self) -> float:
        return self.trigger if self.kind == DeviceKind.CONTROLLER_RAY else self.pinch_strength


@dataclass(frozen=True)
class InputFrame:
    timestamp: float
    head: Pose = field(default_factory=Pose.identity)
    devices: tuple[DeviceSample, ...] = ()


def pointer_ray(device: DeviceSample) -> Ray:
    if device.kind != DeviceKind.CONTROLLER_RAY:
        raise InvalidArgumentError("pointer_ray is only defined for controller rays")
    return device.pointer


@dataclass
class DeviceState:
    hovered: int | None = None
    hover_distance: float = 0.0
    engaged: tuple[int, EngageKind] | None = None
    activation: float = 0.0
    pose: Pose = field(default_factory=Pose.identity)


class InteractionState:
    """Per-device hover/engagement tracking across frames."""

    def __init__(self):
        self.devices: dict[str, DeviceState] = {}
        self.last_timestamp: float | None = None

    def device(self, device_id: str) -> DeviceState:
        return self.devices.setdefault(device_id, DeviceState())


def _near_hover(scene: Scene, point: Vec3) -> tuple[int, float] | None:
    best: tuple[int, float] | None = None
    for node_id in scene.ids():
        node = scene.node(node_id)
        if node.collider is None or not scene.effectively_visible(node_id):
            continue
        d = point_obb_distance(point, scene.world_collider(node_id))
        if d <= NEAR_RADIUS and (best is None or d < best[1] - 1e-9):
            best = (node_id, d)
    return best


def _hover_target(device: DeviceSample, scene: Scene) -> tuple[int, float] | None:
    if device.kind == DeviceKind.CONTROLLER_RAY:
        return pick(scene, device.pointer)
    near = _near_hover(scene, device.pose.position)
    if near is not None:
        return near
    return pick(scene, device.pointer)


def process_frame(
    frame: InputFrame, scene: Scene, state: InteractionState
) -> list[Event]:
    """Advance hover and engagement state for every device in the frame.

    Devices that vanish from the stream are released and unhovered so a
    powered-off controller cannot hold a widget engaged.
    """
    if state.last_timestamp is not None and frame.timestamp <= state.last_timestamp:
        raise ProtocolError(
            f"frame timestamp {frame.timestamp} not after {state.last_timestamp}"
        )
    events: list[Event] = []
    seen: set[str] = set()

    for device in frame.devices:
        seen.add(device.device_id)
        ds = state.device(device.device_id)
        ds.pose = device.pose
        ds.activation = device.activation

        hit = _hover_target(device, scene)
        new_hover = hit[0] if hit is not None else None
        if new_hover != ds.hovered:
            if ds.hovered is not None:
                events.append(Event(EventKind.HOVER_EXITED, ds.hovered))
            if new_hover is not None:
                events.append(Event(EventKind.HOVER_ENTERED, new_hover, hit[1]))
            ds.hovered = new_hover
        ds.hover_distance = hit[1] if hit is not None else 0.0

        if ds.engaged is None:
            if ds.activation >= ENGAGE_THRESHOLD and ds.hovered is not None:
                node = scene.node(ds.hovered)
                engage_kind = EngageKind.GRAB if node.grabbable else EngageKind.SELECT
                ds.engaged = (ds.hovered, engage_kind)
                if engage_kind == EngageKind.SELECT:
                    events.append(
                        Event(EventKind.SELECT_START, ds.hovered, ds.activation)
                    )
        elif ds.activation <= RELEASE_THRESHOLD:
            node_id, engage_kind = ds.engaged
            if engage_kind == EngageKind.SELECT:
                events.append(Event(EventKind.SELECT_END, node_id, ds.activation))
            ds.engaged = None

    for device_id in sorted(state.devices):
        if device_id in seen:
            continue
        ds = state.devices[device_id]
        ds.activation = 0.0
        if ds.engaged is not None:
            node_id, engage_kind = ds.engaged
            if engage_kind == EngageKind.SELECT:
                events.append(Event(EventKind.SELECT_END, node_id, 0.0))
            ds.engaged = None
        if ds.hovered is not None:
            events.append(Event(EventKind.HOVER_EXITED, ds.hovered))
            ds.hovered = None

    state.last_timestamp = frame.timestamp
    return events
