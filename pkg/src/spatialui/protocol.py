"""Wire schema: line-delimited JSON frames in, snapshots and events out."""

from __future__ import annotations

import json

from .errors import FormatError
from .events import Event, EventKind
from .inputs import DeviceKind, DeviceSample, InputFrame
from .math3d import Pose, Quat, Vec3
from .runtime import SceneSnapshot


def _pose_from_obj(obj: dict | None) -> Pose:
    if obj is None:
        return Pose.identity()
    p = obj.get("p", [0.0, 0.0, 0.0])
    q = obj.get("q", [0.0, 0.0, 0.0, 1.0])
    if len(p) != 3 or len(q) != 4:
        raise ValueError(f"pose needs 3 position and 4 rotation components, got {obj}")
    return Pose(
        Vec3(float(p[0]), float(p[1]), float(p[2])),
        Quat(float(q[0]), float(q[1]), float(q[2]), float(q[3])).normalized(),
    )


def _pose_to_obj(pose: Pose) -> dict:
    return {
        "p": [pose.position.x, pose.position.y, pose.position.z],
        "q": [pose.rotation.x, pose.rotation.y, pose.rotation.z, pose.rotation.w],
    }


def frame_from_obj(obj: dict) -> InputFrame:
    devices = []
    for dev in obj.get("devices", []):
        kind = DeviceKind(dev["kind"])
        devices.append(
            DeviceSample(
                device_id=str(dev["id"]),
                kind=kind,
                pose=_pose_from_obj(dev),
                pinch_strength=float(dev.get("pinch", 0.0)),
                trigger=float(dev.get("trigger", 0.0)),
            )
        )
    return InputFrame(
        timestamp=float(obj["t"]),
        head=_pose_from_obj(obj.get("head")),
        devices=tuple(devices),
    )


def frame_to_obj(frame: InputFrame) -> dict:
    return {
        "t": frame.timestamp,
        "head": _pose_to_obj(frame.head),
        "devices": [
            {
                "id": d.device_id,
                "kind": d.kind.value,
                **_pose_to_obj(d.pose),
                "pinch": d.pinch_strength,
                "trigger": d.trigger,
            }
            for d in frame.devices
        ],
    }


def parse_frame_line(line: str) -> InputFrame:
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise FormatError(f"bad frame JSON: {exc.msg}") from exc
    try:
        return frame_from_obj(obj)
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"bad input frame: {exc}") from exc


def event_record(event: Event) -> dict:
    record = {"ev": event.kind.value, "node": event.node_id, "t": event.timestamp}
    if event.kind == EventKind.VALUE_CHANGED:
        record["value"] = event.payload
    return record


def snapshot_record(snap: SceneSnapshot) -> dict:
    return {
        "snapshot": snap.frame,
        "t": snap.timestamp,
        "nodes": [
            {
                "node": n.node_id,
                "kind": n.kind.value,
                **_pose_to_obj(n.world),
                "opacity": n.opacity,
                "visible": n.visible,
                **({"state": dict(n.state)} if n.state else {}),
            }
            for n in snap.nodes
        ],
    }


def encode_line(record: dict) -> str:
    return json.dumps(record, separators=(",", ":")) + "\n"
