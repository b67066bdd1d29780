"""Tunable defaults for widgets, input and the demo world."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace

from .errors import FormatError
from .layout import SnapPolicy
from .springs import SpringParams


@dataclass(frozen=True)
class Config:
    physics_hz: float = 90.0
    button_travel: float = 0.03
    press_threshold: float = 0.7
    release_threshold: float = 0.4
    button_spring_stiffness: float = 300.0
    button_spring_mass: float = 0.1
    button_spring_damping_ratio: float = 0.9
    slider_half_range: float = 0.15
    slider_gain: float = 2.0
    map_extent: float = 2.0
    map_scale: float = 1.0
    map_scale_min: float = 0.25
    map_scale_max: float = 4.0
    snap: SnapPolicy = SnapPolicy()

    @property
    def substep(self) -> float:
        return 1.0 / self.physics_hz

    def button_spring(self) -> SpringParams:
        k, m = self.button_spring_stiffness, self.button_spring_mass
        return SpringParams(
            stiffness=k,
            damping=2.0 * math.sqrt(k * m) * self.button_spring_damping_ratio,
            mass=m,
        )


_SNAP_KEYS = {"enabled", "cell", "yaw_snap", "yaw_step_deg"}


def load_config(text: str) -> Config:
    """Build a Config from JSON, overriding only the keys present."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"config is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise FormatError("config must be a JSON object")
    cfg = Config()
    snap_doc = doc.pop("snap", None)
    known = {f for f in cfg.__dataclass_fields__ if f != "snap"}
    unknown = set(doc) - known
    if unknown:
        raise FormatError(f"unknown config keys: {', '.join(sorted(unknown))}")
    cfg = replace(cfg, **{k: type(getattr(cfg, k))(v) for k, v in doc.items()})
    if snap_doc is not None:
        bad = set(snap_doc) - _SNAP_KEYS
        if bad:
            raise FormatError(f"unknown snap keys: {', '.join(sorted(bad))}")
        cfg = replace(cfg, snap=replace(SnapPolicy(), **snap_doc))
    return cfg
