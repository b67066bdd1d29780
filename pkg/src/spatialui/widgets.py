"""Interactive widgets: sprung buttons, a center-anchored rate slider, panels.

Widgets are plain mutable values; update functions mutate in place and
return the events produced by that step.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InvalidArgumentError
from .events import Event, EventKind
from .math3d import Pose, Vec3
from .springs import SpringParams, SpringState, default_button_spring, spring_step


def _clamp(v: float, lo: float, hi: float) -> float:
    return min(max(v, lo), hi)


@dataclass
class Button3D:
    """Momentary push button with travel hysteresis.

    The cap follows contact while touched and springs back to rest when
    released. Press fires when depth/travel reaches ``press_threshold``,
    release only after it falls below ``release_threshold``; toggling is
    composed by callers on top of Pressed events.
    """

    node_id: int
    travel: float = 0.03
    press_axis: Vec3 = field(default_factory=lambda: Vec3(0.0, 0.0, -1.0))
    press_threshold: float = 0.7
    release_threshold: float = 0.4
    depth: float = 0.0
    params: SpringParams = field(default_factory=default_button_spring)
    spring: SpringState = field(default_factory=SpringState)
    latched: bool = False

    def __post_init__(self):
        if self.travel <= 0:
            raise InvalidArgumentError("button travel must be positive")
        if not (0.0 < self.release_threshold < self.press_threshold < 1.0):
            raise InvalidArgumentError(
                "need 0 < release_threshold < press_threshold < 1, got "
                f"{self.release_threshold}/{self.press_threshold}"
            )


def button_update(button: Button3D, contact_depth: float | None, dt: float) -> list[Event]:
    if contact_depth is not None:
        if contact_depth < 0:
            raise InvalidArgumentError(f"contact depth must be >= 0, got {contact_depth}")
        button.depth = min(contact_depth, button.travel)
        button.spring = SpringState(button.depth, 0.0)
    else:
        button.spring = spring_step(button.spring, button.params, 0.0, dt)
        button.depth = _clamp(button.spring.displacement, 0.0, button.travel)

    events: list[Event] = []
    fraction = button.depth / button.travel
    if not button.latched and fraction >= button.press_threshold:
        button.latched = True
        events.append(Event(EventKind.PRESSED, button.node_id, button.depth))
    elif button.latched and fraction < button.release_threshold:
        button.latched = False
        events.append(Event(EventKind.RELEASED, button.node_id, button.depth))
    return events


@dataclass
class Slider3D:
    """Rate-control slider: deflection from center sets the bound value's velocity.

    The handle springs back to the center anchor on release; the bound
    value is frozen while the handle is not engaged.
    """

    node_id: int
    half_range: float = 0.15
    gain: float = 1.0  # value units per second at full deflection
    bound_value: float = 0.0
    min_value: float = 0.0
    max_value: float = 1.0
    handle_offset: float = 0.0
    params: SpringParams = field(default_factory=default_button_spring)
    spring: SpringState = field(default_factory=SpringState)
    engaged: bool = False

    def __post_init__(self):
        if self.half_range <= 0:
            raise InvalidArgumentError("slider half_range must be positive")
        if not self.min_value <= self.bound_value <= self.max_value:
            raise InvalidArgumentError(
                f"bound value {self.bound_value} outside "
                f"[{self.min_value}, {self.max_value}]"
            )


def slider_update(slider: Slider3D, handle_target: float | None, dt: float) -> list[Event]:
    if dt <= 0:
        raise InvalidArgumentError(f"dt must be positive, got {dt}")
    events: list[Event] = []
    if handle_target is not None:
        slider.engaged = True
        slider.handle_offset = _clamp(handle_target, -slider.half_range, slider.half_range)
        slider.spring = SpringState(slider.handle_offset, 0.0)
        deflection = slider.handle_offset / slider.half_range
        new_value = _clamp(
            slider.bound_value + slider.gain * deflection * dt,
            slider.min_value,
            slider.max_value,
        )
        if new_value != slider.bound_value:
            slider.bound_value = new_value
            events.append(Event(EventKind.VALUE_CHANGED, slider.node_id, new_value))
    else:
        slider.engaged = False
        slider.spring = spring_step(slider.spring, slider.params, 0.0, dt)
        slider.handle_offset = _clamp(
            slider.spring.displacement, -slider.half_range, slider.half_range
        )
    return events


@dataclass
class Panel:
    """Grid panel whose content nodes sit in distinct cells."""

    node_id: int
    columns: int
    rows: int
    cell_size: float
    opacity: float = 1.0
    handle_node_id: int | None = None
    slots: dict[tuple[int, int], int] = field(default_factory=dict)

    def __post_init__(self):
        if self.columns < 1 or self.rows < 1 or self.cell_size <= 0:
            raise InvalidArgumentError("panel grid must be at least 1x1 with positive cell size")
        self.opacity = _clamp(self.opacity, 0.0, 1.0)

    def assign_slot(self, column: int, row: int, node_id: int) -> None:
        panel_slot_pose(self, column, row)  # validates range
        if (column, row) in self.slots:
            raise InvalidArgumentError(f"slot ({column}, {row}) already occupied")
        self.slots[(column, row)] = node_id


def panel_slot_pose(panel: Panel, column: int, row: int) -> Pose:
    """Local pose of a cell center; row 0 is the top row."""
    if not (0 <= column < panel.columns and 0 <= row < panel.rows):
        raise InvalidArgumentError(
            f"slot ({column}, {row}) outside {panel.columns}x{panel.rows} grid"
        )
    x = (column - (panel.columns - 1) / 2.0) * panel.cell_size
    y = ((panel.rows - 1) / 2.0 - row) * panel.cell_size
    return Pose.from_xyz(x, y, 0.0)


def set_opacity(panel: Panel, value: float) -> Panel:
    panel.opacity = _clamp(value, 0.0, 1.0)
    return panel
