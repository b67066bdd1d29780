"""Deterministic session loop: world state, tick pipeline, replay harness.

Every tick runs the same fixed pipeline (input, widgets, springs, grabs,
context visibility, snapshot), substepped to the physics rate, so identical
input histories always produce identical event traces.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace

from .config import Config
from .errors import FormatError, NotFoundError, ProtocolError
from .events import Event, EventKind
from .geo import (
    ChargerQuery,
    ChargerRecord,
    ChargerType,
    MapPlaneSpec,
    PointCloud,
    RowError,
    load_chargers,
    mercator_project,
)
from .inputs import (
    ENGAGE_THRESHOLD,
    EngageKind,
    InputFrame,
    InteractionState,
    process_frame,
)
from .layout import (
    ContextRule,
    GrabSession,
    LayoutDocument,
    begin_grab,
    end_grab,
    load_layout,
    save_layout,
    update_grab,
)
from .math3d import Obb, Pose, Vec3
from .scene import NodeKind, Scene
from .widgets import (
    Button3D,
    Panel,
    Slider3D,
    button_update,
    panel_slot_pose,
    slider_update,
)

AVAILABILITY_FILTER = "available"


@dataclass(frozen=True)
class SnapshotNode:
    node_id: int
    kind: NodeKind
    world: Pose
    opacity: float
    visible: bool
    state: tuple[tuple[str, float], ...] = ()


@dataclass(frozen=True)
class SceneSnapshot:
    frame: int
    timestamp: float
    nodes: tuple[SnapshotNode, ...]


@dataclass
class _SliderDrag:
    node_id: int
    anchor: Vec3
    start_offset: float


class World:
    """Everything one session owns; mutated only by tick()."""

    def __init__(self, config: Config | None = None):
        self.config = config if config is not None else Config()
        self.scene = Scene()
        self.buttons: dict[int, Button3D] = {}
        self.sliders: dict[int, Slider3D] = {}
        self.panels: dict[int, Panel] = {}
        self.input_state = InteractionState()
        self.rules: list[ContextRule] = []
        self.active_context = "default"
        self.map_spec = MapPlaneSpec(self.config.map_extent, self.config.map_scale)
        self.chargers: list[ChargerRecord] = []
        self.marker_nodes: dict[str, int] = {}
        self.map_node_id: int | None = None
        self.scale_slider_id: int | None = None
        self.enabled_types: set[ChargerType] = set(ChargerType)
        self.available_only = False
        self.filter_bindings: dict[int, ChargerType | str] = {}
        self.layout_names: list[str] = []
        self.layout_slots: dict[str, LayoutDocument] = {}
        self.point_clouds: dict[int, PointCloud] = {}
        self.grab_sessions: dict[str, GrabSession] = {}
        self.slider_drags: dict[str, _SliderDrag] = {}
        self.event_log: list[Event] = []
        self.frame_counter = 0
        self.last_timestamp: float | None = None

    # -- queries ---------------------------------------------------------

    def active_query(self) -> ChargerQuery:
        return ChargerQuery(
            types=frozenset(self.enabled_types), available_only=self.available_only
        )

    def context_warnings(self) -> list[str]:
        from .layout import set_context

        return set_context(self.scene, self.rules, self.active_context)

    # -- demo wiring -----------------------------------------------------

    def _on_widget_event(self, event: Event) -> None:
        if event.kind == EventKind.PRESSED:
            binding = self.filter_bindings.get(event.node_id)
            if isinstance(binding, ChargerType):
                if binding in self.enabled_types:
                    self.enabled_types.discard(binding)
                else:
                    self.enabled_types.add(binding)
            elif binding == AVAILABILITY_FILTER:
                self.available_only = not self.available_only
        elif event.kind == EventKind.VALUE_CHANGED and event.node_id == self.scale_slider_id:
            self.map_spec = replace(self.map_spec, scale=event.payload)
            self._reproject_markers()

    def _reproject_markers(self) -> None:
        for charger in self.chargers:
            node_id = self.marker_nodes.get(charger.id)
            if node_id is None:
                continue
            x, y = mercator_project(charger.latitude, charger.longitude, self.map_spec)
            node = self.scene.node(node_id)
            node.local = Pose(Vec3(x, y, node.local.position.z), node.local.rotation)


def tick(world: World, frame: InputFrame) -> tuple[list[Event], SceneSnapshot]:
    """Advance the world by one input frame; returns (events, snapshot)."""
    if world.last_timestamp is not None and frame.timestamp <= world.last_timestamp:
        raise ProtocolError(
            f"stale frame: {frame.timestamp} not after {world.last_timestamp}"
        )
    h = world.config.substep
    dt = frame.timestamp - world.last_timestamp if world.last_timestamp is not None else h
    substeps = max(1, math.ceil(dt / h - 1e-9))
    sub_dt = dt / substeps

    events = process_frame(frame, world.scene, world.input_state)
    for _ in range(substeps):
        events += _update_widgets(world, sub_dt)
        events += _apply_grabs(world)
        _apply_visibility(world)

    events = [ev.stamped(frame.timestamp) for ev in events]
    world.event_log.extend(events)
    world.last_timestamp = frame.timestamp
    world.frame_counter += 1
    return events, snapshot(world, frame.timestamp)


def _button_contact(world: World, node_id: int, button: Button3D) -> float | None:
    """Contact depth pushed into a button by whichever device selects it hardest."""
    contact: float | None = None
    for device_id in sorted(world.input_state.devices):
        ds = world.input_state.devices[device_id]
        if ds.engaged != (node_id, EngageKind.SELECT):
            continue
        if ds.activation >= ENGAGE_THRESHOLD:
            depth = min(ds.activation, 1.0) * button.travel
            contact = depth if contact is None else max(contact, depth)
    return contact


def _slider_target(world: World, node_id: int, slider: Slider3D) -> float | None:
    """Handle target from the engaging device's lateral motion since engage."""
    target: float | None = None
    axis = world.scene.world_pose(node_id).rotation.rotate(Vec3(1.0, 0.0, 0.0))
    for device_id in sorted(world.input_state.devices):
        ds = world.input_state.devices[device_id]
        if ds.engaged != (node_id, EngageKind.SELECT):
            if device_id in world.slider_drags and world.slider_drags[device_id].node_id == node_id:
                del world.slider_drags[device_id]
            continue
        drag = world.slider_drags.get(device_id)
        if drag is None or drag.node_id != node_id:
            drag = _SliderDrag(node_id, ds.pose.position, slider.handle_offset)
            world.slider_drags[device_id] = drag
        target = drag.start_offset + (ds.pose.position - drag.anchor).dot(axis)
    return target


def _update_widgets(world: World, sub_dt: float) -> list[Event]:
    events: list[Event] = []
    for node_id in sorted(world.buttons):
        button = world.buttons[node_id]
        produced = button_update(button, _button_contact(world, node_id, button), sub_dt)
        for ev in produced:
            world._on_widget_event(ev)
        events += produced
    for node_id in sorted(world.sliders):
        slider = world.sliders[node_id]
        produced = slider_update(slider, _slider_target(world, node_id, slider), sub_dt)
        for ev in produced:
            world._on_widget_event(ev)
        events += produced
    for panel in world.panels.values():
        world.scene.node(panel.node_id).opacity = panel.opacity
    return events


def _apply_grabs(world: World) -> list[Event]:
    events: list[Event] = []
    for device_id in sorted(world.input_state.devices):
        ds = world.input_state.devices[device_id]
        session = world.grab_sessions.get(device_id)
        if ds.engaged is not None and ds.engaged[1] == EngageKind.GRAB:
            if session is None:
                session, produced = begin_grab(world.scene, ds.engaged[0], ds.pose)
                world.grab_sessions[device_id] = session
                events += produced
            update_grab(world.scene, session, ds.pose)
        elif session is not None:
            _, produced = end_grab(world.scene, session, world.config.snap)
            events += produced
            del world.grab_sessions[device_id]
    return events


def _apply_visibility(world: World) -> None:
    world.context_warnings()
    query = world.active_query()
    for charger in world.chargers:
        node_id = world.marker_nodes.get(charger.id)
        if node_id is not None:
            world.scene.node(node_id).visible = query.matches(charger)


def _widget_state(world: World, node_id: int) -> tuple[tuple[str, float], ...]:
    button = world.buttons.get(node_id)
    if button is not None:
        return (("depth", button.depth), ("latched", 1.0 if button.latched else 0.0))
    slider = world.sliders.get(node_id)
    if slider is not None:
        return (("offset", slider.handle_offset), ("value", slider.bound_value))
    if node_id == world.map_node_id:
        return (("scale", world.map_spec.scale),)
    return ()


def snapshot(world: World, timestamp: float) -> SceneSnapshot:
    nodes = tuple(
        SnapshotNode(
            node_id=node_id,
            kind=world.scene.node(node_id).kind,
            world=world.scene.world_pose(node_id),
            opacity=world.scene.node(node_id).opacity,
            visible=world.scene.effectively_visible(node_id),
            state=_widget_state(world, node_id),
        )
        for node_id in world.scene.ids()
    )
    return SceneSnapshot(frame=world.frame_counter, timestamp=timestamp, nodes=nodes)


def attach_scan(world: World, charger_id: str, cloud: PointCloud) -> int:
    """Attach a loaded scan as a point-cloud node under the charger's marker."""
    marker = world.marker_nodes.get(charger_id)
    if marker is None:
        raise NotFoundError(f"no marker for charger {charger_id!r}")
    node = world.scene.add(NodeKind.POINT_CLOUD, parent=marker)
    world.point_clouds[node.node_id] = cloud
    return node.node_id


# -- demo world --------------------------------------------------------------


def _add_panel(
    world: World,
    *,
    name: str,
    position: Vec3,
    columns: int,
    rows: int,
    cell: float,
    opacity: float = 0.85,
) -> tuple[Panel, int]:
    scene = world.scene
    root = scene.add(NodeKind.PANEL, local=Pose(position), name=name)
    half_w = columns * cell / 2.0
    half_h = rows * cell / 2.0
    handle = scene.add(
        NodeKind.HANDLE,
        parent=root.node_id,
        local=Pose.from_xyz(0.0, half_h + 0.03, 0.0),
        collider=Obb(Pose.identity(), Vec3(half_w * 0.8, 0.018, 0.015)),
        grabbable=True,
    )
    panel = Panel(
        node_id=root.node_id,
        columns=columns,
        rows=rows,
        cell_size=cell,
        opacity=opacity,
        handle_node_id=handle.node_id,
    )
    world.panels[root.node_id] = panel
    return panel, root.node_id


def _add_button(world: World, panel: Panel, column: int, row: int) -> int:
    cfg = world.config
    node = world.scene.add(
        NodeKind.BUTTON,
        parent=panel.node_id,
        local=panel_slot_pose(panel, column, row),
        collider=Obb(Pose.identity(), Vec3(panel.cell_size * 0.42, panel.cell_size * 0.42, 0.012)),
    )
    panel.assign_slot(column, row, node.node_id)
    world.buttons[node.node_id] = Button3D(
        node_id=node.node_id,
        travel=cfg.button_travel,
        press_threshold=cfg.press_threshold,
        release_threshold=cfg.release_threshold,
        params=cfg.button_spring(),
    )
    return node.node_id


def build_demo_world(
    config: Config,
    chargers_csv: str,
    layout: LayoutDocument | None = None,
    rules: list[ContextRule] | None = None,
) -> tuple[World, list[RowError]]:
    """Assemble the EV-charger visualization: map, markers, filter and scale panels."""
    world = World(config)
    scene = world.scene
    records, row_errors = load_chargers(chargers_csv)
    world.chargers = records

    half = config.map_extent / 2.0
    map_node = scene.add(
        NodeKind.MAP_PLANE,
        local=Pose.from_xyz(0.0, 1.2, -1.5),
        collider=Obb(Pose.identity(), Vec3(half, half, 0.005)),
        name="map",
    )
    world.map_node_id = map_node.node_id
    for charger in records:
        x, y = mercator_project(charger.latitude, charger.longitude, world.map_spec)
        marker = scene.add(
            NodeKind.MARKER,
            parent=map_node.node_id,
            local=Pose.from_xyz(x, y, 0.015),
            collider=Obb(Pose.identity(), Vec3(0.01, 0.01, 0.01)),
        )
        world.marker_nodes[charger.id] = marker.node_id

    filter_panel, _ = _add_panel(
        world, name="filter-panel", position=Vec3(-0.55, 1.2, -1.0), columns=2, rows=2, cell=0.09
    )
    for (col, row), binding in (
        ((0, 0), ChargerType.SLOW),
        ((1, 0), ChargerType.FAST),
        ((0, 1), ChargerType.RAPID),
        ((1, 1), AVAILABILITY_FILTER),
    ):
        node_id = _add_button(world, filter_panel, col, row)
        world.filter_bindings[node_id] = binding

    scale_panel, scale_root = _add_panel(
        world, name="scale-panel", position=Vec3(0.55, 1.1, -1.0), columns=1, rows=1, cell=0.12
    )
    slider_node = scene.add(
        NodeKind.SLIDER,
        parent=scale_root,
        collider=Obb(
            Pose.identity(), Vec3(config.slider_half_range + 0.02, 0.03, 0.012)
        ),
    )
    world.sliders[slider_node.node_id] = Slider3D(
        node_id=slider_node.node_id,
        half_range=config.slider_half_range,
        gain=config.slider_gain,
        bound_value=config.map_scale,
        min_value=config.map_scale_min,
        max_value=config.map_scale_max,
        params=config.button_spring(),
    )
    world.scale_slider_id = slider_node.node_id

    world.layout_names = ["map", "filter-panel", "scale-panel"]
    if rules:
        world.rules = list(rules)
    if layout is not None:
        load_layout(scene, layout)
    _apply_visibility(world)
    return world, row_errors


# -- replay -------------------------------------------------------------------


@dataclass(frozen=True)
class Directive:
    timestamp: float
    name: str
    args: dict = field(default_factory=dict)


@dataclass(frozen=True)
class ReplayScript:
    steps: tuple[InputFrame | Directive, ...]


def parse_script(text: str) -> ReplayScript:
    from .protocol import frame_from_obj

    steps: list[InputFrame | Directive] = []
    last_t: float | None = None
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise FormatError(f"bad script JSON: {exc.msg}", line=line_no) from exc
        if not isinstance(obj, dict) or "t" not in obj:
            raise FormatError("script record needs a 't' timestamp", line=line_no)
        try:
            t = float(obj["t"])
        except (TypeError, ValueError):
            raise FormatError(f"bad timestamp {obj.get('t')!r}", line=line_no) from None
        if last_t is not None and t <= last_t:
            raise FormatError(
                f"timestamps must increase strictly ({t} after {last_t})", line=line_no
            )
        last_t = t
        if "directive" in obj:
            name = obj["directive"]
            if name not in ("set_context", "save_layout", "load_layout", "query"):
                raise FormatError(f"unknown directive {name!r}", line=line_no)
            args = {k: v for k, v in obj.items() if k not in ("t", "directive")}
            steps.append(Directive(t, name, args))
        else:
            try:
                steps.append(frame_from_obj(obj))
            except (KeyError, TypeError, ValueError) as exc:
                raise FormatError(f"bad input frame: {exc}", line=line_no) from exc
    return ReplayScript(tuple(steps))


def _run_directive(world: World, directive: Directive) -> dict:
    record: dict = {"directive": directive.name, "t": directive.timestamp}
    if directive.name == "set_context":
        tag = str(directive.args.get("tag", "default"))
        world.active_context = tag
        warnings = world.context_warnings()
        record["tag"] = tag
        if warnings:
            record["warnings"] = warnings
    elif directive.name == "save_layout":
        slot = str(directive.args.get("slot", "default"))
        doc = save_layout(
            world.scene, world.layout_names, saved_at=f"t+{directive.timestamp:.9g}s"
        )
        world.layout_slots[slot] = doc
        path = directive.args.get("path")
        if path:
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(doc.to_json())
        record["slot"] = slot
    elif directive.name == "load_layout":
        slot = str(directive.args.get("slot", "default"))
        doc = world.layout_slots.get(slot)
        if doc is None:
            raise FormatError(f"load_layout refers to unsaved slot {slot!r}")
        warnings = load_layout(world.scene, doc)
        record["slot"] = slot
        if warnings:
            record["warnings"] = warnings
    elif directive.name == "query":
        types = directive.args.get("types")
        if types is not None:
            world.enabled_types = {ChargerType.parse(t) for t in types}
        if "available_only" in directive.args:
            world.available_only = bool(directive.args["available_only"])
        _apply_visibility(world)
        query = world.active_query()
        matched = [c.id for c in world.chargers if query.matches(c)]
        record["types"] = sorted(t.value for t in world.enabled_types)
        record["available_only"] = world.available_only
        record["matched"] = matched
    return record


def run_replay(world: World, script: ReplayScript) -> str:
    """Feed a script through the tick loop; returns the line-delimited trace."""
    from .protocol import event_record

    lines: list[str] = []
    for step in script.steps:
        if isinstance(step, Directive):
            lines.append(json.dumps(_run_directive(world, step), separators=(",", ":")))
        else:
            events, _snap = tick(world, step)
            lines.extend(
                json.dumps(event_record(ev), separators=(",", ":")) for ev in events
            )
    return "".join(line + "\n" for line in lines)
