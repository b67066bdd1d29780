"""Interaction event records shared by widgets, input, layout and runtime."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum


class EventKind(str, Enum):
    PRESSED = "Pressed"
    RELEASED = "Released"
    VALUE_CHANGED = "ValueChanged"
    GRAB_STARTED = "GrabStarted"
    GRAB_ENDED = "GrabEnded"
    HOVER_ENTERED = "HoverEntered"
    HOVER_EXITED = "HoverExited"
    SELECT_START = "SelectStart"
    SELECT_END = "SelectEnd"


@dataclass(frozen=True)
class Event:
    kind: EventKind
    node_id: int
    payload: float = 0.0
    timestamp: float = 0.0

    def stamped(self, t: float) -> "Event":
        return Event(self.kind, self.node_id, self.payload, t)
