"""Deterministic spring-damper stepping for widget return motion.

Semi-implicit Euler at a fixed substep keeps the integration stable for
stiff UI springs and makes replays bit-reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InvalidArgumentError

MAX_DT = 0.1  # stability guard; the runtime substeps longer frames


@dataclass(frozen=True)
class SpringParams:
    stiffness: float  # N/m
    damping: float  # N*s/m
    mass: float  # kg

    def __post_init__(self):
        ok = (
            math.isfinite(self.stiffness)
            and math.isfinite(self.damping)
            and math.isfinite(self.mass)
            and self.stiffness > 0
            and self.mass > 0
            and self.damping >= 0
        )
        if not ok:
            raise InvalidArgumentError(
                f"need stiffness > 0, mass > 0, damping >= 0; got "
                f"k={self.stiffness}, c={self.damping}, m={self.mass}"
            )


def default_button_spring() -> SpringParams:
    # Slightly under-critical: fast return with one barely visible overshoot.
    k, m = 300.0, 0.1
    return SpringParams(stiffness=k, damping=2.0 * math.sqrt(k * m) * 0.9, mass=m)


@dataclass(frozen=True)
class SpringState:
    displacement: float = 0.0  # m, 0 is the anchor
    velocity: float = 0.0  # m/s


def spring_step(
    state: SpringState, params: SpringParams, external_force: float, dt: float
) -> SpringState:
    """One semi-implicit Euler step: v' = v + ((-k*x - c*v + F)/m)*dt; x' = x + v'*dt."""
    if not (0.0 < dt <= MAX_DT):
        raise InvalidArgumentError(f"dt must be in (0, {MAX_DT}], got {dt}")
    x, v = state.displacement, state.velocity
    accel = (-params.stiffness * x - params.damping * v + external_force) / params.mass
    v2 = v + accel * dt
    x2 = x + v2 * dt
    return SpringState(x2, v2)


def is_settled(state: SpringState, position_eps: float, velocity_eps: float) -> bool:
    if position_eps <= 0 or velocity_eps <= 0:
        raise InvalidArgumentError("settle thresholds must be positive")
    return abs(state.displacement) < position_eps and abs(state.velocity) < velocity_eps


def energy(state: SpringState, params: SpringParams) -> float:
    """Total mechanical energy 0.5*k*x^2 + 0.5*m*v^2."""
    return (
        0.5 * params.stiffness * state.displacement * state.displacement
        + 0.5 * params.mass * state.velocity * state.velocity
    )
