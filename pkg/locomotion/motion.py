"""Per-step coupling of the virtual walk to physical motion."""

import math
from dataclasses import replace

from geometry import Pose, TrackedSpace, collides
from locomotion.user_state import CollisionEvent, GainSet, UserState
from utils.angle_utils import wrap_angle

DEFAULT_VIRTUAL_STEP = 0.1


def turn(state: UserState, virtual_heading: float) -> UserState:
    """Point the virtual heading at ``virtual_heading``; the user turns physically by the same amount."""
    delta = wrap_angle(virtual_heading - state.virtual.heading)
    if delta == 0.0:
        return state
    return replace(
        state,
        virtual=state.virtual.with_heading(virtual_heading),
        physical=state.physical.with_heading(state.physical.heading + delta),
    )


def advance(
    state: UserState,
    gains: GainSet,
    space: TrackedSpace,
    virtual_step: float = DEFAULT_VIRTUAL_STEP,
) -> UserState | CollisionEvent:
    """Walk ``virtual_step`` metres virtually.

    The physical displacement is ``virtual_step / g_T`` along the physical heading, after which
    the heading rotates by ``g_C`` times that physical distance. A blocked step leaves the
    state untouched and returns a CollisionEvent.
    """
    gains.validate()

    physical_step = virtual_step / gains.translation
    physical = state.physical
    end = (
        physical.x + physical_step * math.cos(physical.heading),
        physical.y + physical_step * math.sin(physical.heading),
    )
    if collides(physical.position, end, space):
        return CollisionEvent(state=state, gains=gains, attempted_end=end)

    return replace(
        state,
        physical=Pose(end[0], end[1], physical.heading + gains.curvature * physical_step),
        virtual=state.virtual.moved(virtual_step),
        distance_walked_virtual=state.distance_walked_virtual + virtual_step,
        distance_walked_physical=state.distance_walked_physical + physical_step,
        last_gains=gains,
    )


def resets_per_km(resets: int, steps: int, virtual_step: float = DEFAULT_VIRTUAL_STEP) -> float:
    """Reset rate over a journey of ``steps`` ticks of ``virtual_step`` metres each."""
    if steps <= 0:
        return 0.0
    return resets / (virtual_step * steps / 1000.0)


def perform_reset(state: UserState, new_physical_heading: float) -> UserState:
    """Instantaneous in-place reorientation; only the physical heading and the counter change."""
    return replace(
        state,
        physical=state.physical.with_heading(new_physical_heading),
        reset_count=state.reset_count + 1,
    )
