"""Ray casting and segment collision queries against a TrackedSpace."""

from typing import Sequence

import numpy as np

from geometry.tracked_space import InvalidQueryError, Point, Pose, TrackedSpace

DEFAULT_NUM_RAYS = 60
DEFAULT_RAY_SPACING_DEG = 6.0


def _slab(origin: float, direction: np.ndarray, lo: np.ndarray, hi: np.ndarray):
    """Entry/exit parameters of rays (n, 1) against slabs [lo, hi] (1, m) along one axis."""
    with np.errstate(divide="ignore", invalid="ignore"):
        inv = 1.0 / direction
        t_a = (lo - origin) * inv
        t_b = (hi - origin) * inv
    near = np.minimum(t_a, t_b)
    far = np.maximum(t_a, t_b)

    # Rays parallel to the slab either live inside it forever or never enter it
    parallel = direction == 0.0
    if np.any(parallel):
        inside = (lo <= origin) & (origin <= hi)
        near = np.where(parallel, np.where(inside, -np.inf, np.inf), near)
        far = np.where(parallel, np.where(inside, np.inf, -np.inf), far)
    return near, far


def cast_rays(origin: Point, directions: Sequence[float] | np.ndarray, space: TrackedSpace) -> np.ndarray:
    """Distances from ``origin`` to the first boundary or obstacle hit for each direction."""
    if not space.is_free(origin):
        raise InvalidQueryError(f"Ray origin {origin} is outside free space; reset before sensing")

    ox, oy = float(origin[0]), float(origin[1])
    angles = np.asarray(directions, dtype=float).reshape(-1)
    dx = np.cos(angles)
    dy = np.sin(angles)

    # Boundary: exit distance along each axis, origin strictly inside
    with np.errstate(divide="ignore"):
        tx = np.where(dx > 0, (space.half_width - ox) / dx,
                      np.where(dx < 0, (-space.half_width - ox) / dx, np.inf))
        ty = np.where(dy > 0, (space.half_depth - oy) / dy,
                      np.where(dy < 0, (-space.half_depth - oy) / dy, np.inf))
    distances = np.minimum(tx, ty)

    if space.obstacles:
        xmin, xmax, ymin, ymax = space.obstacle_arrays
        x_near, x_far = _slab(ox, dx[:, None], xmin[None, :], xmax[None, :])
        y_near, y_far = _slab(oy, dy[:, None], ymin[None, :], ymax[None, :])
        enter = np.maximum(x_near, y_near)
        leave = np.minimum(x_far, y_far)
        hit = (enter <= leave) & (enter > 0.0)
        obstacle_distances = np.where(hit, enter, np.inf).min(axis=1)
        distances = np.minimum(distances, obstacle_distances)

    return distances


def cast_ray(origin: Point, direction: float, space: TrackedSpace) -> float:
    return float(cast_rays(origin, [direction], space)[0])


def sense_surroundings(
    pose: Pose,
    space: TrackedSpace,
    num_rays: int = DEFAULT_NUM_RAYS,
    spacing_deg: float = DEFAULT_RAY_SPACING_DEG,
) -> np.ndarray:
    """Ray k is cast at heading + k * spacing; 60 rays every 6 degrees cover the full circle."""
    directions = pose.heading + np.radians(spacing_deg) * np.arange(num_rays)
    return cast_rays(pose.position, directions, space)


def _segment_hits_box(
    sx: float, sy: float, dx: float, dy: float, bounds: tuple
) -> bool:
    xmin, xmax, ymin, ymax = bounds
    t0, t1 = 0.0, 1.0
    for s, d, lo, hi in ((sx, dx, xmin, xmax), (sy, dy, ymin, ymax)):
        if d == 0.0:
            if s < lo or s > hi:
                return False
            continue
        ta = (lo - s) / d
        tb = (hi - s) / d
        if ta > tb:
            ta, tb = tb, ta
        t0 = max(t0, ta)
        t1 = min(t1, tb)
        if t0 > t1:
            return False
    return True


def collides(start: Point, end: Point, space: TrackedSpace) -> bool:
    """True iff the segment leaves the (margin-shrunk) room or touches a (margin-inflated) obstacle.

    The agent is a point; ``start`` is assumed to be in free space.
    """
    margin = space.safety_margin
    ex, ey = end
    # Convex room: the segment stays inside iff its end point does
    if abs(ex) >= space.half_width - margin or abs(ey) >= space.half_depth - margin:
        return True

    sx, sy = start
    dx, dy = ex - sx, ey - sy
    return any(_segment_hits_box(sx, sy, dx, dy, b) for b in space.collision_bounds)

