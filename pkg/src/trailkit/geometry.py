"""Trajectory primitives: arc-length parameterization, resampling, motion features.

Everything downstream (metrics, mining, retrieval) treats a trajectory as an
ordered polyline of 3D waypoints in the ego frame (x forward, y lateral,
z vertical) and parameterizes it by XY arc length.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, NamedTuple, Sequence

import numpy as np

from .errors import DegenerateTrajectoryError, InvalidTrajectoryError

TurningClass = Literal["left", "right", "straight"]

#: |net heading change| below this is classified "straight" (radians).
TURNING_THRESHOLD_RAD = 0.15


class Waypoint3D(NamedTuple):
    x: float
    y: float
    z: float
    t: float | None = None


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Ordered 3D waypoints, optionally timestamped.

    ``xyz`` is an (N, 3) float64 array. ``times`` is an optional (N,) array of
    non-negative seconds relative to the frame time, strictly increasing.
    Coordinates are not required to be finite at construction; operations that
    need finiteness raise :class:`InvalidTrajectoryError`.
    """

    xyz: np.ndarray
    times: np.ndarray | None = None
    frame_id: str = ""

    def __post_init__(self) -> None:
        xyz = np.asarray(self.xyz, dtype=np.float64)
        if xyz.size == 0:
            xyz = np.zeros((0, 3), dtype=np.float64)
        if xyz.ndim != 2 or xyz.shape[1] != 3:
            raise InvalidTrajectoryError(f"waypoints must be (N, 3), got {xyz.shape}")
        object.__setattr__(self, "xyz", xyz)
        if self.times is not None:
            times = np.asarray(self.times, dtype=np.float64)
            if times.shape != (xyz.shape[0],):
                raise InvalidTrajectoryError(
                    f"times must be ({xyz.shape[0]},), got {times.shape}"
                )
            if times.size and (not np.isfinite(times).all() or times[0] < 0.0):
                raise InvalidTrajectoryError("timestamps must be finite and non-negative")
            if times.size > 1 and not (np.diff(times) > 0.0).all():
                raise InvalidTrajectoryError("timestamps must be strictly increasing")
            object.__setattr__(self, "times", times)

    @classmethod
    def from_waypoints(
        cls, points: Sequence[Sequence[float]], frame_id: str = ""
    ) -> "Trajectory":
        """Build from (x, y, z) or (x, y, z, t) tuples; t must be all-or-none."""
        rows = [tuple(float(v) for v in p) for p in points]
        if not rows:
            return cls(np.zeros((0, 3)), frame_id=frame_id)
        widths = {len(r) for r in rows}
        if widths == {3}:
            return cls(np.array(rows, dtype=np.float64), frame_id=frame_id)
        if widths == {4}:
            arr = np.array(rows, dtype=np.float64)
            return cls(arr[:, :3], times=arr[:, 3], frame_id=frame_id)
        raise InvalidTrajectoryError("waypoints must uniformly be (x,y,z) or (x,y,z,t)")

    @property
    def n(self) -> int:
        return self.xyz.shape[0]

    def __len__(self) -> int:
        return self.n

    @property
    def xy(self) -> np.ndarray:
        return self.xyz[:, :2]

    @property
    def z(self) -> np.ndarray:
        return self.xyz[:, 2]

    @property
    def is_finite(self) -> bool:
        return bool(np.isfinite(self.xyz).all())

    @property
    def valid_for_mining(self) -> bool:
        """At least two waypoints, all coordinates finite."""
        return self.n >= 2 and self.is_finite

    @property
    def total_xy_length(self) -> float:
        if self.n == 0:
            return 0.0
        return float(arc_length(self)[-1])

    def waypoints(self) -> list[Waypoint3D]:
        if self.times is None:
            return [Waypoint3D(x, y, z) for x, y, z in self.xyz]
        return [
            Waypoint3D(x, y, z, t) for (x, y, z), t in zip(self.xyz, self.times)
        ]


def _require_finite(traj: Trajectory) -> None:
    if not traj.is_finite:
        raise InvalidTrajectoryError("trajectory contains non-finite coordinates")


def arc_length(traj: Trajectory) -> np.ndarray:
    """Cumulative XY arc length at each waypoint (meters).

    Element 0 is 0; element i is the summed planar distance of the first i
    segments. z is ignored. An empty trajectory yields an empty vector.
    """
    if traj.n == 0:
        return np.zeros(0, dtype=np.float64)
    _require_finite(traj)
    steps = np.linalg.norm(np.diff(traj.xy, axis=0), axis=1)
    out = np.zeros(traj.n, dtype=np.float64)
    np.cumsum(steps, out=out[1:])
    return out


def resample_by_arclength(traj: Trajectory, count: int) -> Trajectory:
    """Resample to ``count`` waypoints uniformly spaced in XY arc length.

    Coordinates are linearly interpolated between bracketing waypoints and the
    endpoints are preserved exactly. Timestamps are dropped: the result is an
    arc-length parameterization, not a time parameterization.

    Raises:
        InvalidTrajectoryError: fewer than two waypoints or non-finite coords.
        DegenerateTrajectoryError: all waypoints coincide in XY.
    """
    if count < 2:
        raise ValueError(f"resample count must be >= 2, got {count}")
    if traj.n < 2:
        raise InvalidTrajectoryError("resampling needs at least two waypoints")
    _require_finite(traj)
    s = arc_length(traj)
    total = s[-1]
    if total <= 0.0:
        raise DegenerateTrajectoryError("trajectory has zero XY length")
    grid = np.linspace(0.0, total, count)
    out = np.column_stack([np.interp(grid, s, traj.xyz[:, k]) for k in range(3)])
    out[0] = traj.xyz[0]
    out[-1] = traj.xyz[-1]
    return Trajectory(out, frame_id=traj.frame_id)


def wrap_angle(angle: np.ndarray | float) -> np.ndarray | float:
    """Wrap an angle (radians) into (-pi, pi]."""
    return -(np.mod(-np.asarray(angle) + np.pi, 2.0 * np.pi) - np.pi)


@dataclass(frozen=True, eq=False)
class MotionFeatures:
    """Horizontal motion pattern plus a mean-centered elevation profile."""

    total_xy_length: float
    mean_abs_curvature: float
    max_abs_curvature: float
    net_heading_change: float
    turning_class: TurningClass
    elevation_profile: np.ndarray


def motion_features(
    traj: Trajectory,
    profile_samples: int = 16,
    turning_threshold: float = TURNING_THRESHOLD_RAD,
) -> MotionFeatures:
    """Extract curvature, heading, and elevation-profile features.

    Curvature is estimated at each interior waypoint as the wrapped heading
    difference of the adjacent segments divided by their mean length; two-point
    trajectories get zero curvature. The elevation profile is the mean-centered
    z sequence after arc-length resampling to ``profile_samples``.

    Net heading change is the wrapped difference between the last and first
    segment headings, so features depend only on relative direction changes
    (rigid translations and rotations do not affect the turning class).
    """
    if traj.n < 2:
        raise InvalidTrajectoryError("motion features need at least two waypoints")
    _require_finite(traj)
    total = traj.total_xy_length
    if total <= 0.0:
        raise DegenerateTrajectoryError("trajectory has zero XY length")

    # Zero-length XY segments carry no direction; collapse them so headings
    # are well defined.
    deltas = np.diff(traj.xy, axis=0)
    lengths = np.linalg.norm(deltas, axis=1)
    moving = lengths > 0.0
    headings = np.arctan2(deltas[moving, 1], deltas[moving, 0])
    seg_lengths = lengths[moving]

    if headings.size >= 2:
        turns = wrap_angle(np.diff(headings))
        mean_adjacent = 0.5 * (seg_lengths[:-1] + seg_lengths[1:])
        curvature = turns / mean_adjacent
        mean_abs = float(np.mean(np.abs(curvature)))
        max_abs = float(np.max(np.abs(curvature)))
        net = float(wrap_angle(headings[-1] - headings[0]))
    else:
        mean_abs = max_abs = net = 0.0

    if abs(net) < turning_threshold:
        turning: TurningClass = "straight"
    elif net > 0.0:
        turning = "left"
    else:
        turning = "right"

    profile = resample_by_arclength(traj, profile_samples).z
    profile = profile - profile.mean()

    return MotionFeatures(
        total_xy_length=total,
        mean_abs_curvature=mean_abs,
        max_abs_curvature=max_abs,
        net_heading_change=net,
        turning_class=turning,
        elevation_profile=profile,
    )
