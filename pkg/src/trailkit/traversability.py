"""Traversability compliance scoring against a ground-truth occupancy grid.

The score combines an exponential proximity risk over the closest obstacle
encounters with a length-weighted violation penalty at a set of clearance
thresholds. Clearance comes from an exact Euclidean distance transform of the
binary grid, measured between cell centers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.ndimage import distance_transform_edt

from .errors import DegenerateTrajectoryError, InvalidTrajectoryError
from .geometry import Trajectory, arc_length


@dataclass(frozen=True, eq=False)
class TraversabilityGrid:
    """Binary occupancy labels on a regular XY grid.

    ``traversable`` is an (height, width) bool array indexed [row, col] where
    col maps to x and row maps to y. ``origin`` is the world position of the
    cell (row=0, col=0) center; cell centers sit at
    ``origin + index * resolution``.
    """

    traversable: np.ndarray
    resolution: float
    origin: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self) -> None:
        labels = np.asarray(self.traversable, dtype=bool)
        if labels.ndim != 2 or labels.size == 0:
            raise ValueError(f"grid labels must be a non-empty 2D array, got {labels.shape}")
        if not (self.resolution > 0.0 and np.isfinite(self.resolution)):
            raise ValueError(f"resolution must be positive, got {self.resolution}")
        object.__setattr__(self, "traversable", labels)
        object.__setattr__(self, "origin", (float(self.origin[0]), float(self.origin[1])))

    @property
    def height(self) -> int:
        return self.traversable.shape[0]

    @property
    def width(self) -> int:
        return self.traversable.shape[1]

    def world_to_grid(self, points_xy: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Map world XY positions to fractional (col, row) grid coordinates."""
        pts = np.asarray(points_xy, dtype=np.float64).reshape(-1, 2)
        cols = (pts[:, 0] - self.origin[0]) / self.resolution
        rows = (pts[:, 1] - self.origin[1]) / self.resolution
        return cols, rows


@dataclass(frozen=True, eq=False)
class ClearanceField:
    """Per-cell distance (meters) to the nearest non-traversable cell center.

    Zero exactly on non-traversable cells; +inf everywhere when the grid has
    no obstacle at all.
    """

    distances: np.ndarray
    traversable: np.ndarray
    resolution: float
    origin: tuple[float, float]

    @property
    def unbounded(self) -> bool:
        return bool(np.isinf(self.distances).any())

    def _grid(self) -> TraversabilityGrid:
        return TraversabilityGrid(self.traversable, self.resolution, self.origin)


def clearance_field(grid: TraversabilityGrid) -> ClearanceField:
    """Exact Euclidean distance transform of the grid, in meters."""
    if grid.traversable.all():
        distances = np.full(grid.traversable.shape, np.inf)
    elif not grid.traversable.any():
        distances = np.zeros(grid.traversable.shape)
    else:
        # Index-space transform scaled afterwards keeps the sqrt argument an
        # exact integer, so results match a brute-force oracle bit for bit.
        distances = distance_transform_edt(grid.traversable) * grid.resolution
    return ClearanceField(
        distances=distances,
        traversable=grid.traversable,
        resolution=grid.resolution,
        origin=grid.origin,
    )


def _inside_footprint(cols: np.ndarray, rows: np.ndarray, shape: tuple[int, int]) -> np.ndarray:
    h, w = shape
    return (cols >= -0.5) & (cols <= w - 0.5) & (rows >= -0.5) & (rows <= h - 0.5)


def _bilinear(values: np.ndarray, cols: np.ndarray, rows: np.ndarray) -> np.ndarray:
    h, w = values.shape
    c = np.clip(cols, 0.0, w - 1.0)
    r = np.clip(rows, 0.0, h - 1.0)
    c0 = np.floor(c).astype(int)
    r0 = np.floor(r).astype(int)
    c1 = np.minimum(c0 + 1, w - 1)
    r1 = np.minimum(r0 + 1, h - 1)
    fc = c - c0
    fr = r - r0
    v00 = values[r0, c0]
    v01 = values[r0, c1]
    v10 = values[r1, c0]
    v11 = values[r1, c1]
    top = v00 * (1.0 - fc) + v01 * fc
    bottom = v10 * (1.0 - fc) + v11 * fc
    return top * (1.0 - fr) + bottom * fr


def waypoint_clearances(traj: Trajectory, field: ClearanceField) -> np.ndarray:
    """Clearance at each waypoint's XY position.

    Bilinear interpolation of the field; positions outside the grid footprint
    get clearance 0 (leaving the annotated region counts as non-traversable).
    """
    if traj.n == 0:
        raise InvalidTrajectoryError("cannot score an empty trajectory")
    if not traj.is_finite:
        raise InvalidTrajectoryError("trajectory contains non-finite coordinates")
    cols, rows = field._grid().world_to_grid(traj.xy)
    inside = _inside_footprint(cols, rows, field.distances.shape)
    if field.unbounded:
        return np.where(inside, np.inf, 0.0)
    out = np.zeros(traj.n, dtype=np.float64)
    if inside.any():
        out[inside] = _bilinear(field.distances, cols[inside], rows[inside])
    return out


def on_non_traversable(traj: Trajectory, field: ClearanceField) -> np.ndarray:
    """Whether each waypoint's nearest cell is labeled non-traversable.

    Out-of-footprint waypoints count as non-traversable.
    """
    cols, rows = field._grid().world_to_grid(traj.xy)
    inside = _inside_footprint(cols, rows, field.distances.shape)
    h, w = field.traversable.shape
    ic = np.clip(np.floor(cols + 0.5).astype(int), 0, w - 1)
    ir = np.clip(np.floor(rows + 0.5).astype(int), 0, h - 1)
    return ~inside | ~field.traversable[ir, ic]


@dataclass(frozen=True)
class TraversabilityParams:
    """Scoring constants; defaults follow the evaluation protocol."""

    alpha: float = 3.0
    top_k: int = 20
    thresholds: tuple[float, ...] = (0.5, 1.0, 1.5)
    lambda_penalty: float = 2.0

    def __post_init__(self) -> None:
        if not self.alpha > 0.0:
            raise ValueError("alpha must be positive")
        if self.top_k < 1:
            raise ValueError("top_k must be >= 1")
        thresholds = tuple(float(d) for d in self.thresholds)
        if not thresholds or any(d <= 0.0 for d in thresholds):
            raise ValueError("thresholds must be a non-empty set of positive distances")
        if self.lambda_penalty < 0.0:
            raise ValueError("lambda_penalty must be >= 0")
        object.__setattr__(self, "thresholds", thresholds)


def risk(clearances: np.ndarray, params: TraversabilityParams) -> float:
    """Mean exponential proximity over the smallest clearances.

    Selects the min(top_k, N) smallest values C and returns
    mean(exp(-alpha * c) for c in C). Unbounded clearances contribute 0.
    """
    c = np.asarray(clearances, dtype=np.float64).ravel()
    if c.size == 0:
        raise ValueError("clearance vector is empty")
    if np.isnan(c).any() or (c < 0.0).any():
        raise ValueError("clearances must be non-negative")
    k = min(params.top_k, c.size)
    selected = np.partition(c, k - 1)[:k]
    # Sorted before summing so the result is independent of input ordering.
    selected = np.sort(selected)
    return float(np.mean(np.exp(-params.alpha * selected)))


def base_score(risk_value: float) -> float:
    """Base compliance: 1 - risk, clipped to [0, 1]."""
    if not (np.isfinite(risk_value) and risk_value >= 0.0):
        raise ValueError(f"risk must be finite and >= 0, got {risk_value}")
    return float(np.clip(1.0 - risk_value, 0.0, 1.0))


def violation_ratio(traj: Trajectory, field: ClearanceField, threshold: float) -> float:
    """Fraction of trajectory XY length on segments violating ``threshold``.

    A segment is bad when either endpoint has clearance below the threshold or
    sits on a non-traversable region.
    """
    if traj.n < 2:
        raise InvalidTrajectoryError("violation ratio needs at least two waypoints")
    seg = np.linalg.norm(np.diff(traj.xy, axis=0), axis=1)
    total = float(seg.sum())
    if total <= 0.0:
        raise DegenerateTrajectoryError("trajectory has zero XY length")
    clear = waypoint_clearances(traj, field)
    bad_point = (clear < threshold) | on_non_traversable(traj, field)
    bad_seg = bad_point[:-1] | bad_point[1:]
    return float(seg[bad_seg].sum() / total)


@dataclass(frozen=True)
class TraversabilityBreakdown:
    """Full decomposition of one compliance score."""

    score: float
    degenerate: bool = False
    risk: float | None = None
    base: float | None = None
    penalty: float | None = None
    violation_ratios: tuple[tuple[float, float], ...] = ()


def score_from_clearances(
    clearances: np.ndarray,
    on_obstacle: np.ndarray,
    segment_lengths: np.ndarray,
    params: TraversabilityParams,
) -> TraversabilityBreakdown:
    """Compose the compliance score from precomputed per-waypoint data.

    ``clearances`` and ``on_obstacle`` have one entry per waypoint;
    ``segment_lengths`` has one entry per consecutive pair. The score is
    monotone non-increasing in every individual clearance.
    """
    clearances = np.asarray(clearances, dtype=np.float64)
    on_obstacle = np.asarray(on_obstacle, dtype=bool)
    segment_lengths = np.asarray(segment_lengths, dtype=np.float64)
    total = float(segment_lengths.sum())
    if clearances.size < 2 or total <= 0.0:
        return TraversabilityBreakdown(score=0.0, degenerate=True)

    risk_value = risk(clearances, params)
    base = base_score(risk_value)

    ratios = []
    for d in params.thresholds:
        bad_point = (clearances < d) | on_obstacle
        bad_seg = bad_point[:-1] | bad_point[1:]
        ratios.append((d, float(segment_lengths[bad_seg].sum() / total)))
    mean_ratio = float(np.mean([r for _, r in ratios]))
    penalty = max(0.0, 1.0 - params.lambda_penalty * mean_ratio)

    return TraversabilityBreakdown(
        score=base * penalty,
        risk=risk_value,
        base=base,
        penalty=penalty,
        violation_ratios=tuple(ratios),
    )


def traversability_score_from_field(
    traj: Trajectory, field: ClearanceField, params: TraversabilityParams | None = None
) -> TraversabilityBreakdown:
    """Score against a precomputed clearance field (shared across a scene)."""
    params = params or TraversabilityParams()
    if traj.n < 2 or not traj.is_finite:
        return TraversabilityBreakdown(score=0.0, degenerate=True)
    seg = np.linalg.norm(np.diff(traj.xy, axis=0), axis=1)
    if float(seg.sum()) <= 0.0:
        return TraversabilityBreakdown(score=0.0, degenerate=True)
    clear = waypoint_clearances(traj, field)
    on_obs = on_non_traversable(traj, field)
    return score_from_clearances(clear, on_obs, seg, params)


def traversability_score(
    traj: Trajectory, grid: TraversabilityGrid, params: TraversabilityParams | None = None
) -> TraversabilityBreakdown:
    """Traversability compliance of a trajectory on an occupancy grid.

    Degenerate trajectories (fewer than two waypoints or zero XY extent) score
    0 with the ``degenerate`` flag set rather than raising.
    """
    return traversability_score_from_field(traj, clearance_field(grid), params)
