"""Elevation consistency between a predicted and a ground-truth trajectory.

Both height profiles are sampled on a shared uniform arc-length grid over the
overlapped traveled distance, optionally mean-centered, and compared through
height MSE/RMSE plus a slope-MSE term. Lower is better; zero means the centered
profiles and their slopes agree everywhere.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DegenerateTrajectoryError, InvalidTrajectoryError
from .geometry import Trajectory, arc_length


@dataclass(frozen=True)
class ElevationParams:
    """Weights and sampling controls; weight defaults follow the protocol."""

    w1: float = 5.0
    w2: float = 1.0
    w3: float = 10.0
    mean_center: bool = True
    samples: int = 100

    def __post_init__(self) -> None:
        if min(self.w1, self.w2, self.w3) < 0.0:
            raise ValueError("weights must be >= 0")
        if self.samples < 2:
            raise ValueError("samples must be >= 2")


@dataclass(frozen=True)
class ElevationBreakdown:
    mse_z: float
    rmse_z: float
    mse_dz: float
    s_z: float
    overlap_length: float


@dataclass(frozen=True, eq=False)
class ElevationProfile:
    """Uniform arc-length height samples; ``z_rel`` is z minus the first sample."""

    s: np.ndarray
    z: np.ndarray

    @property
    def z_rel(self) -> np.ndarray:
        return self.z - self.z[0]


def _check_usable(traj: Trajectory, label: str) -> np.ndarray:
    """Validate and return the arc-length vector of a profile-able trajectory."""
    if traj.n < 2:
        raise InvalidTrajectoryError(f"{label} trajectory needs at least two waypoints")
    if not traj.is_finite:
        raise InvalidTrajectoryError(f"{label} trajectory has non-finite coordinates")
    s = arc_length(traj)
    if s[-1] <= 0.0:
        raise DegenerateTrajectoryError(f"{label} trajectory has zero XY length")
    return s


def _z_on_grid(traj: Trajectory, s_nodes: np.ndarray, grid: np.ndarray) -> np.ndarray:
    return np.interp(grid, s_nodes, traj.z)


def elevation_profile(traj: Trajectory, samples: int) -> ElevationProfile:
    """Sample z at ``samples`` uniform arc-length positions over the full path."""
    if samples < 2:
        raise ValueError("samples must be >= 2")
    s_nodes = _check_usable(traj, "input")
    grid = np.linspace(0.0, s_nodes[-1], samples)
    return ElevationProfile(s=grid, z=_z_on_grid(traj, s_nodes, grid))


def elevation_consistency(
    pred: Trajectory, gt: Trajectory, params: ElevationParams | None = None
) -> ElevationBreakdown:
    """Weighted elevation error between two trajectories.

    The overlap is the shorter of the two XY arc lengths; both z profiles are
    resampled to ``params.samples`` points on [0, overlap], independently
    mean-centered when ``params.mean_center`` is set, and slopes are taken by
    central finite differences (one-sided at the endpoints) on that grid.

    Raises ``DegenerateTrajectoryError`` when either trajectory has no XY
    extent; callers should report the metric as missing rather than 0.
    """
    params = params or ElevationParams()
    s_pred = _check_usable(pred, "predicted")
    s_gt = _check_usable(gt, "ground-truth")

    overlap = float(min(s_pred[-1], s_gt[-1]))
    grid = np.linspace(0.0, overlap, params.samples)
    zp = _z_on_grid(pred, s_pred, grid)
    zg = _z_on_grid(gt, s_gt, grid)
    if params.mean_center:
        zp = zp - zp.mean()
        zg = zg - zg.mean()

    spacing = overlap / (params.samples - 1)
    slope_p = np.gradient(zp, spacing)
    slope_g = np.gradient(zg, spacing)

    mse_z = float(np.mean((zp - zg) ** 2))
    rmse_z = float(np.sqrt(mse_z))
    mse_dz = float(np.mean((slope_p - slope_g) ** 2))
    s_z = params.w1 * mse_z + params.w2 * rmse_z + params.w3 * mse_dz
    return ElevationBreakdown(
        mse_z=mse_z, rmse_z=rmse_z, mse_dz=mse_dz, s_z=float(s_z), overlap_length=overlap
    )


PROFILE_CSV_COLUMNS = ("s", "z_pred", "z_gt", "z_pred-z0", "z_gt-z0")


def write_profile_csv(
    path: str | Path, pred: Trajectory, gt: Trajectory, samples: int = 100
) -> None:
    """Emit aligned elevation series for external plotting.

    Both trajectories are sampled on the shared overlap grid; the last two
    columns are heights relative to each series' first sample.
    """
    s_pred = _check_usable(pred, "predicted")
    s_gt = _check_usable(gt, "ground-truth")
    overlap = float(min(s_pred[-1], s_gt[-1]))
    grid = np.linspace(0.0, overlap, samples)
    zp = _z_on_grid(pred, s_pred, grid)
    zg = _z_on_grid(gt, s_gt, grid)
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(PROFILE_CSV_COLUMNS)
        for row in zip(grid, zp, zg, zp - zp[0], zg - zg[0]):
            writer.writerow([repr(float(v)) for v in row])
