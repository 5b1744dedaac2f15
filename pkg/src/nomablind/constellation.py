"""Square-QAM constellations, power weighting, superposition sets, and
axis-aligned decision regions."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

SUPPORTED_ORDERS = (4, 16, 64)

# Snapping tolerance for grid coordinates, and the gap below which two
# composite points count as coincident.
GRID_SNAP = 1e-9
MIN_POINT_DISTANCE = 1e-9


class DegenerateConstellationError(ValueError):
    """The power split makes two composite points collide."""


class NonRectangularRegionsError(ValueError):
    """The point set does not factor into a rectangular grid, so
    axis-aligned decision regions do not exist."""


@dataclass(frozen=True, eq=False)
class Constellation:
    """A finite symbol set with its modulation order and power weight."""

    points: np.ndarray
    order: int
    power_weight: float

    def __len__(self) -> int:
        return len(self.points)


@dataclass(frozen=True, eq=False)
class DecisionRegion:
    """Axis-aligned rectangle [re_lo, re_hi) x [im_lo, im_hi).

    Half-open on the upper edges so that the regions of a grid tile the
    plane: every finite point belongs to exactly one region.
    """

    re_lo: float
    re_hi: float
    im_lo: float
    im_hi: float

    def contains(self, point: complex) -> bool:
        return (self.re_lo <= point.real < self.re_hi
                and self.im_lo <= point.imag < self.im_hi)


@dataclass(frozen=True, eq=False)
class CompositeConstellation:
    """All pairwise sums of two constellations, with one decision
    rectangle per point.

    Point m corresponds to the parent pair (i, l) through the canonical
    index m = i * len(parent_n) + l.  ``region_bounds`` holds the four
    boundary arrays (re_lo, re_hi, im_lo, im_hi), each aligned with
    ``points``.
    """

    points: np.ndarray
    parent_k: Constellation
    parent_n: Constellation
    region_bounds: tuple

    def __len__(self) -> int:
        return len(self.points)

    @cached_property
    def regions(self) -> tuple:
        re_lo, re_hi, im_lo, im_hi = self.region_bounds
        return tuple(
            DecisionRegion(float(a), float(b), float(c), float(d))
            for a, b, c, d in zip(re_lo, re_hi, im_lo, im_hi)
        )


def make_qam(order: int, power_weight: float) -> Constellation:
    """Square QAM grid normalized so the mean of |s|^2 equals power_weight.

    No bit labeling is attached; classification and the error analysis
    operate on symbols only.
    """
    if order not in SUPPORTED_ORDERS:
        raise ValueError(
            f"unsupported QAM order {order}; expected one of {SUPPORTED_ORDERS}")
    if not 0.0 < power_weight <= 1.0:
        raise ValueError(f"power_weight must be in (0, 1], got {power_weight}")
    side = int(round(np.sqrt(order)))
    levels = np.arange(-(side - 1), side, 2, dtype=float)
    pts = (levels[None, :] + 1j * levels[:, None]).ravel()
    pts = pts / np.sqrt(np.mean(np.abs(pts) ** 2)) * np.sqrt(power_weight)
    pts.setflags(write=False)
    return Constellation(points=pts, order=order, power_weight=float(power_weight))


def _unique_levels(values: np.ndarray, tol: float = GRID_SNAP) -> np.ndarray:
    """Sorted coordinate levels with entries closer than tol merged."""
    values = np.sort(np.asarray(values, dtype=float))
    levels = [values[0]]
    for v in values[1:]:
        if v - levels[-1] > tol:
            levels.append(v)
    return np.asarray(levels)


def _level_indices(levels: np.ndarray, values: np.ndarray) -> np.ndarray:
    """Index of the nearest level for each value."""
    if len(levels) == 1:
        return np.zeros(np.shape(values), dtype=int)
    idx = np.searchsorted(levels, values)
    idx = np.clip(idx, 1, len(levels) - 1)
    left = np.abs(values - levels[idx - 1])
    right = np.abs(values - levels[idx])
    return np.where(left <= right, idx - 1, idx)


def _region_bound_arrays(points: np.ndarray) -> tuple:
    """Per-point rectangle boundaries for a grid point set.

    Boundaries sit at midpoints between adjacent coordinate levels, with
    +-inf on the outside.  Raises NonRectangularRegionsError when the set
    is not a full Cartesian grid with exactly one point per cell.
    """
    points = np.asarray(points, dtype=complex)
    if len(points) == 0:
        raise NonRectangularRegionsError("empty point set")
    re_levels = _unique_levels(points.real)
    im_levels = _unique_levels(points.imag)
    ri = _level_indices(re_levels, points.real)
    ii = _level_indices(im_levels, points.imag)
    cells = set(zip(ri.tolist(), ii.tolist()))
    if len(cells) != len(points):
        raise NonRectangularRegionsError("coincident points share a grid cell")
    if len(re_levels) * len(im_levels) != len(points):
        raise NonRectangularRegionsError(
            "points do not cover a full real x imaginary grid")

    def bounds(levels):
        mids = 0.5 * (levels[1:] + levels[:-1])
        lo = np.concatenate(([-np.inf], mids))
        hi = np.concatenate((mids, [np.inf]))
        return lo, hi

    re_lo, re_hi = bounds(re_levels)
    im_lo, im_hi = bounds(im_levels)
    return re_lo[ri], re_hi[ri], im_lo[ii], im_hi[ii]


def decision_regions(points) -> list:
    """Decision rectangles for a grid point set, one per point."""
    re_lo, re_hi, im_lo, im_hi = _region_bound_arrays(np.asarray(points, dtype=complex))
    return [DecisionRegion(float(a), float(b), float(c), float(d))
            for a, b, c, d in zip(re_lo, re_hi, im_lo, im_hi)]


def _sum_grid_degenerate(ck: Constellation, cn: Constellation) -> bool:
    # The composite of two grids is itself a grid whose real (imaginary)
    # levels are the pairwise sums of the parents' levels, so two composite
    # points sit within ~MIN_POINT_DISTANCE of each other exactly when two
    # of those level sums do.
    for part in (np.real, np.imag):
        a = _unique_levels(part(ck.points))
        b = _unique_levels(part(cn.points))
        sums = np.sort((a[:, None] + b[None, :]).ravel())
        if np.any(np.diff(sums) <= MIN_POINT_DISTANCE):
            return True
    return False


def superpose(ck: Constellation, cn: Constellation) -> CompositeConstellation:
    """Composite set of every s_k(i) + s_n(l), index m = i * len(cn) + l."""
    if abs(ck.power_weight + cn.power_weight - 1.0) > 1e-9:
        raise ValueError(
            "power weights must sum to 1, got "
            f"{ck.power_weight} + {cn.power_weight}")
    if _sum_grid_degenerate(ck, cn):
        raise DegenerateConstellationError(
            f"power split gamma_n={cn.power_weight:g} collapses composite points")
    pts = (ck.points[:, None] + cn.points[None, :]).ravel()
    bounds = _region_bound_arrays(pts)
    pts.setflags(write=False)
    for arr in bounds:
        arr.setflags(write=False)
    return CompositeConstellation(points=pts, parent_k=ck, parent_n=cn,
                                  region_bounds=bounds)


def first_quadrant_indices(c: Constellation) -> np.ndarray:
    """Indices of the points with positive real and imaginary parts.

    For a quadrant-symmetric constellation this is a quarter of the set;
    a point sitting on an axis breaks the symmetry and is rejected.
    """
    pts = c.points
    on_axis = (np.abs(pts.real) <= GRID_SNAP) | (np.abs(pts.imag) <= GRID_SNAP)
    if np.any(on_axis):
        raise ValueError("constellation has a point on an axis; "
                         "quadrant reduction undefined")
    return np.flatnonzero((pts.real > 0) & (pts.imag > 0))
