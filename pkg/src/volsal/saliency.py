"""Directional center-surround saliency on window-energy grids.

Each energy grid is compared against Gaussian-weighted neighbors inside a
d x 1 window along a chosen direction, the three directional maps are fused
by a weighted sum, and the fused coarse map is upsampled back to full volume
resolution and min-max normalized.
"""

import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import BadSigma, BadWindow, ConfigError, DegenerateAxisWarning, ShapeMismatch
from .spectral import EnergyGrids, WindowGrid, build_window_grid, compute_energy_grids

AXIS_NAMES = ("t", "x", "y")
AXIS_DIRECTIONS = {"t": (1, 0, 0), "x": (0, 1, 0), "y": (0, 0, 1)}

WEIGHT_MODES = ("as-written", "difference-weighted")


class FusionWeights(NamedTuple):
    """Non-negative blend weights for the three directional maps."""

    a: float = 1.0 / 3.0
    b: float = 1.0 / 3.0
    c: float = 1.0 / 3.0


@dataclass(frozen=True)
class DcsConfig:
    """Center-surround comparison parameters.

    window is the d x 1 neighborhood length (odd, >= 3, default the cube
    side); sigma defaults to window/3. In as-written mode each term is
    |E_center - w * E_neighbor|; difference-weighted mode uses
    w * |E_center - E_neighbor| instead. Directions are integer step
    vectors, by default axis-aligned per map.
    """

    window: int = 5
    sigma: float | None = None
    weight_mode: str = "as-written"
    direction_t: tuple[int, int, int] = (1, 0, 0)
    direction_x: tuple[int, int, int] = (0, 1, 0)
    direction_y: tuple[int, int, int] = (0, 0, 1)

    @property
    def effective_sigma(self) -> float:
        return self.window / 3.0 if self.sigma is None else float(self.sigma)

    def direction(self, name: str) -> tuple[int, int, int]:
        return getattr(self, f"direction_{name}")

    def validate(self) -> None:
        gaussian_weights(self.window, self.effective_sigma)
        if self.weight_mode not in WEIGHT_MODES:
            raise ConfigError(
                f"weight_mode must be one of {WEIGHT_MODES}, got {self.weight_mode!r}"
            )
        for name in AXIS_NAMES:
            _check_direction(self.direction(name))


def _check_direction(direction) -> tuple[int, int, int]:
    vec = tuple(int(c) for c in direction)
    if len(vec) != 3 or not any(vec):
        raise ConfigError(f"direction must be a nonzero integer 3-vector, got {direction!r}")
    if math.gcd(*(abs(c) for c in vec)) != 1:
        raise ConfigError(f"direction components must share no common factor: {direction!r}")
    return vec


def gaussian_weights(window: int, sigma: float) -> tuple[np.ndarray, np.ndarray]:
    """Unnormalized Gaussian weights for the off-center window offsets.

    Returns (offsets, weights): the d-1 nonzero integers in
    [-(d-1)/2, (d-1)/2] and exp(-offset^2 / (2 sigma^2)) for each.
    sigma = inf gives uniform weights of 1.
    """
    window = int(window)
    if window % 2 == 0 or window < 3:
        raise BadWindow(f"window length must be an odd integer >= 3, got {window}")
    sigma = float(sigma)
    if math.isnan(sigma) or sigma <= 0:
        raise BadSigma(f"sigma must be > 0, got {sigma}")
    half = (window - 1) // 2
    offsets = np.array([o for o in range(-half, half + 1) if o != 0], dtype=np.int64)
    weights = np.exp(-(offsets.astype(np.float64) ** 2) / (2.0 * sigma * sigma))
    return offsets, weights


def _shift_slices(shape, step):
    """Slices (center_region, neighbor_region) for a lattice shift, or None."""
    center = []
    neighbor = []
    for extent, delta in zip(shape, step):
        if abs(delta) >= extent:
            return None
        if delta >= 0:
            center.append(slice(0, extent - delta))
            neighbor.append(slice(delta, extent))
        else:
            center.append(slice(-delta, extent))
            neighbor.append(slice(0, extent + delta))
    return tuple(center), tuple(neighbor)


def dcs_saliency(
    energy,
    direction=(1, 0, 0),
    window: int = 5,
    sigma: float | None = None,
    weight_mode: str = "as-written",
) -> np.ndarray:
    """Directional center-surround map of one energy grid.

    At each cell the neighbors are the d-1 nonzero multiples of the
    direction vector within +/-(d-1)/2 steps, clipped at the grid boundary;
    the divisor is the in-bounds neighbor count. If the grid has no room
    for any neighbor along the direction, the map is all zeros and a
    DegenerateAxisWarning is issued.
    """
    grid = np.asarray(energy, dtype=np.float64)
    if grid.ndim != 3:
        raise ShapeMismatch(f"expected a 3-D energy grid, got shape {grid.shape}")
    vec = _check_direction(direction)
    if weight_mode not in WEIGHT_MODES:
        raise ConfigError(f"weight_mode must be one of {WEIGHT_MODES}, got {weight_mode!r}")
    sigma = window / 3.0 if sigma is None else sigma
    offsets, weights = gaussian_weights(window, sigma)

    if any(c != 0 and extent <= abs(c) for extent, c in zip(grid.shape, vec)):
        warnings.warn(
            f"grid extent {grid.shape} leaves no neighbors along direction {vec}; "
            "returning a zero map",
            DegenerateAxisWarning,
            stacklevel=2,
        )
        return np.zeros_like(grid)

    acc = np.zeros_like(grid)
    count = np.zeros_like(grid)
    for offset, weight in zip(offsets, weights):
        step = tuple(int(offset) * c for c in vec)
        regions = _shift_slices(grid.shape, step)
        if regions is None:
            continue
        center_region, neighbor_region = regions
        center = grid[center_region]
        neighbor = grid[neighbor_region]
        if weight_mode == "as-written":
            term = np.abs(center - weight * neighbor)
        else:
            term = weight * np.abs(center - neighbor)
        acc[center_region] += term
        count[center_region] += 1.0
    return np.divide(acc, count, out=np.zeros_like(acc), where=count > 0)


def fuse(map_t, map_x, map_y, weights=FusionWeights()) -> np.ndarray:
    """Pointwise weighted sum of the three directional maps."""
    a, b, c = (float(w) for w in weights)
    st, sx, sy = (np.asarray(m, dtype=np.float64) for m in (map_t, map_x, map_y))
    if not st.shape == sx.shape == sy.shape:
        raise ShapeMismatch(
            f"directional maps disagree in shape: {st.shape}, {sx.shape}, {sy.shape}"
        )
    return a * st + b * sx + c * sy


def validate_fusion_weights(weights) -> FusionWeights:
    fw = FusionWeights(*(float(w) for w in weights))
    if any(w < 0 or math.isnan(w) for w in fw):
        raise ConfigError(f"fusion weights must be non-negative, got {tuple(fw)}")
    if not fw.a + fw.b + fw.c > 0:
        raise ConfigError("fusion weights must not all be zero")
    return fw


def _nearest_center_index(extent: int, centers: np.ndarray) -> np.ndarray:
    # Ties between two equidistant centers resolve to the lower one.
    pos = np.arange(extent)
    right = np.clip(np.searchsorted(centers, pos), 0, len(centers) - 1)
    left = np.clip(right - 1, 0, len(centers) - 1)
    take_left = np.abs(centers[left] - pos) <= np.abs(centers[right] - pos)
    return np.where(take_left, left, right)


def _axis_interp(extent: int, centers: np.ndarray):
    # Bracketing center index and fractional weight per voxel, clamped flat
    # outside the center span.
    pos = np.arange(extent, dtype=np.float64)
    if len(centers) == 1:
        return np.zeros(extent, dtype=np.int64), np.zeros(extent)
    lo = np.clip(np.searchsorted(centers, pos, side="right") - 1, 0, len(centers) - 2)
    c0 = centers[lo].astype(np.float64)
    c1 = centers[lo + 1].astype(np.float64)
    frac = np.clip((pos - c0) / (c1 - c0), 0.0, 1.0)
    return lo, frac


def upsample_and_normalize(coarse, grid: WindowGrid, dims, mode: str = "nearest") -> np.ndarray:
    """Expand a coarse map to full volume resolution and min-max normalize.

    nearest assigns each voxel its nearest window center's value; trilinear
    interpolates over the window-center lattice. A constant map normalizes
    to all zeros.
    """
    arr = np.asarray(coarse, dtype=np.float64)
    if arr.shape != grid.coarse_dims:
        raise ShapeMismatch(f"coarse shape {arr.shape} != grid coarse dims {grid.coarse_dims}")
    dims = tuple(int(d) for d in dims)
    if mode == "nearest":
        it = _nearest_center_index(dims[0], grid.centers_t)
        ix = _nearest_center_index(dims[1], grid.centers_x)
        iy = _nearest_center_index(dims[2], grid.centers_y)
        full = arr[np.ix_(it, ix, iy)]
    elif mode == "trilinear":
        lt, ft = _axis_interp(dims[0], grid.centers_t)
        lx, fx = _axis_interp(dims[1], grid.centers_x)
        ly, fy = _axis_interp(dims[2], grid.centers_y)
        nt, nx, ny = grid.coarse_dims
        ht = np.minimum(lt + 1, nt - 1)
        hx = np.minimum(lx + 1, nx - 1)
        hy = np.minimum(ly + 1, ny - 1)
        wt = ft[:, None, None]
        wx = fx[None, :, None]
        wy = fy[None, None, :]
        full = (
            arr[np.ix_(lt, lx, ly)] * (1 - wt) * (1 - wx) * (1 - wy)
            + arr[np.ix_(ht, lx, ly)] * wt * (1 - wx) * (1 - wy)
            + arr[np.ix_(lt, hx, ly)] * (1 - wt) * wx * (1 - wy)
            + arr[np.ix_(lt, lx, hy)] * (1 - wt) * (1 - wx) * wy
            + arr[np.ix_(ht, hx, ly)] * wt * wx * (1 - wy)
            + arr[np.ix_(ht, lx, hy)] * wt * (1 - wx) * wy
            + arr[np.ix_(lt, hx, hy)] * (1 - wt) * wx * wy
            + arr[np.ix_(ht, hx, hy)] * wt * wx * wy
        )
    else:
        raise ConfigError(f"unknown upsample mode {mode!r} (expected nearest or trilinear)")
    lo, hi = full.min(), full.max()
    if hi > lo:
        return (full - lo) / (hi - lo)
    return np.zeros(dims, dtype=np.float64)


@dataclass
class SaliencyResult:
    """All pipeline stages for one volume: grid, energies, coarse and full maps."""

    grid: WindowGrid
    energies: EnergyGrids
    coarse_t: np.ndarray
    coarse_x: np.ndarray
    coarse_y: np.ndarray
    fused: np.ndarray
    full: np.ndarray


def compute_saliency(
    volume,
    cube_side: int = 5,
    stride: int | None = None,
    dcs: DcsConfig | None = None,
    weights=FusionWeights(),
    upsample: str = "nearest",
    backend: str | None = None,
    threads: int | None = None,
) -> SaliencyResult:
    """Full pipeline: window energies -> directional DCS -> fusion -> upsample.

    Deterministic for fixed parameters and backend, independent of thread
    count. The dcs window defaults to the cube side.
    """
    vol = np.asarray(volume)
    grid = build_window_grid(vol.shape, cube_side=cube_side, stride=stride)
    config = dcs if dcs is not None else DcsConfig(window=cube_side)
    config.validate()
    fusion = validate_fusion_weights(weights)
    energies = compute_energy_grids(vol, grid, backend=backend, threads=threads)
    coarse = {}
    for name, energy in zip(AXIS_NAMES, energies):
        coarse[name] = dcs_saliency(
            energy,
            direction=config.direction(name),
            window=config.window,
            sigma=config.effective_sigma,
            weight_mode=config.weight_mode,
        )
    fused = fuse(coarse["t"], coarse["x"], coarse["y"], fusion)
    full = upsample_and_normalize(fused, grid, vol.shape, mode=upsample)
    return SaliencyResult(
        grid=grid,
        energies=energies,
        coarse_t=coarse["t"],
        coarse_x=coarse["x"],
        coarse_y=coarse["y"],
        fused=fused,
        full=full,
    )
