"""Windowed 3-D spectra, directional plane projections, and spectral energies.

A volume is scanned with overlapping L^3 cubes. Each cube gets a centered,
1/L^3-normalized DFT; the spectrum magnitude is split into three directional
components by rescaling every bin with the sine of its angle to one frequency
axis; averaging each component over the non-DC bins yields one energy triple
per window. The center (DC) bin carries no directional information and is
excluded throughout.
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .accel import njit, prange, resolve_backend, thread_count
from .errors import BadStride, CubeTooLarge, EvenCube, ShapeMismatch


@dataclass(frozen=True, eq=False)
class WindowGrid:
    """Sliding-window geometry: odd cube side, stride, and per-axis centers.

    Centers along each axis form an arithmetic progression with the given
    stride starting at (cube_side-1)/2; the final center is clamped to the
    last valid position so boundary samples are always covered.
    """

    cube_side: int
    stride: int
    centers_t: np.ndarray
    centers_x: np.ndarray
    centers_y: np.ndarray

    @property
    def half(self) -> int:
        return (self.cube_side - 1) // 2

    @property
    def coarse_dims(self) -> tuple[int, int, int]:
        return (len(self.centers_t), len(self.centers_x), len(self.centers_y))

    @property
    def num_windows(self) -> int:
        nt, nx, ny = self.coarse_dims
        return nt * nx * ny

    def axis_centers(self, axis: int) -> np.ndarray:
        return (self.centers_t, self.centers_x, self.centers_y)[axis]

    def center_coordinates(self) -> np.ndarray:
        """All window centers as an (N, 3) array in t-major order."""
        tt, xx, yy = np.meshgrid(self.centers_t, self.centers_x, self.centers_y, indexing="ij")
        return np.stack([tt.ravel(), xx.ravel(), yy.ravel()], axis=1)


def _axis_centers(extent: int, cube_side: int, stride: int) -> np.ndarray:
    half = (cube_side - 1) // 2
    last = extent - 1 - half
    centers = list(range(half, last + 1, stride))
    if centers[-1] != last:
        centers.append(last)
    return np.asarray(centers, dtype=np.int64)


def build_window_grid(dims, cube_side: int = 5, stride: int | None = None) -> WindowGrid:
    """Lay out overlapping cube windows over a (T, X, Y) volume.

    stride defaults to floor(cube_side/2), the largest step that keeps
    per-axis overlap above one half.
    """
    dims = tuple(int(d) for d in dims)
    cube_side = int(cube_side)
    if cube_side % 2 == 0 or cube_side < 3:
        raise EvenCube(f"cube side must be an odd integer >= 3, got {cube_side}")
    if cube_side > min(dims):
        raise CubeTooLarge(f"cube side {cube_side} exceeds volume dims {dims}")
    stride = cube_side // 2 if stride is None else int(stride)
    if not 1 <= stride <= cube_side // 2:
        raise BadStride(
            f"stride must be in [1, {cube_side // 2}] to keep >50% overlap, got {stride}"
        )
    return WindowGrid(
        cube_side=cube_side,
        stride=stride,
        centers_t=_axis_centers(dims[0], cube_side, stride),
        centers_x=_axis_centers(dims[1], cube_side, stride),
        centers_y=_axis_centers(dims[2], cube_side, stride),
    )


class ProjectedSpectra(NamedTuple):
    """Directional magnitude components of one spectrum.

    Each grid is non-negative with the same centered layout as the spectrum;
    the center (DC) entry is always 0 and excluded from energy reductions.
    """

    t: np.ndarray
    x: np.ndarray
    y: np.ndarray


class EnergyGrids(NamedTuple):
    """Per-window spectral energies, one grid per direction, shape coarse_dims."""

    t: np.ndarray
    x: np.ndarray
    y: np.ndarray


def _check_cube(cube) -> np.ndarray:
    arr = np.asarray(cube, dtype=np.float64)
    if arr.ndim != 3 or len(set(arr.shape)) != 1:
        raise ShapeMismatch(f"expected an L^3 cube, got shape {arr.shape}")
    if arr.shape[0] % 2 == 0:
        raise EvenCube(f"cube side must be odd, got {arr.shape[0]}")
    return arr


def local_fft(cube) -> np.ndarray:
    """Centered, 1/L^3-normalized 3-D DFT of an L^3 sample cube.

    Output indices run over [-(L-1)/2, (L-1)/2] per axis with the DC bin at
    the geometric center; for real input the DC value equals the cube mean.
    A constant cube maps to an exactly-zero spectrum outside the DC bin
    (the transform residue there is pure rounding noise).
    """
    arr = _check_cube(cube)
    n = arr.size
    lo = arr.min()
    if lo == arr.max():
        out = np.zeros(arr.shape, dtype=np.complex128)
        half = (arr.shape[0] - 1) // 2
        out[half, half, half] = lo
        return out
    return np.fft.fftshift(np.fft.fftn(arr)) / n


def oracle_dft(cube) -> np.ndarray:
    """Brute-force triple-sum DFT, centered and 1/L^3-normalized.

    O(L^6) evaluation of the transform definition, kept free of any shared
    transform code so it can serve as an independent test oracle for
    local_fft. The signed center frequencies go straight into the exponent
    (the kernel is L-periodic, so i and i mod L are equivalent).
    """
    arr = _check_cube(cube)
    side = arr.shape[0]
    half = (side - 1) // 2
    p = np.arange(side).reshape(side, 1, 1)
    q = np.arange(side).reshape(1, side, 1)
    r = np.arange(side).reshape(1, 1, side)
    out = np.empty((side, side, side), dtype=np.complex128)
    for i in range(-half, half + 1):
        for j in range(-half, half + 1):
            for k in range(-half, half + 1):
                phase = np.exp(-2j * np.pi * (p * i + q * j + r * k) / side)
                out[i + half, j + half, k + half] = (arr * phase).sum() / arr.size
    return out


@lru_cache(maxsize=8)
def projection_factors(cube_side: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Centered per-bin projection factors for the t, x, y directions.

    At centered bin (i, j, k) the factors are sqrt(j^2+k^2)/sqrt(i^2+j^2+k^2),
    sqrt(i^2+k^2)/..., sqrt(i^2+j^2)/...; the center bin is set to 0. Their
    squares sum to 2 at every off-center bin.
    """
    half = (cube_side - 1) // 2
    coords = np.arange(-half, half + 1, dtype=np.float64)
    i, j, k = np.meshgrid(coords, coords, coords, indexing="ij")
    radius = np.sqrt(i * i + j * j + k * k)
    with np.errstate(invalid="ignore", divide="ignore"):
        ft = np.sqrt(j * j + k * k) / radius
        fx = np.sqrt(i * i + k * k) / radius
        fy = np.sqrt(i * i + j * j) / radius
    for f in (ft, fx, fy):
        f[half, half, half] = 0.0
        f.setflags(write=False)
    return ft, fx, fy


def project_spectrum(spectrum) -> ProjectedSpectra:
    """Split a centered spectrum's magnitude into three directional grids."""
    mag = np.abs(_check_cube_complex(spectrum))
    ft, fx, fy = projection_factors(mag.shape[0])
    return ProjectedSpectra(mag * ft, mag * fx, mag * fy)


def _check_cube_complex(spectrum) -> np.ndarray:
    arr = np.asarray(spectrum)
    if arr.ndim != 3 or len(set(arr.shape)) != 1 or arr.shape[0] % 2 == 0:
        raise ShapeMismatch(f"expected an odd L^3 spectrum, got shape {arr.shape}")
    return arr


def _masked_mean(grid: np.ndarray) -> float:
    # Mean over all bins except the geometric center, never reading it.
    flat = grid.reshape(-1)
    center = flat.size // 2
    return (flat[:center].sum() + flat[center + 1 :].sum()) / (flat.size - 1)


def energy_features(projected: ProjectedSpectra) -> tuple[float, float, float]:
    """Absolute mean of each directional grid over the L^3 - 1 non-center bins."""
    return (
        _masked_mean(np.asarray(projected.t)),
        _masked_mean(np.asarray(projected.x)),
        _masked_mean(np.asarray(projected.y)),
    )


# --- whole-volume energy pass -------------------------------------------------

def _dft_matrix(side: int) -> np.ndarray:
    idx = np.arange(side)
    return np.exp(-2j * np.pi * np.outer(idx, idx) / side)


@lru_cache(maxsize=8)
def _factors_fft_order(cube_side: int) -> np.ndarray:
    ft, fx, fy = projection_factors(cube_side)
    packed = np.stack([np.fft.ifftshift(ft), np.fft.ifftshift(fx), np.fft.ifftshift(fy)])
    packed.setflags(write=False)
    return packed


@njit(parallel=True, cache=True)
def _energy_kernel(vol, t0s, x0s, y0s, twiddle, factors, out):  # pragma: no cover - jit
    side = twiddle.shape[0]
    n3 = side * side * side
    n_t, n_x, n_y = t0s.size, x0s.size, y0s.size
    for widx in prange(n_t * n_x * n_y):
        a = widx // (n_x * n_y)
        rem = widx % (n_x * n_y)
        b = rem // n_y
        c = rem % n_y
        t0, x0, y0 = t0s[a], x0s[b], y0s[c]
        lo = vol[t0, x0, y0]
        hi = lo
        for p in range(side):
            for q in range(side):
                for r in range(side):
                    v = vol[t0 + p, x0 + q, y0 + r]
                    if v < lo:
                        lo = v
                    elif v > hi:
                        hi = v
        if lo == hi:
            # constant window: off-DC spectrum is exactly zero
            out[a, b, c, 0] = 0.0
            out[a, b, c, 1] = 0.0
            out[a, b, c, 2] = 0.0
            continue
        g1 = np.empty((side, side, side), dtype=np.complex128)
        for mu in range(side):
            for q in range(side):
                for r in range(side):
                    acc = 0.0 + 0.0j
                    for p in range(side):
                        acc += twiddle[mu, p] * vol[t0 + p, x0 + q, y0 + r]
                    g1[mu, q, r] = acc
        g2 = np.empty((side, side, side), dtype=np.complex128)
        for mu in range(side):
            for nu in range(side):
                for r in range(side):
                    acc = 0.0 + 0.0j
                    for q in range(side):
                        acc += twiddle[nu, q] * g1[mu, q, r]
                    g2[mu, nu, r] = acc
        et = 0.0
        ex = 0.0
        ey = 0.0
        for mu in range(side):
            for nu in range(side):
                for om in range(side):
                    acc = 0.0 + 0.0j
                    for r in range(side):
                        acc += twiddle[om, r] * g2[mu, nu, r]
                    mag = abs(acc) / n3
                    et += factors[0, mu, nu, om] * mag
                    ex += factors[1, mu, nu, om] * mag
                    ey += factors[2, mu, nu, om] * mag
        out[a, b, c, 0] = et / (n3 - 1)
        out[a, b, c, 1] = ex / (n3 - 1)
        out[a, b, c, 2] = ey / (n3 - 1)


def _energy_grids_numba(vol64, grid, threads):
    out = np.empty(grid.coarse_dims + (3,), dtype=np.float64)
    half = grid.half
    with thread_count(threads):
        _energy_kernel(
            vol64,
            grid.centers_t - half,
            grid.centers_x - half,
            grid.centers_y - half,
            _dft_matrix(grid.cube_side),
            np.ascontiguousarray(_factors_fft_order(grid.cube_side)),
            out,
        )
    return out


def _energy_grids_numpy(vol64, grid, chunk):
    side = grid.cube_side
    n3 = side ** 3
    half = grid.half
    view = sliding_window_view(vol64, (side, side, side))
    t0s = grid.centers_t - half
    x0s = grid.centers_x - half
    y0s = grid.centers_y - half
    nt, nx, ny = grid.coarse_dims
    total = nt * nx * ny
    factors = _factors_fft_order(side)
    out = np.empty((total, 3), dtype=np.float64)
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total))
        a, b, c = np.unravel_index(idx, (nt, nx, ny))
        windows = view[t0s[a], x0s[b], y0s[c]]
        mag = np.abs(np.fft.fftn(windows, axes=(1, 2, 3)) / n3)
        constant = windows.min(axis=(1, 2, 3)) == windows.max(axis=(1, 2, 3))
        for m in range(3):
            energies = (mag * factors[m]).sum(axis=(1, 2, 3)) / (n3 - 1)
            # constant windows: off-DC spectrum is exactly zero
            energies[constant] = 0.0
            out[idx, m] = energies
    return out.reshape((nt, nx, ny, 3))


def compute_energy_grids(
    volume,
    grid: WindowGrid,
    backend: str | None = None,
    threads: int | None = None,
    chunk: int = 8192,
) -> EnergyGrids:
    """Energy triples for every window of the grid.

    Equivalent to running local_fft -> project_spectrum -> energy_features
    per window; each window writes one disjoint output cell, so the result
    is independent of thread count and chunk size.
    """
    vol = np.asarray(volume)
    if vol.ndim != 3:
        raise ShapeMismatch(f"expected a 3-D volume, got shape {vol.shape}")
    for axis in range(3):
        centers = grid.axis_centers(axis)
        if centers[-1] + grid.half >= vol.shape[axis] or centers[0] - grid.half < 0:
            raise ShapeMismatch(
                f"window grid does not fit volume dims {vol.shape} along axis {axis}"
            )
    vol64 = np.ascontiguousarray(vol, dtype=np.float64)
    if resolve_backend(backend) == "numba":
        out = _energy_grids_numba(vol64, grid, threads)
    else:
        out = _energy_grids_numpy(vol64, grid, max(1, int(chunk)))
    return EnergyGrids(
        np.ascontiguousarray(out[..., 0]),
        np.ascontiguousarray(out[..., 1]),
        np.ascontiguousarray(out[..., 2]),
    )
