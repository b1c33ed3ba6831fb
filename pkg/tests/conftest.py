import numpy as np
import pytest

from volsal import (
    EnergyGrids,
    energy_features,
    local_fft,
    project_spectrum,
)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20260810)


def energy_grids_serial_reference(volume, grid) -> EnergyGrids:
    """One-window-at-a-time composition of the public per-window ops.

    Independent of the batched/parallel production paths; used as the
    reference for compute_energy_grids.
    """
    vol = np.asarray(volume, dtype=np.float64)
    half = grid.half
    side = grid.cube_side
    nt, nx, ny = grid.coarse_dims
    et = np.empty((nt, nx, ny))
    ex = np.empty((nt, nx, ny))
    ey = np.empty((nt, nx, ny))
    for a, tc in enumerate(grid.centers_t):
        for b, xc in enumerate(grid.centers_x):
            for c, yc in enumerate(grid.centers_y):
                window = vol[
                    tc - half : tc - half + side,
                    xc - half : xc - half + side,
                    yc - half : yc - half + side,
                ]
                et[a, b, c], ex[a, b, c], ey[a, b, c] = energy_features(
                    project_spectrum(local_fft(window))
                )
    return EnergyGrids(et, ex, ey)
