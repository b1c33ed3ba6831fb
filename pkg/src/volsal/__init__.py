"""Voxel-level spectral saliency for 3-D scalar volumes.

Pipeline: overlapping local 3-D spectra -> directional plane projections ->
per-window spectral energies -> Gaussian-weighted directional center-surround
comparison -> weighted fusion -> full-resolution normalized saliency map.
"""

__version__ = "0.1.0"

from .errors import (
    BadMagic,
    BadSigma,
    BadSpec,
    BadStride,
    BadWindow,
    ConfigError,
    CubeTooLarge,
    DataError,
    DegenerateAxis,
    DegenerateAxisWarning,
    DimMismatch,
    EvenCube,
    IndexOutOfRange,
    IoFailure,
    NonFiniteSample,
    ShapeMismatch,
    VolsalError,
)
from .saliency import (
    DcsConfig,
    FusionWeights,
    SaliencyResult,
    compute_saliency,
    dcs_saliency,
    fuse,
    gaussian_weights,
    upsample_and_normalize,
)
from .spectral import (
    EnergyGrids,
    ProjectedSpectra,
    WindowGrid,
    build_window_grid,
    compute_energy_grids,
    energy_features,
    local_fft,
    oracle_dft,
    project_spectrum,
    projection_factors,
)
from .synthkit import SyntheticSpec, generate, splitmix64, unit_floats
from .volume_io import load_volume, render_slice, store_volume, volume_from_bytes, write_png

__all__ = [
    "__version__",
    "BadMagic",
    "BadSigma",
    "BadSpec",
    "BadStride",
    "BadWindow",
    "ConfigError",
    "CubeTooLarge",
    "DataError",
    "DcsConfig",
    "DegenerateAxis",
    "DegenerateAxisWarning",
    "DimMismatch",
    "EnergyGrids",
    "EvenCube",
    "FusionWeights",
    "IndexOutOfRange",
    "IoFailure",
    "NonFiniteSample",
    "ProjectedSpectra",
    "SaliencyResult",
    "ShapeMismatch",
    "SyntheticSpec",
    "VolsalError",
    "WindowGrid",
    "build_window_grid",
    "compute_energy_grids",
    "compute_saliency",
    "dcs_saliency",
    "energy_features",
    "fuse",
    "gaussian_weights",
    "generate",
    "load_volume",
    "local_fft",
    "oracle_dft",
    "project_spectrum",
    "projection_factors",
    "render_slice",
    "splitmix64",
    "store_volume",
    "unit_floats",
    "upsample_and_normalize",
    "volume_from_bytes",
    "write_png",
]
