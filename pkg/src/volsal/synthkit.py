"""Deterministic synthetic volumes with geometric ground-truth masks.

Volumes are built from plane waves whose phases come from a fully
specified splitmix64 stream, so the same spec and seed reproduce the
volume bit for bit. Ground truth is geometric (distance to the plane,
sphere surface, or voxel), never derived from the saliency pipeline.
"""

from dataclasses import dataclass

import numpy as np

from .errors import BadSpec

KINDS = ("fault-plane", "blob", "textured-facies", "constant", "impulse")

# splitmix64 constants (Steele, Lea & Flood's published mixer).
_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)


def splitmix64(seed: int, count: int) -> np.ndarray:
    """First `count` outputs of the splitmix64 stream for a 64-bit seed."""
    state = np.uint64(seed & 0xFFFFFFFFFFFFFFFF) + np.arange(1, count + 1, dtype=np.uint64) * _GAMMA
    z = state
    z = (z ^ (z >> np.uint64(30))) * _MIX1
    z = (z ^ (z >> np.uint64(27))) * _MIX2
    return z ^ (z >> np.uint64(31))


def unit_floats(seed: int, count: int) -> np.ndarray:
    """Deterministic floats in [0, 1): top 53 bits of each splitmix64 output."""
    return (splitmix64(seed, count) >> np.uint64(11)).astype(np.float64) * 2.0 ** -53


@dataclass(frozen=True)
class SyntheticSpec:
    """Recipe for one synthetic volume.

    Unset kind parameters take geometry-derived defaults: plane offset at
    the normal axis midpoint, blob/impulse at the volume center, blob
    radius a quarter of the smallest extent.
    """

    kind: str
    dims: tuple[int, int, int]
    seed: int = 0
    amplitude: float = 1.0
    # plane kinds
    normal: tuple[int, int, int] = (1, 0, 0)
    offset: float | None = None
    frequency: tuple[float, float, float] = (0.2, 0.2, 0.2)
    phase_jump: float = float(np.pi)
    # textured-facies / blob second region
    frequency_b: tuple[float, float, float] = (0.32, 0.11, 0.27)
    amplitude_b: float = 0.8
    # blob
    center: tuple[int, int, int] | None = None
    radius: float | None = None
    # constant / impulse
    value: float = 1.0
    position: tuple[int, int, int] | None = None


def _check_dims(dims) -> tuple[int, int, int]:
    dims = tuple(int(d) for d in dims)
    if len(dims) != 3 or min(dims) < 1:
        raise BadSpec(f"dims must be three positive integers, got {dims}")
    return dims


def _voxel_coords(dims):
    t = np.arange(dims[0], dtype=np.float64).reshape(-1, 1, 1)
    x = np.arange(dims[1], dtype=np.float64).reshape(1, -1, 1)
    y = np.arange(dims[2], dtype=np.float64).reshape(1, 1, -1)
    return t, x, y


def _wave(coords, frequency, phase):
    t, x, y = coords
    return np.sin(
        2.0 * np.pi * (frequency[0] * t + frequency[1] * x + frequency[2] * y) + phase
    )


def _plane_distance(coords, normal, offset):
    t, x, y = coords
    norm = float(np.sqrt(sum(c * c for c in normal)))
    return np.abs(normal[0] * t + normal[1] * x + normal[2] * y - offset) / norm


def generate(spec: SyntheticSpec) -> tuple[np.ndarray, np.ndarray]:
    """Build (volume, ground_truth_mask) for a SyntheticSpec.

    The volume is float32 with |v| <= amplitude; the boolean mask marks
    voxels within one voxel of the salient structure (empty for constant,
    a single voxel for impulse).
    """
    dims = _check_dims(spec.dims)

    if spec.kind == "constant":
        volume = np.full(dims, np.float32(spec.value), dtype=np.float32)
        return volume, np.zeros(dims, dtype=bool)

    if spec.kind == "impulse":
        pos = spec.position if spec.position is not None else tuple(d // 2 for d in dims)
        pos = tuple(int(p) for p in pos)
        if any(not 0 <= p < d for p, d in zip(pos, dims)):
            raise BadSpec(f"impulse position {pos} outside dims {dims}")
        volume = np.zeros(dims, dtype=np.float32)
        volume[pos] = np.float32(spec.value)
        mask = np.zeros(dims, dtype=bool)
        mask[pos] = True
        return volume, mask

    coords = _voxel_coords(dims)

    if spec.kind in ("fault-plane", "textured-facies"):
        normal = tuple(int(c) for c in spec.normal)
        if not any(normal):
            raise BadSpec("plane normal must be nonzero")
        if spec.offset is None:
            mid = tuple(d / 2 for d in dims)
            offset = float(sum(n * m for n, m in zip(normal, mid)))
        else:
            offset = float(spec.offset)
        t, x, y = coords
        side = (normal[0] * t + normal[1] * x + normal[2] * y) >= offset
        phases = 2.0 * np.pi * unit_floats(spec.seed, 2)
        if spec.kind == "fault-plane":
            # Same wave on both sides, phase-jumped across the plane: pure
            # windows see identical spectra, straddling windows light up.
            region_a = spec.amplitude * _wave(coords, spec.frequency, phases[0])
            region_b = spec.amplitude * _wave(
                coords, spec.frequency, phases[0] + spec.phase_jump
            )
        else:
            region_a = spec.amplitude * _wave(coords, spec.frequency, phases[0])
            region_b = spec.amplitude_b * _wave(coords, spec.frequency_b, phases[1])
        volume = np.where(side, region_b, region_a).astype(np.float32)
        mask = _plane_distance(coords, normal, offset) <= 1.0
        return volume, mask

    if spec.kind == "blob":
        center = spec.center if spec.center is not None else tuple(d // 2 for d in dims)
        center = tuple(int(c) for c in center)
        radius = float(spec.radius) if spec.radius is not None else min(dims) / 4.0
        if radius < 1.0:
            raise BadSpec(f"blob radius must be >= 1, got {radius}")
        if any(c - radius < 0 or c + radius > d - 1 for c, d in zip(center, dims)):
            raise BadSpec(f"blob (center {center}, radius {radius}) not inside dims {dims}")
        t, x, y = coords
        dist = np.sqrt((t - center[0]) ** 2 + (x - center[1]) ** 2 + (y - center[2]) ** 2)
        phases = 2.0 * np.pi * unit_floats(spec.seed, 2)
        outside = spec.amplitude * _wave(coords, spec.frequency, phases[0])
        inside = spec.amplitude_b * _wave(coords, spec.frequency_b, phases[1])
        volume = np.where(dist <= radius, inside, outside).astype(np.float32)
        mask = np.abs(dist - radius) <= 1.0
        return volume, mask

    raise BadSpec(f"unknown synthetic kind {spec.kind!r} (expected one of {KINDS})")
