"""Bit-exact binary volume container plus 2-D slice rendering.

VOLSAL01 layout (24-byte header, then the payload):

    bytes  0..7   magic b"VOLSAL01"
    bytes  8..19  T, X, Y as uint32 little-endian
    byte   20     dtype code (0x01 = float32 little-endian)
    bytes 21..23  reserved, zero

The payload holds T*X*Y float32 samples in t-fastest order,
flat index = t + T*x + T*X*y. In-memory volumes are float32 arrays of
shape (T, X, Y) with Fortran layout, so runs along t stay contiguous.
"""

import struct
import sys
from pathlib import Path

import numpy as np

from .errors import (
    BadMagic,
    ConfigError,
    DimMismatch,
    IndexOutOfRange,
    IoFailure,
    NonFiniteSample,
    ShapeMismatch,
)

MAGIC = b"VOLSAL01"
HEADER_SIZE = 24
DTYPE_FLOAT32 = 0x01

AXES = {"t": 0, "x": 1, "y": 2}


def _read_bytes(path) -> bytes:
    if str(path) == "-":
        return sys.stdin.buffer.read()
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc}") from exc


def _write_bytes(path, data: bytes) -> None:
    if str(path) == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.buffer.flush()
        return
    try:
        Path(path).write_bytes(data)
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc


def pack_header(dims) -> bytes:
    t, x, y = (int(d) for d in dims)
    return MAGIC + struct.pack("<IIIB3x", t, x, y, DTYPE_FLOAT32)


def parse_header(buf: bytes):
    """Return (T, X, Y) from a raw header, validating magic and dtype."""
    if len(buf) < len(MAGIC) or buf[: len(MAGIC)] != MAGIC:
        raise BadMagic("not a VOLSAL01 file (bad magic)")
    if len(buf) < HEADER_SIZE:
        raise DimMismatch(f"truncated header: {len(buf)} < {HEADER_SIZE} bytes")
    t, x, y, code = struct.unpack_from("<IIIB", buf, len(MAGIC))
    if code != DTYPE_FLOAT32:
        raise BadMagic(f"unsupported dtype code 0x{code:02x}")
    if min(t, x, y) < 1:
        raise DimMismatch(f"non-positive dims {t}x{x}x{y}")
    return t, x, y


def volume_from_bytes(raw: bytes) -> np.ndarray:
    """Decode VOLSAL01 bytes into a float32 (T, X, Y) array."""
    dims = parse_header(raw)
    expected = dims[0] * dims[1] * dims[2] * 4
    payload = len(raw) - HEADER_SIZE
    if payload != expected:
        raise DimMismatch(
            f"payload is {payload} bytes, dims {dims[0]}x{dims[1]}x{dims[2]} need {expected}"
        )
    flat = np.frombuffer(raw, dtype="<f4", offset=HEADER_SIZE)
    volume = np.array(flat.reshape(dims, order="F"), order="F")
    if not np.isfinite(volume).all():
        raise NonFiniteSample("volume contains NaN or Inf samples")
    return volume


def load_volume(path) -> np.ndarray:
    """Load a VOLSAL01 file into a float32 (T, X, Y) array.

    Path "-" reads from stdin. Raises BadMagic, DimMismatch,
    NonFiniteSample, or IoFailure.
    """
    return volume_from_bytes(_read_bytes(path))


def store_volume(volume, path) -> None:
    """Write a 3-D array as VOLSAL01 (cast to float32). Path "-" is stdout."""
    arr = np.asarray(volume)
    if arr.ndim != 3:
        raise ShapeMismatch(f"expected a 3-D volume, got shape {arr.shape}")
    payload = np.asfortranarray(arr, dtype="<f4").tobytes(order="F")
    _write_bytes(path, pack_header(arr.shape) + payload)


def render_slice(volume, axis: str, index: int, colormap: str = "gray") -> np.ndarray:
    """Render one 2-D slice to an 8-bit RGB image.

    The slice is min-max normalized to [0, 1]; a constant slice maps to
    the colormap midpoint. Output shape equals the slice extents plus a
    trailing RGB axis.
    """
    arr = np.asarray(volume)
    if axis not in AXES:
        raise ConfigError(f"axis must be one of t/x/y, got {axis!r}")
    ax = AXES[axis]
    if not 0 <= index < arr.shape[ax]:
        raise IndexOutOfRange(f"index {index} outside axis {axis} extent {arr.shape[ax]}")
    plane = np.take(arr, index, axis=ax).astype(np.float64)
    lo, hi = plane.min(), plane.max()
    if hi > lo:
        norm = (plane - lo) / (hi - lo)
    else:
        norm = np.full(plane.shape, 0.5)
    if colormap == "gray":
        channel = np.rint(norm * 255.0).astype(np.uint8)
        return np.stack([channel, channel, channel], axis=-1)
    if colormap == "heat":
        # black -> red -> yellow -> white ramp
        r = np.clip(3.0 * norm, 0.0, 1.0)
        g = np.clip(3.0 * norm - 1.0, 0.0, 1.0)
        b = np.clip(3.0 * norm - 2.0, 0.0, 1.0)
        return np.rint(np.stack([r, g, b], axis=-1) * 255.0).astype(np.uint8)
    raise ConfigError(f"unknown colormap {colormap!r} (expected gray or heat)")


def write_png(image: np.ndarray, path) -> None:
    """Write an 8-bit RGB array to a PNG file."""
    from PIL import Image

    try:
        Image.fromarray(np.asarray(image, dtype=np.uint8), mode="RGB").save(str(path), format="PNG")
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc
