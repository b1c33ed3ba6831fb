"""Command-line front end: volsal run / info / synth.

Exit codes: 0 success, 2 bad configuration, 3 I/O failure, 4 invalid data,
5 degenerate comparison geometry escalated by --strict.
"""

import argparse
import hashlib
import sys
import time
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .accel import max_threads, resolve_backend
from .errors import (
    BadStride,
    ConfigError,
    DegenerateAxis,
    DegenerateAxisWarning,
    EvenCube,
    IoFailure,
    VolsalError,
)
from .saliency import (
    AXIS_NAMES,
    DcsConfig,
    FusionWeights,
    WEIGHT_MODES,
    compute_saliency,
    validate_fusion_weights,
)
from .synthkit import SyntheticSpec, generate
from .volume_io import load_volume, render_slice, store_volume, volume_from_bytes, write_png

SYNTH_KINDS = {
    "fault": "fault-plane",
    "facies": "textured-facies",
    "blob": "blob",
    "constant": "constant",
    "impulse": "impulse",
}


@dataclass
class RunConfig:
    """Validated parameters for one `volsal run` invocation."""

    input: str
    output: str
    cube: int = 5
    stride: int | None = None
    dcs_window: int | None = None
    sigma: float | None = None
    weight_mode: str = "as-written"
    weights: FusionWeights = FusionWeights()
    upsample: str = "nearest"
    slices: tuple = ()
    threads: int | None = None
    save_coarse: bool = False
    strict: bool = False

    @property
    def effective_stride(self) -> int:
        return self.cube // 2 if self.stride is None else self.stride

    @property
    def effective_window(self) -> int:
        return self.cube if self.dcs_window is None else self.dcs_window

    @property
    def effective_sigma(self) -> float:
        return self.effective_window / 3.0 if self.sigma is None else self.sigma

    @property
    def effective_threads(self) -> int:
        return max_threads() if self.threads is None else self.threads

    def dcs_config(self) -> DcsConfig:
        return DcsConfig(
            window=self.effective_window,
            sigma=self.effective_sigma,
            weight_mode=self.weight_mode,
        )

    def validate(self) -> None:
        # Reject everything before any compute starts.
        if self.cube % 2 == 0 or self.cube < 3:
            raise EvenCube(f"cube side must be an odd integer >= 3, got {self.cube}")
        if not 1 <= self.effective_stride <= self.cube // 2:
            raise BadStride(
                f"stride must be in [1, {self.cube // 2}], got {self.effective_stride}"
            )
        self.dcs_config().validate()
        validate_fusion_weights(self.weights)
        if self.upsample not in ("nearest", "trilinear"):
            raise ConfigError(f"unknown upsample mode {self.upsample!r}")
        if self.threads is not None and self.threads < 1:
            raise ConfigError(f"thread count must be >= 1, got {self.threads}")
        for axis, index, colormap in self.slices:
            if axis not in AXIS_NAMES:
                raise ConfigError(f"slice axis must be t/x/y, got {axis!r}")
            if colormap not in ("gray", "heat"):
                raise ConfigError(f"slice colormap must be gray or heat, got {colormap!r}")
            if index < 0:
                raise ConfigError(f"slice index must be >= 0, got {index}")
        if str(self.output) == "-" and (self.save_coarse or self.slices):
            raise ConfigError("--save-coarse and --slice need a real --output path, not '-'")


def _parse_triple(text: str, kind=float, name="value"):
    parts = [p for p in text.split(",") if p != ""]
    if len(parts) != 3:
        raise ConfigError(f"{name} must be three comma-separated values, got {text!r}")
    try:
        return tuple(kind(p) for p in parts)
    except ValueError as exc:
        raise ConfigError(f"cannot parse {name} {text!r}: {exc}") from exc


def _parse_dims(text: str):
    parts = [p for p in text.split(",") if p != ""]
    if len(parts) == 1:
        parts = parts * 3
    if len(parts) != 3:
        raise ConfigError(f"dims must be N or T,X,Y, got {text!r}")
    try:
        dims = tuple(int(p) for p in parts)
    except ValueError as exc:
        raise ConfigError(f"cannot parse dims {text!r}: {exc}") from exc
    return dims


def _parse_slice(text: str):
    parts = text.split(":")
    if len(parts) == 2:
        parts.append("gray")
    if len(parts) != 3:
        raise ConfigError(f"slice must be axis:index[:colormap], got {text!r}")
    try:
        index = int(parts[1])
    except ValueError as exc:
        raise ConfigError(f"cannot parse slice index in {text!r}") from exc
    return parts[0], index, parts[2]


def _sha256(path) -> str:
    if str(path) == "-":
        return "stdin"
    digest = hashlib.sha256()
    try:
        with open(path, "rb") as fh:
            for block in iter(lambda: fh.read(1 << 20), b""):
                digest.update(block)
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc}") from exc
    return digest.hexdigest()


def _format_num(value: float) -> str:
    return repr(float(value))


def write_manifest(path, entries) -> None:
    lines = [f"{key}={value}" for key, value in entries]
    try:
        Path(path).write_text("\n".join(lines) + "\n")
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc


def cmd_run(args) -> int:
    weights = FusionWeights() if args.weights is None else FusionWeights(
        *_parse_triple(args.weights, float, "--weights")
    )
    config = RunConfig(
        input=args.input,
        output=args.output,
        cube=args.cube,
        stride=args.stride,
        dcs_window=args.dcs_window,
        sigma=args.sigma,
        weight_mode=args.weight_mode,
        weights=weights,
        upsample=args.upsample,
        slices=tuple(_parse_slice(s) for s in (args.slice or [])),
        threads=args.threads,
        save_coarse=args.save_coarse,
        strict=args.strict,
    )
    config.validate()
    backend = resolve_backend(getattr(args, "backend", None))

    started = time.perf_counter()
    if str(config.input) == "-":
        raw = sys.stdin.buffer.read()
        checksum = hashlib.sha256(raw).hexdigest()
        volume = volume_from_bytes(raw)
    else:
        checksum = _sha256(config.input)
        volume = load_volume(config.input)

    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", DegenerateAxisWarning)
        result = compute_saliency(
            volume,
            cube_side=config.cube,
            stride=config.effective_stride,
            dcs=config.dcs_config(),
            weights=config.weights,
            upsample=config.upsample,
            backend=backend,
            threads=config.effective_threads,
        )
    degenerate = [w for w in caught if issubclass(w.category, DegenerateAxisWarning)]
    for w in degenerate:
        print(f"volsal: warning: {w.message}", file=sys.stderr)
    if degenerate and config.strict:
        raise DegenerateAxis(f"{len(degenerate)} degenerate directional pass(es) under --strict")

    written = []
    try:
        store_volume(result.full.astype(np.float32), config.output)
        written.append(config.output)
        stem = Path(config.output)
        if config.save_coarse:
            for name in AXIS_NAMES:
                coarse_path = stem.with_name(stem.name + f".coarse_{name}.vol")
                store_volume(getattr(result, f"coarse_{name}").astype(np.float32), coarse_path)
                written.append(coarse_path)
        for axis, index, colormap in config.slices:
            image = render_slice(result.full, axis, index, colormap)
            png_path = stem.with_name(stem.name + f".slice_{axis}{index}.{colormap}.png")
            write_png(image, png_path)
            written.append(png_path)
        elapsed = time.perf_counter() - started
        t, x, y = volume.shape
        nt, nx, ny = result.grid.coarse_dims
        entries = [
            ("tool", "volsal"),
            ("version", __version__),
            ("command", "run"),
            ("backend", backend),
            ("threads", config.effective_threads),
            ("input", config.input),
            ("input_sha256", checksum),
            ("output", config.output),
            ("dims", f"{t}x{x}x{y}"),
            ("cube", config.cube),
            ("stride", config.effective_stride),
            ("dcs_window", config.effective_window),
            ("sigma", _format_num(config.effective_sigma)),
            ("weight_mode", config.weight_mode),
            ("weights", ",".join(_format_num(w) for w in config.weights)),
            ("upsample", config.upsample),
            ("coarse_dims", f"{nt}x{nx}x{ny}"),
            ("save_coarse", int(config.save_coarse)),
            ("slices", ";".join(f"{a}:{i}:{c}" for a, i, c in config.slices)),
            ("strict", int(config.strict)),
            ("degenerate_directions", len(degenerate)),
            ("wall_time_s", f"{elapsed:.3f}"),
        ]
        if str(config.output) != "-":
            manifest_path = stem.with_name(stem.name + ".manifest")
            write_manifest(manifest_path, entries)
            written.append(manifest_path)
    except BaseException:
        for path in written:
            if str(path) != "-":
                Path(path).unlink(missing_ok=True)
        raise
    return 0


def cmd_info(args) -> int:
    volume = load_volume(args.path)
    t, x, y = volume.shape
    stats = volume.astype(np.float64)
    print(
        f"dims={t}x{x}x{y} dtype=f32 "
        f"min={stats.min():g} max={stats.max():g} mean={stats.mean():g}"
    )
    return 0


def cmd_synth(args) -> int:
    dims = _parse_dims(args.dims)
    kwargs = dict(kind=SYNTH_KINDS[args.kind], dims=dims, seed=args.seed, amplitude=args.amplitude)
    if args.normal is not None:
        kwargs["normal"] = _parse_triple(args.normal, int, "--normal")
    if args.offset is not None:
        kwargs["offset"] = args.offset
    if args.freq is not None:
        kwargs["frequency"] = _parse_triple(args.freq, float, "--freq")
    if args.freq_b is not None:
        kwargs["frequency_b"] = _parse_triple(args.freq_b, float, "--freq-b")
    if args.amplitude_b is not None:
        kwargs["amplitude_b"] = args.amplitude_b
    if args.center is not None:
        kwargs["center"] = _parse_triple(args.center, int, "--center")
    if args.radius is not None:
        kwargs["radius"] = args.radius
    if args.value is not None:
        kwargs["value"] = args.value
    if args.position is not None:
        kwargs["position"] = _parse_triple(args.position, int, "--position")
    volume, mask = generate(SyntheticSpec(**kwargs))
    store_volume(volume, args.output)
    if args.mask is not None:
        store_volume(mask.astype(np.float32), args.mask)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="volsal",
        description="Spectral saliency maps for 3-D volumes (VOLSAL01 format).",
    )
    parser.add_argument("--version", action="version", version=f"volsal {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="compute a saliency volume")
    run.add_argument("--input", required=True, help="input VOLSAL01 volume ('-' for stdin)")
    run.add_argument("--output", required=True, help="output VOLSAL01 volume ('-' for stdout)")
    run.add_argument("--cube", type=int, default=5, help="window cube side L (odd, default 5)")
    run.add_argument("--stride", type=int, default=None, help="window stride (default floor(L/2))")
    run.add_argument(
        "--dcs-window", type=int, default=None, help="comparison window d (odd, default L)"
    )
    run.add_argument("--sigma", type=float, default=None, help="Gaussian sigma (default d/3)")
    run.add_argument(
        "--weight-mode", choices=WEIGHT_MODES, default="as-written", help="comparison form"
    )
    run.add_argument("--weights", default=None, help="fusion weights a,b,c (default equal 1/3)")
    run.add_argument("--upsample", choices=("nearest", "trilinear"), default="nearest")
    run.add_argument(
        "--slice",
        action="append",
        metavar="AXIS:INDEX[:COLORMAP]",
        help="export a PNG slice of the saliency volume (repeatable)",
    )
    run.add_argument("--threads", type=int, default=None, help="worker threads (default all)")
    run.add_argument("--save-coarse", action="store_true", help="also write the coarse maps")
    run.add_argument(
        "--strict", action="store_true", help="treat degenerate-geometry warnings as errors"
    )
    run.set_defaults(func=cmd_run)

    info = sub.add_parser("info", help="print header and payload stats")
    info.add_argument("path", help="VOLSAL01 file")
    info.set_defaults(func=cmd_info)

    synth = sub.add_parser("synth", help="emit a synthetic test volume")
    synth.add_argument("kind", choices=sorted(SYNTH_KINDS))
    synth.add_argument("--dims", required=True, help="N or T,X,Y")
    synth.add_argument("--seed", type=int, default=0)
    synth.add_argument("--output", required=True, help="output volume ('-' for stdout)")
    synth.add_argument("--mask", default=None, help="also write the ground-truth mask")
    synth.add_argument("--amplitude", type=float, default=1.0)
    synth.add_argument("--normal", default=None, help="plane normal nt,nx,ny")
    synth.add_argument("--offset", type=float, default=None, help="plane offset")
    synth.add_argument("--freq", default=None, help="texture frequency ft,fx,fy")
    synth.add_argument("--freq-b", default=None, help="second-region frequency")
    synth.add_argument("--amplitude-b", type=float, default=None, help="second-region amplitude")
    synth.add_argument("--center", default=None, help="blob center t,x,y")
    synth.add_argument("--radius", type=float, default=None, help="blob radius")
    synth.add_argument("--value", type=float, default=None, help="constant/impulse value")
    synth.add_argument("--position", default=None, help="impulse position t,x,y")
    synth.set_defaults(func=cmd_synth)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except VolsalError as exc:
        print(f"volsal: error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"volsal: error: {exc}", file=sys.stderr)
        return IoFailure.exit_code


if __name__ == "__main__":
    sys.exit(main())
