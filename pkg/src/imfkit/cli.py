"""Command-line front end: CSV ingestion, decomposition runs, spectra.

Subcommands::

    imfkit decompose --method {emd|eemd|if} --input FILE --out DIR ...
    imfkit spectrum --in DIR --bins N --estimator {hilbert|derivative}
    imfkit info --input FILE

``decompose`` writes imfs.csv, meta.txt, one iftrace_k.csv per IMF,
spectrum.csv and (with --plot) decomposition.svg / spectrum.svg into the
output directory. Numbers are serialized as shortest round-trip decimals,
so rerunning an identical configuration reproduces the files byte for
byte.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from .core import (
    BoundaryExtension,
    Decomposition,
    DecompositionError,
    ImfMeta,
    Signal,
    StopReason,
    _extrema_indices,
)
from .eemd import EEMDSettings, eemd
from .emd import EMDSettings, emd
from .iterfilt import IFSettings, MaskLengthRule, iterative_filtering
from .specfreq import TimeFrequencyGrid, derivative_if, hilbert_if, hilbert_spectrum
from .svgplot import render_decomposition_svg, render_spectrum_svg


class IngestError(Exception):
    """Base class for input-file problems."""


class ParseError(IngestError):
    """A cell could not be parsed; the message names the offending line."""


class TooShort(IngestError):
    """Fewer than two data rows."""


class NonUniformSampling(IngestError):
    """Time column is not a uniform grid; the message names the bad row."""


# ---------------------------------------------------------------------------
# CSV ingestion / emission


def _read_rows(path: str | Path) -> tuple[list[str] | None, list[list[float]], list[int]]:
    """Rows of a CSV file as floats, plus the auto-detected header.

    Returns (header or None, rows, 1-based file line number per row).
    """
    lines = Path(path).read_text().splitlines()
    header: list[str] | None = None
    rows: list[list[float]] = []
    linenos: list[int] = []
    ncols: int | None = None
    for lineno, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped:
            continue
        cells = [c.strip() for c in stripped.split(",")]
        if header is None and not rows:
            try:
                first = [float(c) for c in cells]
            except ValueError:
                header = cells  # first row is non-numeric: a header
                continue
            ncols = len(first)
            rows.append(first)
            linenos.append(lineno)
            continue
        try:
            values = [float(c) for c in cells]
        except ValueError as exc:
            raise ParseError(f"{path}: line {lineno}: {exc}") from None
        if ncols is None:
            ncols = len(values)
        elif len(values) != ncols:
            raise ParseError(
                f"{path}: line {lineno}: expected {ncols} columns, got {len(values)}"
            )
        rows.append(values)
        linenos.append(lineno)
    if len(rows) < 2:
        raise TooShort(f"{path}: need at least 2 data rows, found {len(rows)}")
    return header, rows, linenos


def _resolve_column(
    selector: str | None, header: list[str] | None, ncols: int, default: int
) -> int:
    if selector is None:
        return default
    try:
        idx = int(selector)
    except ValueError:
        if header is None or selector not in header:
            raise ParseError(f"unknown column {selector!r}") from None
        idx = header.index(selector)
    if not (0 <= idx < ncols):
        raise ParseError(f"column index {idx} out of range (file has {ncols})")
    return idx


def ingest_csv(
    path: str | Path,
    value_col: str | None = None,
    time_col: str | None = None,
) -> Signal:
    """Load a uniformly sampled signal from a CSV file.

    One column: values with dt = 1. Two or more: the first column is the
    time axis and the second the values, unless overridden by index or
    header name; pass ``time_col="none"`` to ignore the time column. The
    time grid must be uniform to within a 1e-6 relative spread.
    """
    header, rows, linenos = _read_rows(path)
    ncols = len(rows[0])
    data = np.asarray(rows)
    use_time = ncols >= 2 and (time_col is None or time_col.lower() != "none")
    t_idx = _resolve_column(time_col, header, ncols, 0) if use_time else None
    default_value = 1 if use_time else 0
    v_idx = _resolve_column(value_col, header, ncols, default_value if ncols >= 2 else 0)
    values = data[:, v_idx]
    if t_idx is None:
        return Signal(values, dt=1.0, t0=0.0)
    t = data[:, t_idx]
    steps = np.diff(t)
    dt = float(np.median(steps))
    if dt <= 0:
        raise NonUniformSampling(f"{path}: time column must be strictly increasing")
    bad = np.flatnonzero(np.abs(steps - dt) > 1e-6 * abs(dt))
    if bad.size:
        raise NonUniformSampling(
            f"{path}: line {linenos[bad[0] + 1]}: time step "
            f"{steps[bad[0]]!r} deviates from dt={dt!r}"
        )
    return Signal(values, dt=dt, t0=float(t[0]))


def _write_csv(path: Path, columns: list[tuple[str, np.ndarray]]) -> None:
    names = [name for name, _ in columns]
    arrays = [arr for _, arr in columns]
    with path.open("w") as fh:
        fh.write(",".join(names) + "\n")
        for i in range(arrays[0].size):
            fh.write(",".join(repr(float(a[i])) for a in arrays) + "\n")


def write_imfs_csv(path: str | Path, source: Signal, d: Decomposition) -> None:
    """time, imf1..imfK, residual, as shortest round-trip decimals."""
    cols: list[tuple[str, np.ndarray]] = [("time", source.times)]
    cols += [(f"imf{i + 1}", imf.samples) for i, imf in enumerate(d.imfs)]
    cols.append(("residual", d.residual.samples))
    _write_csv(Path(path), cols)


def read_imfs_csv(path: str | Path) -> tuple[Signal, Decomposition]:
    """Rebuild (input signal, decomposition) from an imfs.csv file."""
    header, rows, _ = _read_rows(path)
    if header is None or header[0] != "time" or header[-1] != "residual":
        raise ParseError(f"{path}: not an imfs.csv file")
    data = np.asarray(rows)
    t = data[:, 0]
    dt = float(np.median(np.diff(t)))
    residual = Signal(data[:, -1], dt=dt, t0=float(t[0]))
    imfs = tuple(
        Signal(data[:, j], dt=dt, t0=float(t[0])) for j in range(1, data.shape[1] - 1)
    )
    meta = tuple(ImfMeta(0, StopReason.DELTA_REACHED) for _ in imfs)
    d = Decomposition(imfs=imfs, residual=residual, meta=meta)
    return d.reconstruct(), d


# ---------------------------------------------------------------------------
# Settings files (Settings_IF style key = value)

_SETTINGS_KEYS = {
    # iterative filtering (Settings_IF names and snake_case both accepted)
    "delta": "delta",
    "extpoints": "ext_points",
    "nimfs": "n_imfs",
    "extensiontype": "extension",
    "extension": "extension",
    "maxinner": "max_inner",
    "alpha": "alpha",
    "xi": "xi",
    "masklengths": "mask_lengths",
    # EMD
    "maximfs": "max_imfs",
    "sdthreshold": "sd_threshold",
    "minextrema": "min_extrema",
    "boundary": "boundary",
    # EEMD
    "nstd": "nstd",
    "ne": "ne",
    "numimfs": "num_imfs",
    "seed": "seed",
}

_METHOD_OPTIONS = {
    "emd": {"max_imfs", "max_inner", "sd_threshold", "min_extrema", "boundary"},
    "eemd": {
        "max_imfs",
        "max_inner",
        "sd_threshold",
        "min_extrema",
        "boundary",
        "nstd",
        "ne",
        "num_imfs",
    },
    "if": {
        "delta",
        "ext_points",
        "n_imfs",
        "extension",
        "max_inner",
        "alpha",
        "xi",
        "mask_lengths",
    },
}

_ALPHA_VALUES = {
    "0": MaskLengthRule.FIXED0,
    "fixed0": MaskLengthRule.FIXED0,
    "1": MaskLengthRule.FIXED1,
    "fixed1": MaskLengthRule.FIXED1,
    "ave": MaskLengthRule.AVE,
    "almost_min": MaskLengthRule.ALMOST_MIN,
    "almostmin": MaskLengthRule.ALMOST_MIN,
}


def _parse_alpha(text: str) -> MaskLengthRule:
    key = text.strip().lower()
    if key not in _ALPHA_VALUES:
        raise ValueError(f"alpha must be one of 0, 1, ave, almost_min (got {text!r})")
    return _ALPHA_VALUES[key]


def _parse_extension(text: str) -> BoundaryExtension:
    try:
        return BoundaryExtension(text.strip().lower())
    except ValueError:
        raise ValueError(
            f"extension must be constant, periodic or reflection (got {text!r})"
        ) from None


def _parse_mask_lengths(text: str) -> tuple[int, ...]:
    return tuple(int(v) for v in text.split(",") if v.strip())


def read_settings_file(path: str | Path) -> dict[str, str]:
    """Parse a key = value settings file mirroring the Settings_IF names.

    Keys are case-insensitive; an ``IF.``/``EEMD.`` prefix and underscores
    are ignored (``IF.Xi``, ``xi`` and ``IF.ExtPoints`` all work). Unknown
    keys are rejected.
    """
    result: dict[str, str] = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ParseError(f"{path}: line {lineno}: expected key = value")
        key, value = (part.strip() for part in stripped.split("=", 1))
        norm = key.lower()
        for prefix in ("if.", "eemd.", "emd."):
            if norm.startswith(prefix):
                norm = norm[len(prefix) :]
                break
        norm = norm.replace("_", "")
        if norm not in _SETTINGS_KEYS:
            raise ParseError(f"{path}: line {lineno}: unknown setting {key!r}")
        result[_SETTINGS_KEYS[norm]] = value
    return result


# ---------------------------------------------------------------------------
# Run configuration


@dataclass
class RunConfig:
    """Everything one `decompose` invocation needs."""

    method: str
    input_path: str
    output_dir: str
    value_col: str | None = None
    time_col: str | None = None
    options: dict | None = None  # validated, typed, method-specific settings
    plot: bool = False
    seed: int = 0
    threads: int = 1
    spectrum_bins: int = 128
    estimator: str = "hilbert"


_OPTION_PARSERS = {
    "delta": float,
    "ext_points": int,
    "n_imfs": int,
    "extension": _parse_extension,
    "max_inner": int,
    "alpha": _parse_alpha,
    "xi": float,
    "mask_lengths": _parse_mask_lengths,
    "max_imfs": int,
    "sd_threshold": float,
    "min_extrema": int,
    "boundary": _parse_extension,
    "nstd": float,
    "ne": int,
    "num_imfs": int,
    "seed": int,
}


def build_options(method: str, raw: dict[str, str]) -> dict:
    """Type-check raw option strings and reject ones foreign to the method."""
    allowed = _METHOD_OPTIONS[method]
    options: dict = {}
    for key, value in raw.items():
        if key == "seed":  # general flag, accepted everywhere
            options[key] = int(value)
            continue
        if key not in allowed:
            raise ValueError(f"option {key!r} is not valid for method {method!r}")
        try:
            options[key] = _OPTION_PARSERS[key](value)
        except ValueError as exc:
            raise ValueError(f"bad value for {key!r}: {exc}") from None
    return options


def _emd_settings(options: dict) -> EMDSettings:
    keys = {f.name for f in fields(EMDSettings)}
    return EMDSettings(**{k: v for k, v in options.items() if k in keys})


def _if_settings(options: dict) -> IFSettings:
    opts = dict(options)
    if "mask_lengths" in opts:
        opts["mask_lengths_override"] = opts.pop("mask_lengths")
    keys = {f.name for f in fields(IFSettings)}
    return IFSettings(**{k: v for k, v in opts.items() if k in keys})


def _eemd_settings(options: dict, seed: int) -> EEMDSettings:
    inner = _emd_settings(options)
    keys = {"nstd", "ne", "num_imfs"}
    return EEMDSettings(
        seed=seed, emd=inner, **{k: v for k, v in options.items() if k in keys}
    )


# ---------------------------------------------------------------------------
# Output emission

_ESTIMATOR_FNS = {"hilbert": hilbert_if, "derivative": derivative_if}


def _write_meta(path: Path, pairs: list[tuple[str, object]]) -> None:
    with path.open("w") as fh:
        for key, value in pairs:
            if isinstance(value, BoundaryExtension) or isinstance(value, MaskLengthRule):
                value = value.value
            elif isinstance(value, StopReason):
                value = value.value
            elif isinstance(value, float):
                value = repr(value)
            fh.write(f"{key} = {value}\n")


def read_meta(path: str | Path) -> dict[str, str]:
    """Parse a meta.txt back into a key -> value-string mapping."""
    result = {}
    for line in Path(path).read_text().splitlines():
        if " = " in line:
            key, value = line.split(" = ", 1)
            result[key.strip()] = value.strip()
    return result


def _meta_pairs(cfg: RunConfig, settings, d: Decomposition, n: int, dt: float, t0: float):
    pairs: list[tuple[str, object]] = [
        ("method", cfg.method),
        ("input", cfg.input_path),
        ("n", n),
        ("dt", dt),
        ("t0", t0),
    ]
    if cfg.method == "emd":
        emd_cfg = settings
    elif cfg.method == "eemd":
        pairs += [
            ("nstd", settings.nstd),
            ("ne", settings.ne),
            ("seed", settings.seed),
            ("threads", cfg.threads),
            ("num_imfs", settings.num_imfs if settings.num_imfs is not None else "auto"),
        ]
        emd_cfg = settings.emd
    else:
        pairs += [
            ("delta", settings.delta),
            ("ext_points", settings.ext_points),
            ("n_imfs", settings.n_imfs),
            ("extension", settings.extension),
            ("max_inner", settings.max_inner),
            ("alpha", settings.alpha),
            ("xi", settings.xi),
        ]
        if settings.mask_lengths_override:
            pairs.append(
                ("mask_lengths", ",".join(str(v) for v in settings.mask_lengths_override))
            )
        emd_cfg = None
    if emd_cfg is not None:
        pairs += [
            ("max_imfs", emd_cfg.max_imfs),
            ("max_inner", emd_cfg.max_inner),
            ("sd_threshold", emd_cfg.sd_threshold),
            ("min_extrema", emd_cfg.min_extrema),
            ("boundary", emd_cfg.boundary),
        ]
    pairs.append(("imfs_extracted", len(d.imfs)))
    for i, m in enumerate(d.meta, start=1):
        pairs.append((f"imf{i}.iterations", m.inner_iterations))
        pairs.append((f"imf{i}.stop_reason", m.stop_reason))
        if m.mask_half_length is not None:
            pairs.append((f"imf{i}.mask_half_length", m.mask_half_length))
    return pairs


def _write_traces_and_spectrum(
    out: Path, d: Decomposition, estimator: str, nbins: int, plot: bool
) -> None:
    trace_fn = _ESTIMATOR_FNS[estimator]
    times = d.residual.times
    for i, imf in enumerate(d.imfs, start=1):
        trace = trace_fn(imf)
        _write_csv(
            out / f"iftrace_{i}.csv",
            [
                ("time", times),
                ("amplitude", trace.amplitude.samples),
                ("frequency", trace.frequency.samples),
                ("valid", trace.valid_mask.astype(np.float64)),
            ],
        )
    if d.imfs:
        grid = hilbert_spectrum(d, nbins=nbins, estimator=estimator)
    else:
        edges = np.linspace(0.0, 0.5 / d.residual.dt, nbins + 1)
        grid = TimeFrequencyGrid(
            times=times, freqs=edges, amplitude=np.zeros((times.size, nbins))
        )
    centers = 0.5 * (grid.freqs[:-1] + grid.freqs[1:])
    cols = [("time", grid.times)]
    cols += [
        (repr(float(c)), grid.amplitude[:, j]) for j, c in enumerate(centers)
    ]
    _write_csv(out / "spectrum.csv", cols)
    if plot:
        (out / "spectrum.svg").write_text(render_spectrum_svg(grid))


def run(cfg: RunConfig) -> int:
    """Execute a decomposition run; returns a process exit status."""
    s = ingest_csv(cfg.input_path, value_col=cfg.value_col, time_col=cfg.time_col)
    options = cfg.options or {}
    if cfg.method == "emd":
        settings = _emd_settings(options)
        d = emd(s, settings)
    elif cfg.method == "eemd":
        settings = _eemd_settings(options, cfg.seed)
        d = eemd(s, settings, threads=cfg.threads)
    elif cfg.method == "if":
        settings = _if_settings(options)
        d = iterative_filtering(s, settings)
    else:
        raise ValueError(f"unknown method {cfg.method!r}")
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_imfs_csv(out / "imfs.csv", s, d)
    _write_meta(
        out / "meta.txt", _meta_pairs(cfg, settings, d, len(s), s.dt, s.t0)
    )
    if len(s) >= 8:
        _write_traces_and_spectrum(
            out, d, cfg.estimator, cfg.spectrum_bins, cfg.plot
        )
    if cfg.plot:
        (out / "decomposition.svg").write_text(render_decomposition_svg(s, d))
    return 0


def run_spectrum(in_dir: str, bins: int, estimator: str, weight: str, plot: bool) -> int:
    """Recompute IF traces and the spectrum from a previous run's imfs.csv."""
    out = Path(in_dir)
    _, d = read_imfs_csv(out / "imfs.csv")
    trace_fn = _ESTIMATOR_FNS[estimator]
    times = d.residual.times
    for i, imf in enumerate(d.imfs, start=1):
        trace = trace_fn(imf)
        _write_csv(
            out / f"iftrace_{i}.csv",
            [
                ("time", times),
                ("amplitude", trace.amplitude.samples),
                ("frequency", trace.frequency.samples),
                ("valid", trace.valid_mask.astype(np.float64)),
            ],
        )
    grid = hilbert_spectrum(d, nbins=bins, estimator=estimator, weight=weight)
    centers = 0.5 * (grid.freqs[:-1] + grid.freqs[1:])
    cols = [("time", grid.times)]
    cols += [(repr(float(c)), grid.amplitude[:, j]) for j, c in enumerate(centers)]
    _write_csv(out / "spectrum.csv", cols)
    if plot:
        (out / "spectrum.svg").write_text(render_spectrum_svg(grid))
    return 0


def run_info(input_path: str, value_col: str | None, time_col: str | None) -> int:
    s = ingest_csv(input_path, value_col=value_col, time_col=time_col)
    idx_max, idx_min = _extrema_indices(s.samples)
    print(f"length = {len(s)}")
    print(f"dt = {s.dt!r}")
    print(f"t0 = {s.t0!r}")
    print(f"extrema = {idx_max.size + idx_min.size}")
    print(f"std = {float(np.std(s.samples))!r}")
    return 0


# ---------------------------------------------------------------------------
# Argument parsing

_FLAG_OPTIONS = [
    # (flag, option key, help)
    ("--delta", "delta", "IF inner-loop stopping ratio (default 0.001)"),
    ("--ext-points", "ext_points", "IF outer-loop extrema threshold (default 3)"),
    ("--n-imfs", "n_imfs", "IF maximum number of IMFs (default 1)"),
    ("--extension", "extension", "IF boundary extension (default periodic)"),
    ("--max-inner", "max_inner", "maximum inner iterations (default 200)"),
    ("--alpha", "alpha", "IF mask-length rule: 0, 1, ave, almost_min (default ave)"),
    ("--xi", "xi", "IF mask-length scale (default 1.6)"),
    ("--mask-lengths", "mask_lengths", "IF comma-separated mask half-lengths"),
    ("--max-imfs", "max_imfs", "EMD maximum number of IMFs (default 50)"),
    ("--sd-threshold", "sd_threshold", "EMD sifting threshold (default 0.2)"),
    ("--min-extrema", "min_extrema", "EMD outer-loop extrema threshold (default 2)"),
    ("--boundary", "boundary", "EMD envelope boundary mode (default reflection)"),
    ("--nstd", "nstd", "EEMD noise-to-signal std ratio (default 0.2)"),
    ("--ne", "ne", "EEMD ensemble size (default 100)"),
    ("--num-imfs", "num_imfs", "EEMD fixed component count (default round(log2 n)-1)"),
]


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="imfkit",
        description="Decompose nonstationary signals into intrinsic mode functions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    dec = sub.add_parser("decompose", help="run a decomposition on a CSV signal")
    dec.add_argument("--method", required=True, choices=("emd", "eemd", "if"))
    dec.add_argument("--input", required=True, help="input CSV file")
    dec.add_argument("--out", required=True, help="output directory")
    dec.add_argument("--settings", help="key = value settings file (Settings_IF names)")
    dec.add_argument("--value-col", help="value column (index or header name)")
    dec.add_argument("--time-col", help="time column (index, name, or 'none')")
    dec.add_argument("--plot", action="store_true", help="emit SVG plots")
    dec.add_argument("--seed", type=int, default=None, help="EEMD noise seed")
    dec.add_argument("--threads", type=int, default=1, help="EEMD worker threads")
    dec.add_argument("--spectrum-bins", type=int, default=128)
    dec.add_argument(
        "--estimator", choices=("hilbert", "derivative"), default="hilbert"
    )
    for flag, key, help_text in _FLAG_OPTIONS:
        dec.add_argument(flag, dest=f"opt_{key}", metavar="V", help=help_text)

    spec = sub.add_parser("spectrum", help="recompute spectrum from a run directory")
    spec.add_argument("--in", dest="in_dir", required=True, help="run directory")
    spec.add_argument("--bins", type=int, default=128)
    spec.add_argument(
        "--estimator", choices=("hilbert", "derivative"), default="hilbert"
    )
    spec.add_argument("--weight", choices=("amplitude", "energy"), default="amplitude")
    spec.add_argument("--plot", action="store_true")

    info = sub.add_parser("info", help="summarize a CSV signal")
    info.add_argument("--input", required=True)
    info.add_argument("--value-col")
    info.add_argument("--time-col")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "decompose":
            raw: dict[str, str] = {}
            if args.settings:
                raw.update(read_settings_file(args.settings))
            for _, key, _ in _FLAG_OPTIONS:
                value = getattr(args, f"opt_{key}")
                if value is not None:
                    raw[key] = value
            options = build_options(args.method, raw)
            # --seed beats a seed from the settings file.
            file_seed = options.pop("seed", None)
            seed = args.seed if args.seed is not None else (file_seed or 0)
            cfg = RunConfig(
                method=args.method,
                input_path=args.input,
                output_dir=args.out,
                value_col=args.value_col,
                time_col=args.time_col,
                options=options,
                plot=args.plot,
                seed=seed,
                threads=args.threads,
                spectrum_bins=args.spectrum_bins,
                estimator=args.estimator,
            )
            return run(cfg)
        if args.command == "spectrum":
            return run_spectrum(
                args.in_dir, args.bins, args.estimator, args.weight, args.plot
            )
        if args.command == "info":
            return run_info(args.input, args.value_col, args.time_col)
        raise ValueError(f"unknown command {args.command!r}")
    except (IngestError, DecompositionError, ValueError, OSError) as exc:
        print(f"imfkit: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
