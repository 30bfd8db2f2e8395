"""Shared domain types and primitive signal operations.

Everything downstream (EMD, EEMD, iterative filtering, spectral tools)
works in terms of :class:`Signal`, :class:`Decomposition` and the helpers
defined here. All functions are pure and safe for concurrent use.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np


class DecompositionError(Exception):
    """Base class for errors raised by the decomposition engines."""


class TooFewExtrema(DecompositionError):
    """Signal does not carry enough oscillation for the requested operation."""


class MaskTooLong(DecompositionError):
    """Filter mask half-length is not smaller than the signal length."""


class ZeroVarianceSignal(DecompositionError):
    """Noise amplitude is relative to signal std, which is zero here."""


class BoundaryExtension(Enum):
    """How a signal is assumed to continue outside its boundaries."""

    CONSTANT = "constant"
    PERIODIC = "periodic"
    REFLECTION = "reflection"


class StopReason(Enum):
    """Why an inner (per-component) iteration loop terminated."""

    DELTA_REACHED = "delta_reached"
    MAX_INNER_REACHED = "max_inner_reached"


_NP_PAD_MODE = {
    BoundaryExtension.CONSTANT: "edge",
    BoundaryExtension.PERIODIC: "wrap",
    BoundaryExtension.REFLECTION: "reflect",
}


@dataclass(frozen=True)
class Signal:
    """Uniformly sampled real time series.

    Parameters
    ----------
    samples : array_like
        Real sample values, length >= 2, all finite.
    dt : float
        Time step between samples, > 0.
    t0 : float
        Time of the first sample.
    """

    samples: np.ndarray
    dt: float = 1.0
    t0: float = 0.0

    def __post_init__(self):
        x = np.asarray(self.samples, dtype=np.float64)
        if x.ndim != 1:
            raise ValueError(f"signal must be 1-D, got shape {x.shape}")
        if x.size < 2:
            raise ValueError(f"signal needs at least 2 samples, got {x.size}")
        if not np.all(np.isfinite(x)):
            raise ValueError("signal samples must be finite")
        if not (self.dt > 0):
            raise ValueError(f"dt must be positive, got {self.dt}")
        x = x.copy()
        x.flags.writeable = False
        object.__setattr__(self, "samples", x)
        object.__setattr__(self, "dt", float(self.dt))
        object.__setattr__(self, "t0", float(self.t0))

    def __len__(self) -> int:
        return self.samples.size

    @property
    def times(self) -> np.ndarray:
        """Sample times t0 + i*dt."""
        return self.t0 + self.dt * np.arange(self.samples.size)

    def with_samples(self, samples: np.ndarray) -> "Signal":
        """New signal on the same time grid with different sample values."""
        return Signal(samples, dt=self.dt, t0=self.t0)


@dataclass(frozen=True)
class ExtremaSet:
    """Interior local maxima and minima of a signal, in ascending index order."""

    max_indices: np.ndarray
    min_indices: np.ndarray

    @property
    def count(self) -> int:
        return self.max_indices.size + self.min_indices.size

    def merged(self) -> np.ndarray:
        """All extremum indices merged and sorted ascending."""
        return np.sort(np.concatenate([self.max_indices, self.min_indices]))


@dataclass(frozen=True)
class ImfMeta:
    """Per-component provenance of a decomposition."""

    inner_iterations: int
    stop_reason: StopReason
    mask_half_length: int | None = None


@dataclass(frozen=True)
class Decomposition:
    """Ordered intrinsic mode functions plus the non-oscillatory residual.

    The components telescope: summing ``imfs`` and ``residual`` reproduces
    the decomposed signal up to floating-point rounding.
    """

    imfs: tuple[Signal, ...]
    residual: Signal
    meta: tuple[ImfMeta, ...] = field(default=())

    def __post_init__(self):
        n = len(self.residual)
        for imf in self.imfs:
            if len(imf) != n:
                raise ValueError("all components must share the input length")
        if len(self.meta) != len(self.imfs):
            raise ValueError("one meta record per IMF required")

    @property
    def mask_lengths(self) -> list[int | None]:
        """Mask half-length used per IMF (None for spline-envelope methods)."""
        return [m.mask_half_length for m in self.meta]

    def reconstruct(self) -> Signal:
        """Sum of all IMFs and the residual."""
        total = self.residual.samples.copy()
        for imf in self.imfs:
            total += imf.samples
        return self.residual.with_samples(total)


def extrema(s: Signal) -> ExtremaSet:
    """Locate interior strict local extrema, resolving plateaus to midpoints.

    A run of equal values flanked by lower (higher) values on both sides
    counts as a single maximum (minimum) at the run's midpoint, rounded
    down. Boundary samples and plateaus touching a boundary are never
    extrema. A constant signal has none.
    """
    idx_max, idx_min = _extrema_indices(s.samples)
    return ExtremaSet(max_indices=idx_max, min_indices=idx_min)


def _extrema_indices(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized extrema scan on a raw array; see :func:`extrema`."""
    dx = np.diff(x)
    nz = np.flatnonzero(dx != 0)
    if nz.size < 2:
        empty = np.empty(0, dtype=np.intp)
        return empty, empty
    sign = np.sign(dx[nz])
    flip = sign[:-1] != sign[1:]
    # A plateau between nz[i] and nz[i+1] spans samples nz[i]+1 .. nz[i+1];
    # its midpoint (rounded down) is the extremum location.
    mid = (nz[:-1] + 1 + nz[1:]) // 2
    idx_max = mid[flip & (sign[:-1] > 0)]
    idx_min = mid[flip & (sign[:-1] < 0)]
    return idx_max.astype(np.intp), idx_min.astype(np.intp)


def extend(s: Signal, mode: BoundaryExtension, pad: int) -> Signal:
    """Extend a signal by ``pad`` samples on each side.

    The original samples occupy positions ``pad .. pad+n-1`` of the result.
    Periodic extension tiles the signal; reflection mirrors it about the
    boundary samples without duplicating them (and keeps reflecting for
    pads beyond one period); constant continues the boundary values.
    """
    if pad < 1:
        raise ValueError(f"pad must be >= 1, got {pad}")
    padded = np.pad(s.samples, pad, mode=_NP_PAD_MODE[mode])
    return Signal(padded, dt=s.dt, t0=s.t0 - pad * s.dt)


def norm2(s: Signal) -> float:
    """Euclidean norm of the sample vector."""
    return float(np.linalg.norm(s.samples))
