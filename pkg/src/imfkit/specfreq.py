"""Instantaneous frequency estimation and time-frequency spectra.

Two estimators are provided: the analytic-signal route (Hilbert transform,
phase derivative) and a purely local derivative-based route using the
second difference of the signal. Per-component traces are deposited into a
time-frequency amplitude grid.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.signal import lfilter, lfiltic

from .core import Decomposition, Signal, _extrema_indices

DEFAULT_BOUNDARY_FRACTION = 0.05
DEFAULT_AMPLITUDE_FLOOR = 1e-8


@dataclass(frozen=True)
class AnalyticSignal:
    """Complex extension of a real signal (imaginary part = Hilbert transform)."""

    real_part: Signal
    imag_part: Signal

    def __post_init__(self):
        if len(self.real_part) != len(self.imag_part):
            raise ValueError("real and imaginary parts must have equal length")

    @property
    def modulus(self) -> np.ndarray:
        return np.hypot(self.real_part.samples, self.imag_part.samples)


@dataclass(frozen=True)
class IFTrace:
    """Amplitude and instantaneous-frequency traces with a validity mask.

    ``valid_mask`` is False where the estimate is boundary-contaminated or
    the amplitude is too small for the phase to mean anything.
    """

    amplitude: Signal
    frequency: Signal
    valid_mask: np.ndarray

    def __post_init__(self):
        if not (len(self.amplitude) == len(self.frequency) == self.valid_mask.size):
            raise ValueError("trace fields must have equal length")
        if np.any(self.amplitude.samples < 0):
            raise ValueError("amplitude must be nonnegative")
        mask = np.asarray(self.valid_mask, dtype=bool).copy()
        mask.flags.writeable = False
        object.__setattr__(self, "valid_mask", mask)


@dataclass(frozen=True)
class TimeFrequencyGrid:
    """Time x frequency amplitude matrix with its axes.

    ``freqs`` holds the nbins+1 ascending bin edges in cycles per time
    unit; ``amplitude[i, j]`` is the mass deposited at time ``times[i]``
    into frequency bin j.
    """

    times: np.ndarray
    freqs: np.ndarray
    amplitude: np.ndarray

    def __post_init__(self):
        if self.amplitude.shape != (self.times.size, self.freqs.size - 1):
            raise ValueError("amplitude must be (len(times), len(freqs)-1)")
        if np.any(self.amplitude < 0):
            raise ValueError("grid amplitudes must be nonnegative")


def _analytic_arr(x: np.ndarray) -> np.ndarray:
    n = x.size
    spec = np.fft.fft(x)
    gain = np.zeros(n)
    if n % 2 == 0:
        gain[0] = gain[n // 2] = 1.0  # DC and Nyquist unchanged
        gain[1 : n // 2] = 2.0
    else:
        gain[0] = 1.0
        gain[1 : (n + 1) // 2] = 2.0
    return np.fft.ifft(spec * gain)


def analytic_signal(s: Signal) -> AnalyticSignal:
    """One-sided-spectrum analytic signal.

    Transforms the signal, zeroes the negative-frequency bins, doubles the
    positive ones (DC and Nyquist unchanged) and inverse-transforms; the
    imaginary part of the result is the discrete Hilbert transform.
    """
    if len(s) < 4:
        raise ValueError("analytic signal needs at least 4 samples")
    z = _analytic_arr(s.samples)
    return AnalyticSignal(real_part=s, imag_part=s.with_samples(z.imag))


def _ar2_continuation(x: np.ndarray, fit_len: int, ext_len: int) -> np.ndarray:
    """Extrapolate forward by ext_len samples with a pole-clamped AR(2) model.

    A second-order recurrence continues the dominant edge oscillation at
    its local frequency (exact for a pure tone); poles are clamped into
    the closed unit disk so the continuation never grows exponentially.
    """
    seg = x[-fit_len:]
    A = np.column_stack([seg[1:-1], seg[:-2]])
    b = seg[2:]
    sol, *_ = np.linalg.lstsq(A, b, rcond=None)
    poles = np.roots([1.0, -sol[0], -sol[1]])
    poles = np.array([p / max(abs(p), 1.0) for p in poles])
    a1 = float(np.real(poles.sum()))
    a2 = float(-np.real(poles.prod()))
    den = [1.0, -a1, -a2]
    zi = lfiltic([1.0], den, y=[x[-1], x[-2]])
    out, _ = lfilter([1.0], den, np.zeros(ext_len), zi=zi)
    return out


def _stabilized_analytic_arr(x: np.ndarray) -> np.ndarray:
    """Analytic signal with boundary-stabilizing signal extension.

    The FFT construction assumes periodicity, and the seam between the
    last and first samples contaminates the whole window for signals that
    do not wrap smoothly. Each end is therefore continued by a clamped
    AR(2) extrapolation of the edge oscillation, cosine-tapered to zero
    over the full extension, before the one-sided-spectrum transform;
    only the original window of the result is returned.
    """
    n = x.size
    fit_len = min(64, n // 2)
    if fit_len < 8 or not np.any(x):
        return _analytic_arr(x)
    ext = n
    right = _ar2_continuation(x, fit_len, ext)
    left = _ar2_continuation(x[::-1], fit_len, ext)[::-1]
    xe = np.concatenate([left, x, right])
    ramp = 0.5 - 0.5 * np.cos(np.pi * np.arange(ext) / ext)
    xe[:ext] *= ramp
    xe[xe.size - ext :] *= ramp[::-1]
    if not np.all(np.isfinite(xe)):
        return _analytic_arr(x)
    return _analytic_arr(xe)[ext : ext + n]


def _base_valid_mask(
    amplitude: np.ndarray, boundary_frac: float, amp_floor: float
) -> np.ndarray:
    n = amplitude.size
    valid = np.ones(n, dtype=bool)
    edge = max(1, int(np.ceil(boundary_frac * n)))
    valid[:edge] = False
    valid[n - edge :] = False
    peak = float(amplitude.max())
    if peak == 0.0:
        valid[:] = False
    else:
        valid &= amplitude >= amp_floor * peak
    return valid


def hilbert_if(
    s: Signal,
    boundary_frac: float = DEFAULT_BOUNDARY_FRACTION,
    amp_floor: float = DEFAULT_AMPLITUDE_FLOOR,
    boundary_stabilize: bool = True,
) -> IFTrace:
    """Instantaneous frequency from the analytic-signal phase.

    Amplitude is the analytic modulus; frequency is the centered finite
    difference of the unwrapped phase divided by 2*pi*dt (one-sided at the
    ends). Samples in the outer ``boundary_frac`` of the signal or with
    amplitude below ``amp_floor`` times the peak are flagged invalid.

    By default the analytic signal is computed on an AR(2)-extended copy
    of the signal (see ``_stabilized_analytic_arr``), which suppresses the
    periodic-seam leakage of the plain FFT construction; pass
    ``boundary_stabilize=False`` for the raw transform.
    """
    if len(s) < 8:
        raise ValueError("instantaneous frequency needs at least 8 samples")
    if boundary_stabilize:
        z = _stabilized_analytic_arr(s.samples)
    else:
        z = _analytic_arr(s.samples)
    amplitude = np.abs(z)
    phase = np.unwrap(np.angle(z))
    n = phase.size
    freq = np.empty(n)
    freq[1:-1] = (phase[2:] - phase[:-2]) / (4.0 * np.pi * s.dt)
    freq[0] = (phase[1] - phase[0]) / (2.0 * np.pi * s.dt)
    freq[-1] = (phase[-1] - phase[-2]) / (2.0 * np.pi * s.dt)
    valid = _base_valid_mask(amplitude, boundary_frac, amp_floor)
    return IFTrace(
        amplitude=s.with_samples(amplitude),
        frequency=s.with_samples(freq),
        valid_mask=valid,
    )


def _abs_envelope(x: np.ndarray) -> np.ndarray:
    """Envelope of |x| through its local maxima (natural cubic spline)."""
    absx = np.abs(x)
    idx_max, _ = _extrema_indices(absx)
    # Endpoints are included as knots so the spline covers the full grid.
    pos = np.concatenate([[0], idx_max, [absx.size - 1]]).astype(np.float64)
    val = np.concatenate([[absx[0]], absx[idx_max], [absx[-1]]])
    env = CubicSpline(pos, val, bc_type="natural")(np.arange(absx.size))
    return np.maximum(env, 0.0)


def derivative_if(
    s: Signal,
    boundary_frac: float = DEFAULT_BOUNDARY_FRACTION,
    amp_floor: float = DEFAULT_AMPLITUDE_FLOOR,
) -> IFTrace:
    """Purely local instantaneous frequency from the second difference.

    For a narrowband component, s'' ~ -(2*pi*f)^2 * s, so
    f = sqrt(max(0, -s''/s)) / (2*pi) wherever |s| exceeds 1e-3 of its
    peak; samples near zero crossings are filled by linear interpolation
    from the nearest estimated neighbors. Amplitude is the spline envelope
    of |s| through its local maxima.

    The raw ratio is ill-conditioned close to zero crossings (a slowly
    varying envelope contributes a term proportional to cot of the phase),
    so only samples where |s| reaches at least half the local envelope
    anchor the estimate; there the envelope-induced error is second order.
    """
    if len(s) < 8:
        raise ValueError("instantaneous frequency needs at least 8 samples")
    x = s.samples
    n = x.size
    peak = float(np.abs(x).max())
    if peak == 0.0:
        zero = s.with_samples(np.zeros(n))
        return IFTrace(
            amplitude=zero, frequency=zero, valid_mask=np.zeros(n, dtype=bool)
        )
    amplitude = _abs_envelope(x)
    d2 = np.zeros(n)
    d2[1:-1] = (x[2:] - 2.0 * x[1:-1] + x[:-2]) / (s.dt * s.dt)
    defined = np.abs(x) > 1e-3 * peak
    defined[0] = defined[-1] = False  # no centered second difference at the ends
    anchored = defined & (np.abs(x) >= 0.5 * amplitude)
    ok = anchored if anchored.any() else defined
    ratio = np.zeros(n)
    np.divide(-d2, x, out=ratio, where=ok)
    est = np.sqrt(np.maximum(ratio, 0.0)) / (2.0 * np.pi)
    idx_ok = np.flatnonzero(ok)
    if idx_ok.size == 0:
        freq = np.zeros(n)
    else:
        freq = np.interp(np.arange(n), idx_ok, est[idx_ok])
    valid = _base_valid_mask(amplitude, boundary_frac, amp_floor)
    return IFTrace(
        amplitude=s.with_samples(amplitude),
        frequency=s.with_samples(freq),
        valid_mask=valid,
    )


_ESTIMATORS = {"hilbert": hilbert_if, "derivative": derivative_if}


def hilbert_spectrum(
    d: Decomposition,
    nbins: int,
    estimator: str = "hilbert",
    weight: str = "amplitude",
) -> TimeFrequencyGrid:
    """Time-frequency grid built from a decomposition's IF traces.

    For every IMF and every valid sample, the trace amplitude (or squared
    amplitude with ``weight="energy"``) is deposited into the frequency
    bin containing the instantaneous frequency. Bin edges span
    [0, 1/(2*dt)] uniformly; out-of-range frequencies are clipped into the
    end bins so the deposited mass is conserved.
    """
    if len(d.imfs) == 0:
        raise ValueError("decomposition has no IMFs")
    if nbins < 1:
        raise ValueError("nbins must be >= 1")
    if estimator not in _ESTIMATORS:
        raise ValueError(f"unknown estimator {estimator!r}")
    if weight not in ("amplitude", "energy"):
        raise ValueError(f"unknown weight {weight!r}")
    trace_fn = _ESTIMATORS[estimator]
    ref = d.residual
    n = len(ref)
    fmax = 0.5 / ref.dt
    edges = np.linspace(0.0, fmax, nbins + 1)
    grid = np.zeros((n, nbins))
    rows = np.arange(n)
    for imf in d.imfs:
        trace = trace_fn(imf)
        mass = trace.amplitude.samples
        if weight == "energy":
            mass = mass * mass
        bins = np.floor(trace.frequency.samples / fmax * nbins).astype(np.int64)
        np.clip(bins, 0, nbins - 1, out=bins)
        v = trace.valid_mask
        np.add.at(grid, (rows[v], bins[v]), mass[v])
    return TimeFrequencyGrid(times=ref.times, freqs=edges, amplitude=grid)
