"""Filtering, rectification, resampling and numerical differentiation.

All filters are digital Butterworth lowpass designs applied forward-backward
(zero phase). Sampling rates follow the recording setup: raw EMG at 1 kHz,
kinematics at 100 Hz.
"""

from dataclasses import dataclass

import numpy as np
from scipy import signal

from .errors import CutoffOutOfRange, FactorNotPositive, SignalTooShort, TooShort
from .validation import as_float_matrix


@dataclass(frozen=True)
class FilterCoefficients:
    """Digital IIR filter as numerator/denominator polynomials in z^-1."""

    numerator: np.ndarray
    denominator: np.ndarray
    order: int
    cutoff_hz: float
    fs_hz: float

    def magnitude_at(self, freq_hz):
        """Single-pass magnitude response |H(f)| at the given frequency."""
        w = 2.0 * np.pi * freq_hz / self.fs_hz
        z = np.exp(1j * w)
        num = np.polyval(self.numerator[::-1], 1.0 / z)
        den = np.polyval(self.denominator[::-1], 1.0 / z)
        return float(np.abs(num / den))


def butterworth_lowpass(order, cutoff_hz, fs_hz):
    """Design a digital Butterworth lowpass via the bilinear transform.

    The cutoff is the half-power (-3 dB) point of a single pass:
    |H(cutoff)| = 1/sqrt(2).
    """
    if order < 1:
        raise CutoffOutOfRange(f"order must be >= 1, got {order}")
    if not (0.0 < cutoff_hz < fs_hz / 2.0):
        raise CutoffOutOfRange(
            f"cutoff must lie in (0, fs/2) = (0, {fs_hz / 2.0}), got {cutoff_hz}"
        )
    b, a = signal.butter(order, cutoff_hz, btype="low", fs=fs_hz)
    return FilterCoefficients(
        numerator=np.asarray(b, dtype=np.float64),
        denominator=np.asarray(a, dtype=np.float64),
        order=int(order),
        cutoff_hz=float(cutoff_hz),
        fs_hz=float(fs_hz),
    )


def zero_phase_filter(coeffs, x):
    """Apply a filter forward then backward in time (no phase distortion).

    Uses odd-symmetric reflection padding at both ends to suppress edge
    transients. The pad length is the filter's settling time (slowest pole
    decayed to 1e-6), at least 3 * order, capped at signal length - 1. The
    effective magnitude response is |H|^2.
    """
    x = np.asarray(x, dtype=np.float64)
    padlen_min = 3 * coeffs.order
    if x.shape[-1] <= padlen_min:
        raise SignalTooShort(
            f"signal length {x.shape[-1]} must exceed 3 * order = {padlen_min}"
        )
    poles = np.roots(coeffs.denominator)
    radius = float(np.max(np.abs(poles))) if poles.size else 0.0
    if 0.0 < radius < 1.0:
        settle = int(np.ceil(np.log(1e-6) / np.log(radius)))
    else:
        settle = padlen_min
    padlen = int(min(max(padlen_min, settle), x.shape[-1] - 1))
    return signal.filtfilt(
        coeffs.numerator, coeffs.denominator, x, axis=-1, padtype="odd", padlen=padlen
    )


def rectify(x):
    """Full-wave rectification (elementwise absolute value)."""
    return np.abs(np.asarray(x, dtype=np.float64))


def decimate(x, factor):
    """Keep every factor-th sample starting at index 0.

    The input must already be band-limited below the target Nyquist; this is
    the caller's responsibility (the 3 Hz envelope lowpass guarantees it for
    the EMG path).
    """
    if int(factor) < 1:
        raise FactorNotPositive(f"factor must be >= 1, got {factor}")
    x = np.asarray(x)
    return x[..., :: int(factor)]


def differentiate_twice(angles, fs_hz):
    """Second numerical derivative of joint angle trajectories.

    Interior points use the central second-difference
    (theta[t+1] - 2 theta[t] + theta[t-1]) * fs^2; both boundaries use
    second-order one-sided stencils so the output length equals the input
    length. Exact for quadratic trajectories.
    """
    theta = as_float_matrix(angles, name="angles")
    n = theta.shape[1]
    if n < 5:
        raise TooShort(f"need at least 5 samples, got {n}")
    fs2 = float(fs_hz) ** 2
    acc = np.empty_like(theta)
    acc[:, 1:-1] = (theta[:, 2:] - 2.0 * theta[:, 1:-1] + theta[:, :-2]) * fs2
    acc[:, 0] = (
        2.0 * theta[:, 0] - 5.0 * theta[:, 1] + 4.0 * theta[:, 2] - theta[:, 3]
    ) * fs2
    acc[:, -1] = (
        2.0 * theta[:, -1] - 5.0 * theta[:, -2] + 4.0 * theta[:, -3] - theta[:, -4]
    ) * fs2
    return acc


def lowpass_filter_signal(x, cutoff_hz, fs_hz, order=2):
    """Convenience wrapper: design + zero-phase apply in one call."""
    coeffs = butterworth_lowpass(order, cutoff_hz, fs_hz)
    return zero_phase_filter(coeffs, np.asarray(x, dtype=np.float64))
