"""One-sided discrete Fourier magnitude spectrum."""
from __future__ import annotations

import math

import numpy as np

from .._jit import HAVE_NUMBA, njit
from ..errors import SamplingError

_CHUNK = 256


@njit(cache=True)
def _dft_loop(x, cos_t, sin_t, n_freq):
    n = x.shape[0]
    out = np.empty(n_freq)
    for k in range(n_freq):
        re = 0.0
        im = 0.0
        idx = 0
        for j in range(n):
            re += x[j] * cos_t[idx]
            im -= x[j] * sin_t[idx]
            idx += k
            if idx >= n:
                idx -= n
        out[k] = math.sqrt(re * re + im * im)
    return out


def _dft_numpy(x, cos_t, sin_t, n_freq):
    n = x.shape[0]
    j = np.arange(n)
    out = np.empty(n_freq)
    for start in range(0, n_freq, _CHUNK):
        k = np.arange(start, min(start + _CHUNK, n_freq))
        idx = np.outer(k, j) % n
        re = cos_t[idx] @ x
        im = sin_t[idx] @ x
        out[start : start + k.size] = np.hypot(re, im)
    return out


def _check_uniform(t: np.ndarray, dt: float) -> None:
    d = np.diff(t)
    if np.max(np.abs(d - dt)) > 1e-6 * dt:
        raise SamplingError("samples are not uniformly spaced")


def dft_magnitude(
    samples,
    dt: float,
    t=None,
    window: str = "rect",
    use_fft: bool = False,
) -> tuple[np.ndarray, np.ndarray]:
    """Magnitude spectrum ``dt * |sum_j x_j exp(-2 pi i k j / N)|`` of the mean-subtracted signal.

    Parameters
    ----------
    samples : array_like
        Real samples on a uniform grid.
    dt : float
        Sample spacing. Frequencies come back as cycles per unit of ``dt``,
        ``nu_k = k / (N dt)`` for ``k = 0 .. N // 2``.
    t : array_like, optional
        Sample times; when given they are checked for uniform spacing.
    window : {"rect", "hann"}
        Taper applied after mean subtraction.
    use_fft : bool
        Use ``numpy.fft.rfft`` instead of the direct O(N^2) sum.
    """
    x = np.asarray(samples, dtype=float)
    if x.ndim != 1 or x.size < 2:
        raise SamplingError("need at least two samples")
    if not dt > 0:
        raise SamplingError("dt must be positive")
    if t is not None:
        t = np.asarray(t, dtype=float)
        if t.shape != x.shape:
            raise SamplingError("t and samples differ in length")
        _check_uniform(t, dt)
    if not np.all(np.isfinite(x)):
        raise SamplingError("samples contain non-finite values")
    x = x - x.mean()
    if window == "hann":
        x = x * np.hanning(x.size)
    elif window != "rect":
        raise ValueError(f"unknown window {window!r}")

    n = x.size
    n_freq = n // 2 + 1
    if use_fft:
        mag = np.abs(np.fft.rfft(x))
    else:
        angle = 2.0 * np.pi * np.arange(n) / n
        kernel = _dft_loop if HAVE_NUMBA else _dft_numpy
        mag = kernel(x, np.cos(angle), np.sin(angle), n_freq)
    freqs = np.arange(n_freq) / (n * dt)
    return freqs, dt * mag
