"""Modified Bessel functions of the first kind, integer order.

Power series below ``SERIES_CUTOFF``; above it a Miller downward recurrence
normalized with the generating-function sum ``I_0 + 2 * sum_k I_k = e^x``.
"""
from __future__ import annotations

import math

import numpy as np

from .._jit import njit
from ..errors import RangeError

MAX_ORDER = 200
MAX_ARG = 700.0
SERIES_CUTOFF = 10.0

_BIG = 1.0e250
_SMALL = 1.0e-250


@njit(cache=True)
def _series(n, x):
    half = 0.5 * x
    term = math.exp(n * math.log(half) - math.lgamma(n + 1.0))
    if term == 0.0:
        return 0.0
    total = term
    q = half * half
    k = 1
    while True:
        term *= q / (k * (n + k))
        total += term
        if term <= 1e-17 * total:
            break
        k += 1
    return total


@njit(cache=True)
def _miller_start(nmax, x):
    spread = int(math.ceil(10.0 * math.sqrt(x)))
    m = max(nmax, spread) + spread + 40
    return m + (m & 1)


@njit(cache=True)
def _miller(nmax, x, out):
    """Fill ``out[0..nmax]`` with I_k(x) by downward recurrence."""
    m = _miller_start(nmax, x)
    two_over_x = 2.0 / x
    bip = 0.0
    bi = 1.0
    norm = 0.0
    for k in range(nmax + 1):
        out[k] = 0.0
    for j in range(m, 0, -1):
        bim = bip + j * two_over_x * bi
        bip = bi
        bi = bim
        norm += 2.0 * bi if j - 1 > 0 else bi
        if j - 1 <= nmax:
            out[j - 1] = bi
        if abs(bi) > _BIG:
            bi *= _SMALL
            bip *= _SMALL
            norm *= _SMALL
            for k in range(nmax + 1):
                out[k] *= _SMALL
    scale = math.exp(x) / norm
    for k in range(nmax + 1):
        out[k] *= scale


@njit(cache=True)
def _bessel_i(n, x):
    if x == 0.0:
        return 1.0 if n == 0 else 0.0
    if x < SERIES_CUTOFF:
        return _series(n, x)
    out = np.empty(n + 1)
    _miller(n, x, out)
    return out[n]


@njit(cache=True)
def _bessel_i_orders(nmax, x):
    out = np.empty(nmax + 1)
    if x == 0.0:
        out[:] = 0.0
        out[0] = 1.0
    elif x < SERIES_CUTOFF:
        for k in range(nmax + 1):
            out[k] = _series(k, x)
    else:
        _miller(nmax, x, out)
    return out


def _check(n: int, x: float) -> None:
    if n < 0 or n > MAX_ORDER:
        raise RangeError(f"order {n} outside 0..{MAX_ORDER}")
    if not (x >= 0.0) or x >= MAX_ARG:
        raise RangeError(f"argument {x!r} outside [0, {MAX_ARG})")


def bessel_i(n: int, x: float) -> float:
    """Modified Bessel function I_n(x) for integer ``n >= 0`` and ``x >= 0``.

    Relative error is below 1e-12 for ``x <= 50`` and ``n <= 200``.
    Raises RangeError outside ``n <= 200``, ``0 <= x < 700``.
    """
    n = int(n)
    x = float(x)
    _check(n, x)
    return float(_bessel_i(n, x))


def bessel_i_orders(nmax: int, x: float) -> np.ndarray:
    """Array ``[I_0(x), ..., I_nmax(x)]`` from a single recurrence pass."""
    nmax = int(nmax)
    x = float(x)
    _check(nmax, x)
    return _bessel_i_orders(nmax, x)
