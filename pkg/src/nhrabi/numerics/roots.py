"""Scalar root finding and 1-D maximization."""
from __future__ import annotations

import math
from typing import Callable, Optional

from ..errors import BracketError, ConvergenceError, SearchError

_GOLDEN = 0.5 * (math.sqrt(5.0) - 1.0)


def find_root_bracketed(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float = 1e-12,
    df: Optional[Callable[[float], float]] = None,
    max_iter: int = 200,
) -> float:
    """Root of ``f`` inside ``[lo, hi]`` by safeguarded Newton iteration.

    Newton steps use ``df`` when supplied, otherwise a secant slope through
    the last two iterates. A step that would leave the bracket, or that
    shrinks more slowly than bisection would, is replaced by bisection.
    Stops when the step is below ``tol / 2``, the bracket is narrower than
    ``tol``, or ``f`` vanishes exactly.
    """
    if not lo < hi:
        raise BracketError(f"empty bracket [{lo}, {hi}]")
    if not tol > 0:
        raise ValueError("tol must be positive")
    flo = f(lo)
    fhi = f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if math.isnan(flo) or math.isnan(fhi):
        raise ConvergenceError("f is NaN at a bracket endpoint")
    if flo * fhi > 0.0:
        raise BracketError(f"no sign change on [{lo}, {hi}]: f={flo:.3e}, {fhi:.3e}")

    # xl: f < 0 side, xh: f > 0 side
    if flo < 0.0:
        xl, xh = lo, hi
    else:
        xl, xh = hi, lo
    x = 0.5 * (lo + hi)
    dx_old = dx = abs(hi - lo)
    fx = f(x)
    x_prev, f_prev = (lo, flo) if abs(flo) < abs(fhi) else (hi, fhi)
    for _ in range(max_iter):
        if math.isnan(fx):
            raise ConvergenceError(f"f({x}) is NaN")
        if fx == 0.0:
            return x
        if fx < 0.0:
            xl = x
        else:
            xh = x
        if df is not None:
            slope = df(x)
        else:
            slope = (fx - f_prev) / (x - x_prev) if x != x_prev else 0.0
        newton_ok = (
            slope != 0.0
            and math.isfinite(slope)
            and ((x - xh) * slope - fx) * ((x - xl) * slope - fx) < 0.0
            and abs(2.0 * fx) <= abs(dx_old * slope)
        )
        dx_old = dx
        x_prev, f_prev = x, fx
        if newton_ok:
            dx = fx / slope
            x = x - dx
        else:
            dx = 0.5 * (xh - xl)
            x = xl + dx
        if abs(dx) < 0.5 * tol or abs(xh - xl) < tol:
            return x
        fx = f(x)
    raise ConvergenceError(f"no convergence after {max_iter} iterations (bracket width {abs(xh - xl):.3e})")


def golden_section_max(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float = 1e-6,
    max_iter: int = 500,
) -> tuple[float, float]:
    """Maximize a unimodal ``f`` on ``[lo, hi]``; returns ``(x, f(x))``."""
    if not lo < hi:
        raise SearchError(f"empty interval [{lo}, {hi}]")
    a, b = lo, hi
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if b - a < tol:
            break
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
    else:
        raise SearchError("golden-section search did not converge")
    x = 0.5 * (a + b)
    return x, f(x)
