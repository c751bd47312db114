"""Shift of the primary (delta ~ omega) resonance with coupling strength."""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .effective_model import ModelParams, effective, solve_alpha
from .errors import SearchError
from .floquet import FloquetConfig, classify
from .numerics.bessel import bessel_i_orders
from .numerics.roots import find_root_bracketed, golden_section_max

N_SCAN = 61


@dataclass(frozen=True)
class BsResult:
    amp: float
    delta_res_numeric: Optional[float]
    delta_res_analytic: Optional[float]
    delta_res_series2: float
    delta_res_series4: float
    error: Optional[str] = None


def default_bracket(amp: float, omega: float = 1.0) -> tuple[float, float]:
    return 0.5 * omega, min(3.0 * omega, omega + abs(amp))


def resonance_series(amp: float, omega: float = 1.0, order: int = 4) -> float:
    """``omega + A^2/(16 omega)`` (order 2), minus ``5 A^4/(1024 omega^3)`` at order 4."""
    if order not in (2, 4):
        raise ValueError("order must be 2 or 4")
    out = omega + amp**2 / (16.0 * omega)
    if order == 4:
        out -= 5.0 * amp**4 / (1024.0 * omega**3)
    return out


def resonance_numeric(
    amp: float,
    omega: float = 1.0,
    cfg: Optional[FloquetConfig] = None,
    delta_bracket: Optional[Sequence[float]] = None,
    tol: float = 1e-6,
    n_scan: int = N_SCAN,
) -> float:
    """Atomic frequency at which the Floquet spectrum has its largest imaginary part.

    A coarse scan of ``n_scan`` points picks the best cell; golden-section
    search then refines it inside the two neighbouring cells.
    """
    if amp == 0.0:
        return float(omega)
    cfg = cfg or FloquetConfig()
    lo, hi = delta_bracket or default_bracket(amp, omega)

    def objective(d):
        return classify(ModelParams(d, amp, omega), cfg)[1]

    grid = np.linspace(lo, hi, n_scan)
    vals = np.array([objective(d) for d in grid])
    j = int(np.argmax(vals))
    if not vals[j] > cfg.broken_threshold:
        raise SearchError(f"no broken point in [{lo}, {hi}] at A={amp}")
    if j == 0 or j == n_scan - 1:
        raise SearchError(f"maximum of max_imag at the bracket edge ({grid[j]:.4g}) for A={amp}")
    x, _ = golden_section_max(objective, float(grid[j - 1]), float(grid[j + 1]), tol=tol)
    return float(x)


def resonance_residual(delta: float, amp: float, omega: float = 1.0) -> float:
    """``d(delta_tilde^2 - amp_tilde^2/4)/d delta`` with alpha re-solved at ``(delta, A)``.

    Uses ``d alpha / d delta = -2 omega I1 / (A (omega + delta (I0 + I2)))``.
    """
    amp = abs(amp)
    p = ModelParams(delta, amp, omega)
    alpha = solve_alpha(p)
    i0, i1, i2 = bessel_i_orders(2, amp * alpha / omega)
    dt = delta * i0 - omega
    if amp == 0.0:
        return 2.0 * dt * i0
    da = -2.0 * omega * i1 / (amp * (omega + delta * (i0 + i2)))
    return float(2.0 * dt * (i0 + delta * amp / omega * i1 * da) + 2.0 * amp**2 * (1.0 - alpha) * da)


def resonance_analytic(
    amp: float,
    omega: float = 1.0,
    delta_bracket: Optional[Sequence[float]] = None,
    tol: float = 1e-12,
    n_scan: int = N_SCAN,
) -> float:
    """Root in delta of ``resonance_residual``; even in ``amp``.

    The first sign change on an ``n_scan`` pre-scan of the bracket is refined
    by the bracketed root finder.
    """
    amp = abs(amp)
    if amp == 0.0:
        return float(omega)
    lo, hi = delta_bracket or default_bracket(amp, omega)
    grid = np.linspace(lo, hi, n_scan)
    vals = [resonance_residual(d, amp, omega) for d in grid]
    for i in range(n_scan - 1):
        if vals[i] == 0.0:
            return float(grid[i])
        if vals[i] * vals[i + 1] < 0.0:
            return float(find_root_bracketed(lambda d: resonance_residual(d, amp, omega), float(grid[i]), float(grid[i + 1]), tol=tol))
    raise SearchError(f"resonance condition has no sign change in [{lo}, {hi}] at A={amp}")


def rabi_sq(delta: float, amp: float, omega: float = 1.0) -> float:
    return effective(ModelParams(delta, abs(amp), omega)).rabi_sq


def _sweep_point(args) -> BsResult:
    amp, omega, cfg = args
    s2 = resonance_series(amp, omega, 2)
    s4 = resonance_series(amp, omega, 4)
    errors = []
    try:
        num = resonance_numeric(amp, omega, cfg)
    except Exception as exc:
        num = None
        errors.append(f"numeric: {type(exc).__name__}: {exc}")
    try:
        ana = resonance_analytic(amp, omega)
    except Exception as exc:
        ana = None
        errors.append(f"analytic: {type(exc).__name__}: {exc}")
    return BsResult(float(amp), num, ana, s2, s4, "; ".join(errors) or None)


def bs_sweep(
    amps: Sequence[float],
    omega: float = 1.0,
    cfg: Optional[FloquetConfig] = None,
    workers: Optional[int] = 1,
) -> list:
    """All four resonance estimates per amplitude; failures are kept as ``error`` rows."""
    cfg = cfg or FloquetConfig()
    tasks = [(float(a), omega, cfg) for a in amps]
    workers = workers or os.cpu_count() or 1
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_sweep_point, tasks))
    return [_sweep_point(t) for t in tasks]
