"""Closed-form quantities of the effective (transformed-frame) model.

A single non-unitary frame change with generator ``S = (A alpha / 2 omega) sin(omega t) sigma_x``
maps the driven model onto a time-independent Hamiltonian

    H_eff = (delta_tilde / 2) sigma_z + i (amp_tilde / 4) sigma_x

with ``delta_tilde = delta I0(A alpha / omega) - omega`` and ``amp_tilde = 2 A (1 - alpha)``,
where alpha solves ``delta I1(A alpha / omega) = (A / 2)(1 - alpha)``.
All energies are in the same units as ``omega``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ConvergenceError
from .numerics.bessel import bessel_i, bessel_i_orders
from .numerics.roots import find_root_bracketed

ALPHA_TOL = 1e-15


@dataclass(frozen=True)
class ModelParams:
    """Atomic frequency ``delta``, coupling ``amp`` and drive frequency ``omega``."""

    delta: float
    amp: float
    omega: float = 1.0

    def __post_init__(self):
        for name in ("delta", "amp", "omega"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise ValueError(f"{name} must be finite, got {v!r}")
            object.__setattr__(self, name, float(v))
        if self.omega <= 0:
            raise ValueError(f"omega must be positive, got {self.omega}")
        if self.delta < 0:
            raise ValueError(f"delta must be non-negative, got {self.delta}")
        if self.amp < 0:
            raise ValueError(f"amp must be non-negative, got {self.amp}")

    @property
    def delta_ratio(self) -> float:
        return self.delta / self.omega

    @property
    def amp_ratio(self) -> float:
        return self.amp / self.omega

    def with_amp(self, amp: float) -> "ModelParams":
        return ModelParams(self.delta, amp, self.omega)

    def with_delta(self, delta: float) -> "ModelParams":
        return ModelParams(delta, self.amp, self.omega)


@dataclass(frozen=True)
class EffectiveModel:
    alpha: float
    delta_tilde: float
    amp_tilde: float
    rabi_sq: float  # (delta_tilde^2 - amp_tilde^2 / 4) / 4
    rabi: complex  # principal sqrt of rabi_sq, Im >= 0

    @property
    def broken(self) -> bool:
        return self.rabi_sq < 0


def alpha_residual(alpha: float, p: ModelParams) -> float:
    return p.delta * bessel_i(1, p.amp * alpha / p.omega) - 0.5 * p.amp * (1.0 - alpha)


def solve_alpha(p: ModelParams, tol: float = ALPHA_TOL) -> float:
    """Root of ``delta I1(A alpha / omega) = (A / 2)(1 - alpha)`` on ``[0, 1]``.

    The left side grows with alpha and the right side falls, so the root is
    unique. At ``A = 0`` the equation is empty and the limit
    ``omega / (delta + omega)`` is returned; at ``delta = 0`` the root is 1.
    """
    if p.amp == 0.0:
        return p.omega / (p.delta + p.omega)
    if p.delta == 0.0:
        return 1.0
    x = p.amp / p.omega

    def df(a):
        i0, _, i2 = bessel_i_orders(2, x * a)
        return 0.5 * p.delta * x * (i0 + i2) + 0.5 * p.amp

    alpha = find_root_bracketed(lambda a: alpha_residual(a, p), 0.0, 1.0, tol=tol, df=df)
    res = abs(alpha_residual(alpha, p))
    if res > 1e-12 * max(p.delta, p.amp):
        raise ConvergenceError(f"alpha residual {res:.3e} too large at {p}")
    return float(alpha)


def effective(p: ModelParams) -> EffectiveModel:
    alpha = solve_alpha(p)
    dt = p.delta * bessel_i(0, p.amp * alpha / p.omega) - p.omega
    at = 2.0 * p.amp * (1.0 - alpha)
    rabi_sq = 0.25 * (dt * dt - 0.25 * at * at)
    return EffectiveModel(alpha, dt, at, rabi_sq, cmath.sqrt(rabi_sq))


def quasi_energies(p: ModelParams, n_shift: int = 0) -> tuple[complex, complex]:
    """``eps_pm = +-Omega_R + omega / 2 + n_shift * omega``.

    In the broken phase the two values are a conjugate pair about ``omega / 2``.
    """
    rabi = effective(p).rabi
    base = p.omega * (0.5 + n_shift)
    return base + rabi, base - rabi


def ep_condition(p: ModelParams) -> float:
    """Signed discriminant ``delta_tilde^2 - amp_tilde^2 / 4``; negative means broken."""
    return 4.0 * effective(p).rabi_sq


def _first_root_in_amp(g, a_max: float, n_scan: int, tol: float) -> Optional[float]:
    grid = np.linspace(0.0, a_max, n_scan + 1)
    vals = [g(a) for a in grid]
    if vals[0] == 0.0:
        return 0.0
    for i in range(n_scan):
        if vals[i + 1] == 0.0:
            return float(grid[i + 1])
        if vals[i] * vals[i + 1] < 0.0:
            return float(find_root_bracketed(g, float(grid[i]), float(grid[i + 1]), tol=tol))
    return None


def crossing_amplitude(
    delta: float,
    omega: float = 1.0,
    n: int = 1,
    a_max: float = 8.0,
    n_scan: int = 400,
    tol: float = 1e-12,
) -> Optional[float]:
    """Smallest ``A`` in ``[0, a_max * omega]`` with ``sqrt(delta_tilde^2 - amp_tilde^2/4) = 2 n omega``.

    ``n = 0`` gives the exceptional-point boundary. Returns None when the
    pre-scan finds no sign change.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    target = 4.0 * n * n * omega * omega

    def g(a):
        return ep_condition(ModelParams(delta, a, omega)) - target

    return _first_root_in_amp(g, a_max * omega, n_scan, tol)


def ep_boundary(delta: float, omega: float = 1.0, a_max: float = 8.0, n_scan: int = 400) -> Optional[float]:
    """Coupling at which the effective pair coalesces (first zero of the discriminant)."""
    return crossing_amplitude(delta, omega, 0, a_max=a_max, n_scan=n_scan)


def crossing_amplitude_small_a(delta: float, omega: float = 1.0, n: int = 1) -> Optional[float]:
    """Leading small-``A`` estimate ``((delta + omega)/delta) sqrt((delta - omega)^2 - 4 n^2 omega^2)``.

    None when the radicand is negative.
    """
    rad = (delta - omega) ** 2 - 4.0 * n * n * omega * omega
    if rad < 0.0 or delta <= 0.0:
        return None
    return (delta + omega) / delta * math.sqrt(rad)
