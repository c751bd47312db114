"""Adaptive Dormand-Prince 5(4) integrator with continuous output.

The stepping loop is a single function compiled with numba when the
right-hand side is itself a compiled function, and run as plain Python
otherwise. Right-hand sides have the signature ``rhs(t, y, params)`` with
``y`` a complex vector and ``params`` a float array.
"""
from __future__ import annotations

from typing import Callable

import numpy as np

from .._jit import HAVE_NUMBA, is_compiled, njit
from ..errors import IntegrationError

# Butcher tableau
C2, C3, C4, C5 = 1 / 5, 3 / 10, 4 / 5, 8 / 9
A21 = 1 / 5
A31, A32 = 3 / 40, 9 / 40
A41, A42, A43 = 44 / 45, -56 / 15, 32 / 9
A51, A52, A53, A54 = 19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729
A61, A62, A63, A64, A65 = 9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656
B1, B3, B4, B5, B6 = 35 / 384, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84

# fifth-order minus embedded fourth-order weights, stages 1..7
ERR = np.array([-71 / 57600, 0.0, 71 / 16695, -71 / 1920, 17253 / 339200, -22 / 525, 1 / 40])

# continuous extension: y(t0 + s h) = y0 + h * sum_j K_j * (P[j] @ [s, s^2, s^3, s^4])
DENSE = np.array(
    [
        [1.0, -8048581381 / 2820520608, 8663915743 / 2820520608, -12715105075 / 11282082432],
        [0.0, 0.0, 0.0, 0.0],
        [0.0, 131558114200 / 32700410799, -68118460800 / 10900136933, 87487479700 / 32700410799],
        [0.0, -1754552775 / 470086768, 14199869525 / 1410260304, -10690763975 / 1880347072],
        [0.0, 127303824393 / 49829197408, -318862633887 / 49829197408, 701980252875 / 199316789632],
        [0.0, -282668133 / 205662961, 2019193451 / 616988883, -1453857185 / 822651844],
        [0.0, 40617522 / 29380423, -110615467 / 29380423, 69997945 / 29380423],
    ]
)

_OK, _UNDERFLOW, _TOO_MANY, _NONFINITE = 0, 1, 2, 3


def _dopri5_core(rhs, params, y0, t0, t1, rtol, atol, h0, max_steps):
    n = y0.shape[0]
    cap = 256
    ts = np.empty(cap)
    ys = np.empty((cap, n), dtype=np.complex128)
    ks = np.empty((cap, 7, n), dtype=np.complex128)
    ts[0] = t0
    ys[0] = y0
    count = 0

    span = t1 - t0
    t = t0
    y = y0.copy()
    k1 = rhs(t, y, params)
    h = h0
    status = _OK
    steps = 0
    while t < t1:
        if steps >= max_steps:
            status = _TOO_MANY
            break
        if h < 1e-13 * max(abs(t), 1.0):
            status = _UNDERFLOW
            break
        last = False
        if t + h >= t1:
            h = t1 - t
            last = True
        k2 = rhs(t + C2 * h, y + h * (A21 * k1), params)
        k3 = rhs(t + C3 * h, y + h * (A31 * k1 + A32 * k2), params)
        k4 = rhs(t + C4 * h, y + h * (A41 * k1 + A42 * k2 + A43 * k3), params)
        k5 = rhs(t + C5 * h, y + h * (A51 * k1 + A52 * k2 + A53 * k3 + A54 * k4), params)
        k6 = rhs(t + h, y + h * (A61 * k1 + A62 * k2 + A63 * k3 + A64 * k4 + A65 * k5), params)
        y_new = y + h * (B1 * k1 + B3 * k3 + B4 * k4 + B5 * k5 + B6 * k6)
        k7 = rhs(t + h, y_new, params)
        steps += 1

        err_sq = 0.0
        finite = True
        frac = h / span
        for i in range(n):
            e = h * (ERR[0] * k1[i] + ERR[2] * k3[i] + ERR[3] * k4[i] + ERR[4] * k5[i]
                     + ERR[5] * k6[i] + ERR[6] * k7[i])
            scale = (atol + rtol * max(abs(y[i]), abs(y_new[i]))) * frac
            r = abs(e) / scale
            if not np.isfinite(r):
                finite = False
            err_sq += r * r
        if not finite:
            status = _NONFINITE
            break
        err = np.sqrt(err_sq / n)

        if err <= 1.0:
            if count + 1 >= cap:
                cap *= 2
                ts_new = np.empty(cap)
                ys_new = np.empty((cap, n), dtype=np.complex128)
                ks_new = np.empty((cap, 7, n), dtype=np.complex128)
                ts_new[: count + 1] = ts[: count + 1]
                ys_new[: count + 1] = ys[: count + 1]
                ks_new[:count] = ks[:count]
                ts, ys, ks = ts_new, ys_new, ks_new
            ks[count, 0] = k1
            ks[count, 1] = k2
            ks[count, 2] = k3
            ks[count, 3] = k4
            ks[count, 4] = k5
            ks[count, 5] = k6
            ks[count, 6] = k7
            t = t1 if last else t + h
            y = y_new
            k1 = k7
            count += 1
            ts[count] = t
            ys[count] = y
            factor = 5.0 if err == 0.0 else min(5.0, 0.9 * err ** -0.25)
        else:
            factor = max(0.2, 0.9 * err ** -0.25)
        h = h * factor
    return ts[: count + 1].copy(), ys[: count + 1].copy(), ks[:count].copy(), status


_dopri5_py = _dopri5_core
_dopri5_jit = njit(_dopri5_core) if HAVE_NUMBA else _dopri5_core


class Trajectory:
    """Dense-output sampler over the accepted integration steps."""

    def __init__(self, t_steps: np.ndarray, y_steps: np.ndarray, k_steps: np.ndarray):
        self.t_steps = t_steps
        self.y_steps = y_steps
        self._k = k_steps

    @property
    def t0(self) -> float:
        return float(self.t_steps[0])

    @property
    def t1(self) -> float:
        return float(self.t_steps[-1])

    @property
    def n_steps(self) -> int:
        return int(self._k.shape[0])

    def __call__(self, t) -> np.ndarray:
        """State at time(s) ``t``; shape ``(len(t), n)`` for array input."""
        t_arr = np.atleast_1d(np.asarray(t, dtype=float))
        if np.any(t_arr < self.t0) or np.any(t_arr > self.t1):
            raise ValueError(f"t outside integrated range [{self.t0}, {self.t1}]")
        idx = np.searchsorted(self.t_steps, t_arr, side="right") - 1
        idx = np.clip(idx, 0, self.n_steps - 1)
        h = self.t_steps[idx + 1] - self.t_steps[idx]
        s = (t_arr - self.t_steps[idx]) / h
        powers = np.stack([s, s**2, s**3, s**4], axis=1)  # (m, 4)
        weights = powers @ DENSE.T  # (m, 7)
        incr = np.einsum("mj,mjn->mn", weights, self._k[idx])
        out = self.y_steps[idx] + h[:, None] * incr
        # exact values at step endpoints
        hit = np.isin(t_arr, self.t_steps)
        if np.any(hit):
            j = np.searchsorted(self.t_steps, t_arr[hit])
            out[hit] = self.y_steps[j]
        return out if np.ndim(t) else out[0]

    def sample(self, n_samples: int) -> tuple[np.ndarray, np.ndarray]:
        """Uniform resampling on ``n_samples`` points including both ends."""
        t = np.linspace(self.t0, self.t1, n_samples)
        return t, self(t)


def integrate_ode(
    rhs: Callable,
    state0,
    t0: float,
    t1: float,
    tol: float = 1e-10,
    params=None,
    atol: float | None = None,
    max_steps: int = 10_000_000,
) -> Trajectory:
    """Integrate ``y' = rhs(t, y, params)`` from ``t0`` to ``t1``.

    Error control is per unit step: a step of length ``h`` is accepted when
    its embedded error estimate is below ``tol * h / (t1 - t0)`` (mixed
    relative/absolute weights, ``atol`` defaulting to ``tol``), so the local
    error estimates summed over the whole interval stay below ``tol``.
    A numba-compiled ``rhs`` runs the compiled stepper.
    """
    if not t1 > t0:
        raise ValueError("t1 must exceed t0")
    if not tol > 0:
        raise ValueError("tol must be positive")
    y0 = np.atleast_1d(np.asarray(state0, dtype=np.complex128)).copy()
    p = np.zeros(0) if params is None else np.asarray(params, dtype=float)
    atol = tol if atol is None else atol
    h0 = min(1e-3 * (t1 - t0), 1e-2)
    core = _dopri5_jit if is_compiled(rhs) else _dopri5_py
    ts, ys, ks, status = core(rhs, p, y0, float(t0), float(t1), float(tol), float(atol), h0, int(max_steps))
    if status == _UNDERFLOW:
        raise IntegrationError(f"step size underflow at t={ts[-1]:.6g} (stiff or singular problem)")
    if status == _TOO_MANY:
        raise IntegrationError(f"step budget {max_steps} exhausted at t={ts[-1]:.6g}")
    if status == _NONFINITE:
        raise IntegrationError(f"non-finite state near t={ts[-1]:.6g}")
    return Trajectory(ts, ys, ks)
