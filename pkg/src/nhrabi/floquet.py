"""Truncated Floquet Hamiltonians, quasi-energy spectra and PT phase scans.

Basis states are ``|s, m>`` with ``s = +/-`` the bare qubit level and ``m`` the
Fourier index, ``m = -N .. N``. The Floquet Hamiltonian has diagonal
``s delta / 2 + m omega`` and couples ``|s, m>`` to ``|-s, m +- 1>`` with
``i A / 4``. Floquet parity ``-sigma_z (-1)^m`` splits it into two
tridiagonal blocks on the chains

    odd:  ... |-, -1>, |+, 0>, |-, 1>, ...
    even: ... |+, -1>, |-, 0>, |+, 1>, ...
"""
from __future__ import annotations

import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

import numpy as np

from .effective_model import ModelParams
from .numerics.linalg import eig_tridiagonal_real, eig_tridiagonal_symmetric

log = logging.getLogger(__name__)

ODD, EVEN = "odd", "even"
_PARITY_SIGN = {ODD: 1.0, EVEN: -1.0}


@dataclass(frozen=True)
class FloquetConfig:
    n_harmonics: int = 64
    hermitian_mode: bool = False
    broken_threshold: float = 1e-8
    edge_discard_fraction: float = 0.25

    def __post_init__(self):
        if int(self.n_harmonics) != self.n_harmonics or self.n_harmonics < 8:
            raise ValueError(f"n_harmonics must be an integer >= 8, got {self.n_harmonics}")
        if not self.broken_threshold > 0:
            raise ValueError("broken_threshold must be positive")
        if not 0.0 <= self.edge_discard_fraction < 0.5:
            raise ValueError("edge_discard_fraction must lie in [0, 0.5)")

    @property
    def block_dim(self) -> int:
        return 2 * self.n_harmonics + 1


@dataclass
class QuasiSpectrum:
    """Eigenvalues of both parity blocks, odd block first.

    ``folded`` maps real parts into ``[-omega/2, omega/2)``; ``kept_mask`` marks
    the eigenvalues closest to zero (by ``|Re raw|``), away from the
    truncation edges.
    """

    raw: np.ndarray
    parity: np.ndarray
    folded: np.ndarray
    kept_mask: np.ndarray
    n_harmonics: int
    omega: float

    @property
    def kept(self) -> np.ndarray:
        return self.raw[self.kept_mask]

    @property
    def max_imag(self) -> float:
        return float(np.max(np.abs(self.raw[self.kept_mask].imag)))


@dataclass
class PhaseGrid:
    delta_axis: np.ndarray  # delta / omega
    amp_axis: np.ndarray  # A / omega
    max_imag: np.ndarray  # (n_delta, n_amp), units of omega
    broken: np.ndarray
    threshold: float
    errors: list = field(default_factory=list)  # (i, j, message)


def _coupling(p: ModelParams, cfg: FloquetConfig) -> complex:
    return 0.25 * p.amp if cfg.hermitian_mode else 0.25j * p.amp


def _parity_diagonal(p: ModelParams, parity: str, n: int) -> np.ndarray:
    k = np.arange(-n, n + 1)
    sign = np.where(k % 2 == 0, 1.0, -1.0)
    return _PARITY_SIGN[parity] * sign * 0.5 * p.delta + k * p.omega


def build_full(p: ModelParams, cfg: FloquetConfig) -> np.ndarray:
    """Full matrix of dimension ``2 (2N + 1)`` on ``(|+,-N>, |-,-N>, |+,-N+1>, ...)``."""
    n = cfg.n_harmonics
    m = np.arange(-n, n + 1)
    dim = 2 * m.size
    h = np.zeros((dim, dim), dtype=complex)
    h[2 * (m + n), 2 * (m + n)] = 0.5 * p.delta + m * p.omega
    h[2 * (m + n) + 1, 2 * (m + n) + 1] = -0.5 * p.delta + m * p.omega
    g = _coupling(p, cfg)
    for j in range(m.size - 1):
        plus, minus = 2 * j, 2 * j + 1
        nxt_plus, nxt_minus = 2 * (j + 1), 2 * (j + 1) + 1
        h[plus, nxt_minus] = h[nxt_minus, plus] = g
        h[minus, nxt_plus] = h[nxt_plus, minus] = g
    if cfg.hermitian_mode:
        h = 0.5 * (h + h.conj().T)
    return h


def build_parity(p: ModelParams, parity: str, cfg: FloquetConfig) -> np.ndarray:
    """Tridiagonal parity block of dimension ``2N + 1`` (constant off-diagonal ``i A / 4``)."""
    if parity not in _PARITY_SIGN:
        raise ValueError(f"parity must be 'odd' or 'even', got {parity!r}")
    d = _parity_diagonal(p, parity, cfg.n_harmonics)
    g = _coupling(p, cfg)
    return np.diag(d.astype(complex)) + np.diag(np.full(d.size - 1, g), 1) + np.diag(np.full(d.size - 1, g), -1)


def _block_eigenvalues(p: ModelParams, parity: str, cfg: FloquetConfig) -> np.ndarray:
    d = _parity_diagonal(p, parity, cfg.n_harmonics)
    off = np.full(d.size - 1, 0.25 * p.amp)
    if cfg.hermitian_mode:
        ev = eig_tridiagonal_symmetric(d, off)
    else:
        # diag(i^k) similarity turns the i A/4 couplings into -A/4 (upper) and
        # +A/4 (lower): a real matrix, so complex eigenvalues pair up exactly
        ev = eig_tridiagonal_real(d, -off, off)
    return ev[np.lexsort((ev.imag, ev.real))]


def fold(values, omega: float = 1.0) -> np.ndarray:
    """Map real parts into ``[-omega/2, omega/2)``."""
    z = np.asarray(values, dtype=complex)
    re = z.real - omega * np.floor(z.real / omega + 0.5)
    return re + 1j * z.imag


def spectrum(p: ModelParams, cfg: Optional[FloquetConfig] = None) -> QuasiSpectrum:
    cfg = cfg or FloquetConfig()
    odd = _block_eigenvalues(p, ODD, cfg)
    even = _block_eigenvalues(p, EVEN, cfg)
    raw = np.concatenate([odd, even])
    parity = np.array([ODD] * odd.size + [EVEN] * even.size)
    n_keep = int(round((1.0 - cfg.edge_discard_fraction) * raw.size))
    order = np.argsort(np.abs(raw.real), kind="stable")
    kept = np.zeros(raw.size, dtype=bool)
    kept[order[:n_keep]] = True
    return QuasiSpectrum(raw, parity, fold(raw, p.omega), kept, cfg.n_harmonics, p.omega)


def hermitian_spectrum(p: ModelParams, cfg: Optional[FloquetConfig] = None) -> QuasiSpectrum:
    """Spectrum of the Hermitian counterpart (real coupling ``A / 4``)."""
    cfg = cfg or FloquetConfig()
    return spectrum(p, replace(cfg, hermitian_mode=True))


def classify(p: ModelParams, cfg: Optional[FloquetConfig] = None) -> tuple[bool, float]:
    """``(broken, max |Im|)`` over the kept eigenvalues."""
    cfg = cfg or FloquetConfig()
    mi = spectrum(p, cfg).max_imag
    return mi > cfg.broken_threshold, mi


def _scan_row(args):
    delta, amps, omega, cfg = args
    out = np.empty(len(amps))
    errs = []
    for j, a in enumerate(amps):
        try:
            out[j] = classify(ModelParams(delta * omega, a * omega, omega), cfg)[1]
        except Exception as exc:  # recorded per cell, scan continues
            out[j] = np.nan
            errs.append((j, f"{type(exc).__name__}: {exc}"))
    return out, errs


def _axis(rng: Sequence[float], num: int) -> np.ndarray:
    lo, hi = float(rng[0]), float(rng[1])
    if not hi > lo:
        raise ValueError(f"empty range [{lo}, {hi}]")
    if num < 2:
        raise ValueError("resolution must be at least 2 per axis")
    return np.linspace(lo, hi, num)


def scan_phase(
    delta_range: Sequence[float],
    amp_range: Sequence[float],
    resolution,
    cfg: Optional[FloquetConfig] = None,
    omega: float = 1.0,
    workers: Optional[int] = 1,
) -> PhaseGrid:
    """Classify every cell of a ``(delta/omega, A/omega)`` grid.

    ``resolution`` is a point count per axis, or a ``(n_delta, n_amp)`` pair.
    Rows (fixed delta) are distributed over ``workers`` processes; results are
    gathered by index, so the output does not depend on scheduling.
    """
    cfg = cfg or FloquetConfig()
    nd, na = (resolution, resolution) if np.isscalar(resolution) else resolution
    d_axis = _axis(delta_range, int(nd))
    a_axis = _axis(amp_range, int(na))
    tasks = [(float(d), a_axis, omega, cfg) for d in d_axis]
    workers = workers or os.cpu_count() or 1
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_scan_row, tasks))
    else:
        rows = [_scan_row(t) for t in tasks]

    max_imag = np.vstack([r[0] for r in rows])
    errors = []
    for i, (_, errs) in enumerate(rows):
        for j, msg in errs:
            log.error("cell delta=%g amp=%g failed: %s", d_axis[i], a_axis[j], msg)
            errors.append((i, j, msg))
    with np.errstate(invalid="ignore"):
        broken = np.nan_to_num(max_imag, nan=0.0) > cfg.broken_threshold
    return PhaseGrid(d_axis, a_axis, max_imag, broken, cfg.broken_threshold, errors)


def first_broken_amp(grid: PhaseGrid) -> list:
    """Per delta row, the smallest amplitude whose cell is broken (None if none is)."""
    out = []
    for row in grid.broken:
        idx = np.flatnonzero(row)
        out.append(float(grid.amp_axis[idx[0]]) if idx.size else None)
    return out
