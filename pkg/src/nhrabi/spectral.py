"""Fourier spectra of population series, peak picking and peak labels."""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from .dynamics import TimeSeries
from .effective_model import EffectiveModel
from .numerics.dft import dft_magnitude


@dataclass(frozen=True)
class Peak:
    frequency: float  # units of omega
    magnitude: float
    label: Optional[str] = None


@dataclass
class PeakSet:
    peaks: list = field(default_factory=list)

    def __len__(self):
        return len(self.peaks)

    def __iter__(self):
        return iter(self.peaks)

    @property
    def frequencies(self) -> np.ndarray:
        return np.array([pk.frequency for pk in self.peaks])

    @property
    def labels(self) -> list:
        return [pk.label for pk in self.peaks]

    def to_dict(self) -> list:
        return [{"nu_over_omega": pk.frequency, "magnitude": pk.magnitude, "label": pk.label} for pk in self.peaks]


def fourier_spectrum(ts: TimeSeries, detrend_exponential: bool = False, window: str = "rect"):
    """One-sided magnitude spectrum of ``P_e`` with frequencies in units of omega.

    With ``t`` in field periods a component ``cos(W t_phys)`` oscillates
    ``W / omega`` times per period, so the cyclic frequency axis of the DFT
    already reads as angular frequency over omega.
    ``detrend_exponential`` first subtracts ``c exp(b t)``, for growing series
    in the broken phase: ``b`` is the slope of ``log P_e`` and ``c`` the linear
    least-squares amplitude for that rate.
    """
    pe = np.asarray(ts.pe, dtype=float)
    if detrend_exponential:
        b, _ = np.polyfit(ts.t, np.log(np.maximum(pe, 1e-300)), 1)
        env = np.exp(b * (ts.t - ts.t[-1]))
        pe = pe - (pe @ env) / (env @ env) * env
    return dft_magnitude(pe, ts.dt, t=ts.t, window=window)


def extract_peaks(freqs, mags, rel_threshold: float = 0.05) -> PeakSet:
    """Local maxima at or above ``rel_threshold`` of the largest magnitude.

    Positions and heights are refined by a parabola through the peak bin and
    its two neighbours.
    """
    if not 0.0 < rel_threshold < 1.0:
        raise ValueError("rel_threshold must lie in (0, 1)")
    f = np.asarray(freqs, dtype=float)
    m = np.asarray(mags, dtype=float)
    if m.size < 3:
        return PeakSet()
    top = m.max()
    if not top > 0.0:
        return PeakSet()
    df = f[1] - f[0]
    peaks = []
    for i in range(1, m.size - 1):
        a, b, c = m[i - 1], m[i], m[i + 1]
        if b > a and b >= c and b >= rel_threshold * top:
            denom = a - 2.0 * b + c
            delta = 0.5 * (a - c) / denom if denom != 0.0 else 0.0
            peaks.append(Peak(float(f[i] + delta * df), float(b - 0.25 * (a - c) * delta)))
    return PeakSet(peaks)


def _candidate_label(k: int, sign: int) -> str:
    if sign == 0:
        return f"{2 * k}*omega" if k else ""
    if k == 0:
        return "2*Omega_R"
    op = "+" if sign > 0 else "-"
    return f"{2 * k}*omega{op}2*Omega_R"


def candidate_frequencies(em: EffectiveModel, max_n: int = 2, omega: float = 1.0) -> list:
    """``(label, |2 k omega +- 2 m Omega_R| / omega)`` for ``k = 0..max_n``, ``m = 0, 1``, nonzero."""
    rabi = float(np.real(em.rabi))
    out = []
    for k in range(max_n + 1):
        for sign in (0, 1, -1):
            if k == 0 and sign < 0:
                continue  # same magnitude as +2 Omega_R
            value = abs(2.0 * k * omega + 2.0 * sign * rabi) / omega
            if value == 0.0:
                continue
            label = _candidate_label(k, sign)
            if k > 0 and sign < 0 and 2.0 * k * omega < 2.0 * rabi:
                label = f"2*Omega_R-{2 * k}*omega"
            out.append((label, value))
    return out


def label_peaks(ps: PeakSet, em: EffectiveModel, max_n: int = 2, tol: float = 0.05, omega: float = 1.0) -> PeakSet:
    """Give each peak the label of the nearest candidate within ``tol`` (units of omega).

    Ties go to the candidate listed first. Needs a real Rabi frequency.
    """
    if abs(np.imag(em.rabi)) > 0.0:
        raise ValueError("peak labels need the unbroken phase (real Omega_R)")
    cands = candidate_frequencies(em, max_n, omega)
    out = []
    for pk in ps:
        best = None
        for label, value in cands:
            d = abs(pk.frequency - value)
            if d <= tol and (best is None or d < best[0]):
                best = (d, label)
        out.append(replace(pk, label=best[1] if best else None))
    return PeakSet(out)


def magnitude_at(freqs, mags, nu: float) -> float:
    """Largest magnitude within one bin of ``nu``."""
    f = np.asarray(freqs)
    m = np.asarray(mags)
    df = f[1] - f[0]
    sel = np.abs(f - nu) <= df
    return float(m[sel].max()) if np.any(sel) else 0.0
