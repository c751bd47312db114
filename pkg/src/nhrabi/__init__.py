"""Analytical, Floquet and dynamical analysis of a qubit driven by a cosine
field with purely imaginary (PT-symmetric) coupling,

    H(t) = (delta / 2) sigma_z + i (amp / 2) cos(omega t) sigma_x.
"""
from ._jit import BACKEND
from .effective_model import (
    EffectiveModel,
    ModelParams,
    crossing_amplitude,
    crossing_amplitude_small_a,
    effective,
    ep_boundary,
    ep_condition,
    quasi_energies,
    solve_alpha,
)
from .errors import NhrabiError

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "EffectiveModel",
    "ModelParams",
    "NhrabiError",
    "crossing_amplitude",
    "crossing_amplitude_small_a",
    "effective",
    "ep_boundary",
    "ep_condition",
    "quasi_energies",
    "solve_alpha",
]
