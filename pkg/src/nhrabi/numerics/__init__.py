"""Numerical kernels: Bessel functions, root finding, eigenvalues, ODE, DFT."""
from .bessel import bessel_i, bessel_i_orders
from .dft import dft_magnitude
from .linalg import eig_complex, eig_tridiagonal_real, eig_tridiagonal_symmetric
from .ode import Trajectory, integrate_ode
from .roots import find_root_bracketed, golden_section_max

__all__ = [
    "bessel_i",
    "bessel_i_orders",
    "dft_magnitude",
    "eig_complex",
    "eig_tridiagonal_real",
    "eig_tridiagonal_symmetric",
    "Trajectory",
    "integrate_ode",
    "find_root_bracketed",
    "golden_section_max",
]
