import math

import numpy as np
import pytest

from nhrabi._jit import njit
from nhrabi.errors import (
    BracketError,
    ConvergenceError,
    IntegrationError,
    RangeError,
    SamplingError,
    SearchError,
    ShapeError,
)
from nhrabi.numerics import (
    bessel_i,
    bessel_i_orders,
    dft_magnitude,
    eig_complex,
    find_root_bracketed,
    golden_section_max,
    integrate_ode,
)

scipy_special = pytest.importorskip("scipy.special")


# --- Bessel -------------------------------------------------------------------


def test_bessel_trivial_values():
    assert bessel_i(0, 0.0) == 1.0
    assert bessel_i(1, 0.0) == 0.0
    assert bessel_i(7, 0.0) == 0.0


def test_bessel_i0_of_one_matches_series_oracle():
    # power series summed in 40-digit arithmetic
    assert bessel_i(0, 1.0) == pytest.approx(1.2660658777520084, rel=1e-15)


@pytest.mark.parametrize("x", [1e-6, 0.3, 1.0, 5.0, 9.999, 10.0, 10.001, 25.0, 50.0])
def test_bessel_against_scipy(x):
    n = np.arange(0, 201)
    ref = scipy_special.iv(n, x)
    got = bessel_i_orders(200, x)
    mask = ref > 1e-300
    assert np.max(np.abs(got[mask] - ref[mask]) / ref[mask]) < 1e-12
    for k in (0, 1, 2, 40, 200):
        if ref[k] > 1e-300:
            assert bessel_i(k, x) == pytest.approx(ref[k], rel=1e-12)


def test_bessel_large_argument_near_guard():
    assert bessel_i(3, 699.0) == pytest.approx(scipy_special.iv(3, 699.0), rel=1e-12)


@pytest.mark.parametrize("n,x", [(-1, 1.0), (201, 1.0), (0, 700.0), (0, -0.1), (0, float("nan"))])
def test_bessel_range_errors(n, x):
    with pytest.raises(RangeError):
        bessel_i(n, x)


@pytest.mark.parametrize("x", [0.5, 1.0, 5.0])
def test_bessel_recurrence(x):
    for n in range(1, 21):
        lhs = bessel_i(n - 1, x) - bessel_i(n + 1, x)
        rhs = 2 * n / x * bessel_i(n, x)
        assert lhs == pytest.approx(rhs, rel=1e-10)


# --- roots --------------------------------------------------------------------


def test_root_linear():
    assert find_root_bracketed(lambda x: x - 0.5, 0.0, 1.0, 1e-12) == pytest.approx(0.5, abs=1e-12)


def test_root_sqrt2():
    assert find_root_bracketed(lambda x: x * x - 2, 1.0, 2.0, 1e-12) == pytest.approx(1.4142135623730951, abs=1e-12)


def test_root_with_derivative():
    r = find_root_bracketed(lambda x: x**3 - x - 1, 1.0, 2.0, 1e-14, df=lambda x: 3 * x * x - 1)
    assert abs(r**3 - r - 1) < 1e-13


def test_root_alpha_small_amplitude_limit():
    # alpha residual at delta = 2.5, A = 0.01 (omega = 1); limit 1/3.5 as A -> 0
    def f(a):
        return 2.5 * bessel_i(1, 0.01 * a) - 0.005 * (1 - a)

    root = find_root_bracketed(f, 0.0, 1.0, 1e-14)
    assert root == pytest.approx(0.28571407746810630, abs=1e-13)  # 40-digit fixed-point oracle
    assert root == pytest.approx(1 / 3.5, abs=1e-4)


def test_root_errors():
    with pytest.raises(BracketError):
        find_root_bracketed(lambda x: x * x + 1, -1.0, 1.0)
    with pytest.raises(BracketError):
        find_root_bracketed(lambda x: x, 1.0, 0.0)
    with pytest.raises(ConvergenceError):
        # a step function gives no usable slope, so only bisection applies
        find_root_bracketed(lambda x: math.copysign(1.0, x - 0.3), 0.0, 1.0, tol=1e-12, max_iter=3)


def test_golden_section():
    x, fx = golden_section_max(lambda x: -((x - 0.3) ** 2), 0.0, 1.0, tol=1e-9)
    assert x == pytest.approx(0.3, abs=1e-8)
    with pytest.raises(SearchError):
        golden_section_max(lambda x: x, 1.0, 0.0)


# --- eigenvalues --------------------------------------------------------------


def test_eig_diagonal():
    ev = np.sort_complex(eig_complex(np.diag([1.0, 2.0, 3.0])))
    assert np.allclose(ev, [1, 2, 3])


def test_eig_pauli_like():
    ev = eig_complex([[0, 1j], [1j, 0]])
    ev = ev[np.argsort(ev.imag)]
    assert np.allclose(ev, [-1j, 1j], atol=1e-14)


def test_eig_effective_block():
    # H = (D/2) sz + i (A/4) sx with D = A = 1: eigenvalues +- sqrt(1 - 1/4) / 2
    h = np.array([[0.5, 0.25j], [0.25j, -0.5]])
    ev = np.sort(eig_complex(h).real)
    assert np.allclose(ev, [-0.4330127018922193, 0.4330127018922193], atol=1e-14)


def test_eig_residual(rng):
    m = rng.normal(size=(40, 40)) + 1j * rng.normal(size=(40, 40))
    ev = eig_complex(m)
    _, vecs = np.linalg.eig(m)
    # every eigenvalue solves det(M - l) = 0 to residual level
    for lam in ev:
        s = np.linalg.svd(m - lam * np.eye(40), compute_uv=False)
        assert s[-1] / np.linalg.norm(m, 2) < 1e-10


def test_eig_errors():
    with pytest.raises(ShapeError):
        eig_complex(np.zeros((2, 3)))
    with pytest.raises(ShapeError):
        eig_complex(np.zeros((0, 0)))
    with pytest.raises(ShapeError):
        eig_complex([[np.nan]])


# --- ODE ----------------------------------------------------------------------


@njit
def _rotate(t, y, p):
    return -1j * y


@njit
def _zero(t, y, p):
    return 0.0 * y


@njit
def _hermitian_drive(t, y, p):
    g = 0.5 * p[1] * math.cos(t)
    out = np.empty(2, dtype=np.complex128)
    out[0] = -1j * (0.5 * p[0] * y[0] + g * y[1])
    out[1] = -1j * (-0.5 * p[0] * y[1] + g * y[0])
    return out


def test_ode_phase_rotation():
    tr = integrate_ode(_rotate, [1.0], 0.0, math.pi, tol=1e-10)
    assert abs(tr(math.pi)[0] + 1) < 1e-10


def test_ode_null_dynamics():
    tr = integrate_ode(_zero, [0.0, 1.0], 0.0, 5.0, tol=1e-10)
    _, y = tr.sample(11)
    assert np.all(y == np.array([0.0, 1.0]))


def test_ode_hermitian_norm_conservation():
    tr = integrate_ode(_hermitian_drive, [0.0, 1.0], 0.0, 40 * math.pi, tol=1e-10, params=[2.5, 1.0])
    _, y = tr.sample(2001)
    assert np.max(np.abs(np.sum(np.abs(y) ** 2, axis=1) - 1)) < 1e-9


def test_ode_long_run_modulus():
    tol = 1e-10
    tr = integrate_ode(_rotate, [1.0], 0.0, 200 * math.pi, tol=tol)
    t, y = tr.sample(5001)
    assert np.max(np.abs(np.abs(y[:, 0]) - 1)) < 10 * tol


def test_ode_python_rhs_matches_compiled():
    f = lambda t, y, p: -1j * y  # noqa: E731
    a = integrate_ode(f, [1.0], 0.0, 3.0, tol=1e-9)
    b = integrate_ode(_rotate, [1.0], 0.0, 3.0, tol=1e-9)
    assert np.allclose(a.sample(7)[1], b.sample(7)[1], atol=1e-12)


def test_ode_dense_output_exact_at_steps():
    tr = integrate_ode(_rotate, [1.0], 0.0, 2.0, tol=1e-8)
    assert np.array_equal(tr(tr.t_steps), tr.y_steps)
    with pytest.raises(ValueError):
        tr(2.5)


def test_ode_errors():
    with pytest.raises(ValueError):
        integrate_ode(_rotate, [1.0], 1.0, 0.0)
    with pytest.raises(IntegrationError):
        integrate_ode(lambda t, y, p: y * y, [1.0], 0.0, 2.0, tol=1e-8)  # blows up at t = 1
    with pytest.raises(IntegrationError):
        integrate_ode(_rotate, [1.0], 0.0, 100.0, tol=1e-10, max_steps=10)


# --- DFT ----------------------------------------------------------------------


def test_dft_pure_tone():
    t = np.arange(1024) * (16 / 1024)
    f, m = dft_magnitude(np.cos(2 * np.pi * t), t[1] - t[0])
    assert f[np.argmax(m)] == pytest.approx(1.0)
    assert np.sum(m > 0.01 * m.max()) == 1


def test_dft_constant_is_zero():
    _, m = dft_magnitude(np.full(64, 3.7), 0.1)
    assert np.max(m) < 1e-12


def test_dft_two_tones_ratio():
    t = np.arange(2048) * (32 / 2048)
    x = np.cos(2 * np.pi * t) + 0.5 * np.cos(2 * np.pi * 2.5 * t)
    f, m = dft_magnitude(x, t[1] - t[0])
    m1 = m[np.argmin(np.abs(f - 1.0))]
    m2 = m[np.argmin(np.abs(f - 2.5))]
    # bin-centred tones: each magnitude is amplitude * window length / 2
    assert m1 == pytest.approx(16.0, rel=1e-9)
    assert m1 / m2 == pytest.approx(2.0, rel=0.05)


def test_dft_matches_fft(rng):
    x = rng.normal(size=777)
    f1, m1 = dft_magnitude(x, 0.3)
    f2, m2 = dft_magnitude(x, 0.3, use_fft=True)
    assert np.allclose(f1, f2)
    assert np.allclose(m1, m2, rtol=1e-10, atol=1e-12)


def test_dft_hann_window_runs():
    t = np.arange(512) * 0.05
    f, m = dft_magnitude(np.sin(2 * np.pi * 2 * t), 0.05, window="hann")
    assert f[np.argmax(m)] == pytest.approx(2.0, abs=f[1])


def test_dft_errors():
    with pytest.raises(SamplingError):
        dft_magnitude([1.0], 0.1)
    with pytest.raises(SamplingError):
        dft_magnitude([1.0, 2.0, 3.0], 0.1, t=[0.0, 0.1, 0.3])
    with pytest.raises(SamplingError):
        dft_magnitude([1.0, np.nan], 0.1)
    with pytest.raises(ValueError):
        dft_magnitude([1.0, 2.0], 0.1, window="kaiser")
