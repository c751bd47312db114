import numpy as np
import pytest
from scipy.optimize import minimize_scalar

from nhrabi.bloch_siegert import (
    bs_sweep,
    default_bracket,
    rabi_sq,
    resonance_analytic,
    resonance_numeric,
    resonance_residual,
    resonance_series,
)
from nhrabi.errors import SearchError
from nhrabi.floquet import FloquetConfig

# frozen mpmath root of d(rabi_sq)/d(delta) = 0
RES_A1 = 1.0580800030648097454
RES_A5 = 1.6425277072096815024


def test_series_examples():
    assert resonance_series(0.0, order=2) == 1.0
    assert resonance_series(0.0, order=4) == 1.0
    assert resonance_series(1.0, order=2) == 1.0625
    assert resonance_series(1.0, order=4) == 1.0576171875
    assert round(resonance_series(1.0, order=4), 4) == 1.0576
    assert resonance_series(2.0, 2.0, 4) == pytest.approx(2.0 + 4 / 32 - 5 * 16 / (1024 * 8))
    with pytest.raises(ValueError):
        resonance_series(1.0, order=3)


def test_series_even_and_increasing_near_zero():
    a = np.linspace(0.0, 1.0, 11)
    s = np.array([resonance_series(x) for x in a])
    assert np.all(np.diff(s) > 0)
    assert resonance_series(-0.7) == resonance_series(0.7)


def test_analytic_zero_coupling():
    assert resonance_analytic(0.0) == 1.0
    assert resonance_analytic(1e-4) == pytest.approx(1.0, abs=1e-8)


def test_analytic_frozen_values():
    assert resonance_analytic(1.0) == pytest.approx(RES_A1, abs=1e-10)
    assert resonance_analytic(5.0) == pytest.approx(RES_A5, abs=1e-10)


def test_analytic_vs_series4_at_one():
    assert abs(resonance_analytic(1.0) - resonance_series(1.0, order=4)) < 1e-3


def test_analytic_is_minimum_of_rabi_sq():
    for amp in (1.0, 3.0, 5.0):
        lo, hi = default_bracket(amp)
        opt = minimize_scalar(lambda d: rabi_sq(d, amp), bounds=(lo, hi), method="bounded", options={"xatol": 1e-10})
        assert resonance_analytic(amp) == pytest.approx(opt.x, abs=1e-6)


@pytest.mark.parametrize("amp", [0.5, 1.0, 2.0, 3.5, 5.0])
def test_analytic_stationary_by_finite_difference(amp):
    d = resonance_analytic(amp)
    h = 1e-5
    fd = (rabi_sq(d + h, amp) - rabi_sq(d - h, amp)) / (2 * h)
    assert abs(fd) < 1e-8


def test_residual_matches_finite_difference():
    for d, amp in ((0.8, 1.0), (1.3, 2.5), (2.0, 4.0)):
        h = 1e-5
        fd = 4.0 * (rabi_sq(d + h, amp) - rabi_sq(d - h, amp)) / (2 * h)
        assert resonance_residual(d, amp) == pytest.approx(fd, rel=1e-6)


def test_series4_error_is_sixth_order():
    amps = np.linspace(0.2, 0.8, 7)
    ratio = np.array([(resonance_series(a) - resonance_analytic(a)) / a**6 for a in amps])
    assert np.all(np.abs(ratio) < 1e-3)
    assert np.ptp(ratio) < 0.2 * np.max(np.abs(ratio))


def test_analytic_even_in_amp():
    assert resonance_analytic(-2.3) == resonance_analytic(2.3)


def test_numeric_zero_coupling():
    assert resonance_numeric(0.0) == 1.0


def test_numeric_matches_series_at_one():
    assert resonance_numeric(1.0) == pytest.approx(1.0576, abs=5e-3)


def test_numeric_and_analytic_at_five():
    assert abs(resonance_numeric(5.0) - resonance_analytic(5.0)) < 0.05


@pytest.mark.parametrize("amp", [1.0, 3.0, 5.0])
def test_numeric_truncation_invariance(amp):
    a = resonance_numeric(amp, cfg=FloquetConfig(n_harmonics=64))
    b = resonance_numeric(amp, cfg=FloquetConfig(n_harmonics=80))
    assert abs(a - b) < 1e-4


def test_numeric_bracket_errors():
    with pytest.raises(SearchError):
        resonance_numeric(1.0, delta_bracket=(3.3, 3.6))
    with pytest.raises(SearchError):
        resonance_analytic(1.0, delta_bracket=(2.0, 2.5))


def test_sweep_full_range():
    rows = bs_sweep(np.linspace(0.0, 5.0, 11))
    assert rows[0].delta_res_numeric == rows[0].delta_res_analytic == 1.0
    assert rows[0].delta_res_series2 == rows[0].delta_res_series4 == 1.0
    for r in rows:
        assert r.error is None
        assert abs(r.delta_res_analytic - r.delta_res_numeric) < 0.05
        assert r.delta_res_numeric > 0 and r.delta_res_analytic > 0 and r.delta_res_series2 > 0
    dev2 = {r.amp: abs(r.delta_res_series2 - r.delta_res_numeric) for r in rows}
    assert all(v < 0.05 for a, v in dev2.items() if a <= 1.0)
    assert all(v > 0.05 for a, v in dev2.items() if a >= 2.0)


def test_series4_turns_negative_at_large_amp():
    assert resonance_series(5.0, order=4) < 0.0


def test_sweep_records_failures(monkeypatch):
    import nhrabi.bloch_siegert as bs

    def broken(*a, **k):
        raise SearchError("nope")

    monkeypatch.setattr(bs, "resonance_numeric", broken)
    rows = bs.bs_sweep([0.5, 1.0])
    assert all(r.delta_res_numeric is None and "nope" in r.error for r in rows)
    assert all(r.delta_res_analytic is not None for r in rows)
