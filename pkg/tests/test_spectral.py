import numpy as np
import pytest

from nhrabi import effective
from nhrabi.dynamics import TimeSeries, evolve_closed_form, evolve_numeric, evolve_operator, evolve_rwa, rwa_frequency
from nhrabi.spectral import (
    Peak,
    PeakSet,
    candidate_frequencies,
    extract_peaks,
    fourier_spectrum,
    label_peaks,
    magnitude_at,
)

from conftest import POINT_A, POINT_B, POINT_C

T_END, N = 50.0, 4096
LABELS_A = {"2*Omega_R", "2*omega", "2*omega+2*Omega_R"}


@pytest.fixture(scope="module")
def series_a():
    return {
        "numeric": evolve_numeric(POINT_A, t_end=T_END, n_samples=N),
        "operator": evolve_operator(POINT_A, t_end=T_END, n_samples=N),
        "closed": evolve_closed_form(POINT_A, t_end=T_END, n_samples=N),
        "rwa": evolve_rwa(POINT_A, t_end=T_END, n_samples=N),
    }


@pytest.fixture(scope="module")
def series_b():
    return {
        "numeric": evolve_numeric(POINT_B, t_end=T_END, n_samples=N),
        "operator": evolve_operator(POINT_B, t_end=T_END, n_samples=N),
    }


def _peaks(ts, thr=0.05):
    return extract_peaks(*fourier_spectrum(ts), rel_threshold=thr)


def _tone(freqs, amps, n=4096, t_end=50.0):
    t = np.linspace(0.0, t_end, n)
    x = sum(a * np.cos(2 * np.pi * f * t) for f, a in zip(freqs, amps))
    return TimeSeries(t, x, "synthetic")


def test_pure_tone_bin_accuracy():
    ts = _tone([1.3793], [1.0])
    f, m = fourier_spectrum(ts, window="hann")
    ps = extract_peaks(f, m, 0.05)
    df = f[1] - f[0]
    assert len(ps) == 1
    assert abs(ps.peaks[0].frequency - 1.3793) < 0.1 * df


def test_two_tones_threshold():
    # on-bin tones, so the DFT magnitudes are exactly in the 2:1 ratio
    ts = _tone([0.8, 2.0], [1.0, 0.5], n=1001, t_end=50.0 * 1000 / 1001)
    f, m = fourier_spectrum(ts)
    direct = np.abs(np.fft.rfft(ts.pe - ts.pe.mean()))
    assert np.allclose(m / m.max(), direct[: m.size] / direct.max(), atol=1e-9)
    assert len(extract_peaks(f, m, 0.25)) == 2
    strong = extract_peaks(f, m, 0.6)
    assert len(strong) == 1 and strong.peaks[0].frequency == pytest.approx(0.8, abs=1e-9)


def test_constant_series_has_no_peaks():
    t = np.linspace(0.0, 10.0, 256)
    assert len(_peaks(TimeSeries(t, np.full(t.size, 0.3), "synthetic"))) == 0


def test_extract_peaks_validation():
    with pytest.raises(ValueError):
        extract_peaks([0, 1, 2], [0, 1, 0], 0.0)
    with pytest.raises(ValueError):
        extract_peaks([0, 1, 2], [0, 1, 0], 1.0)


def test_peakset_invariants(series_a):
    ps = _peaks(series_a["numeric"])
    assert np.all(np.diff(ps.frequencies) > 0)
    assert all(pk.magnitude > 0 for pk in ps)


def test_rwa_single_peak(series_a):
    ps = _peaks(series_a["rwa"])
    assert len(ps) == 1
    f, _ = fourier_spectrum(series_a["rwa"])
    assert abs(ps.peaks[0].frequency - abs(rwa_frequency(POINT_A))) < f[1] - f[0]


def test_point_a_numeric_three_labelled_peaks(series_a):
    ps = _peaks(series_a["numeric"])
    assert len(ps) == 3
    assert set(label_peaks(ps, effective(POINT_A)).labels) == LABELS_A


def test_point_a_operator_three_labelled_peaks(series_a):
    ps = label_peaks(_peaks(series_a["operator"]), effective(POINT_A))
    assert len(ps) == 3 and set(ps.labels) == LABELS_A


def test_numeric_and_operator_top3_agree(series_a):
    f, _ = fourier_spectrum(series_a["numeric"])
    df = f[1] - f[0]

    def top3(ts):
        ps = _peaks(ts)
        order = np.argsort([-pk.magnitude for pk in ps])[:3]
        return np.sort(ps.frequencies[order])

    assert np.max(np.abs(top3(series_a["numeric"]) - top3(series_a["operator"]))) < df


@pytest.mark.xfail(strict=True, reason="the closed form as printed carries a spurious low-frequency line")
def test_closed_form_peaks_match_candidates(series_a):
    ps = _peaks(series_a["closed"])
    f, _ = fourier_spectrum(series_a["closed"])
    cands = np.array([v for lab, v in candidate_frequencies(effective(POINT_A)) if lab in LABELS_A])
    assert len(ps) == 3
    assert np.max(np.abs(np.sort(ps.frequencies) - np.sort(cands))) < f[1] - f[0]


@pytest.mark.xfail(strict=True, reason="the closed form as printed carries a spurious low-frequency line")
def test_closed_form_and_numeric_top3_agree(series_a):
    f, _ = fourier_spectrum(series_a["numeric"])

    def top3(ts):
        ps = _peaks(ts)
        order = np.argsort([-pk.magnitude for pk in ps])[:3]
        return np.sort(ps.frequencies[order])

    assert np.max(np.abs(top3(series_a["numeric"]) - top3(series_a["closed"]))) < f[1] - f[0]


def test_point_b_operator_four_labelled_peaks(series_b):
    ps = label_peaks(_peaks(series_b["operator"]), effective(POINT_B))
    assert len(ps) == 4 and all(ps.labels)


def test_point_b_exact_has_extra_lines(series_b):
    em = effective(POINT_B)
    cands = dict(candidate_frequencies(em))
    f, m_num = fourier_spectrum(series_b["numeric"])
    _, m_op = fourier_spectrum(series_b["operator"])
    ps = _peaks(series_b["numeric"])
    for label in ("2*omega-2*Omega_R", "4*omega"):
        near = [pk for pk in ps if abs(pk.frequency - cands[label]) < 0.1]
        assert near, label
        nu = max(near, key=lambda pk: pk.magnitude).frequency
        assert magnitude_at(f, m_num, nu) > 5.0 * magnitude_at(f, m_op, nu)


def test_label_empty_and_broken():
    assert len(label_peaks(PeakSet(), effective(POINT_A))) == 0
    with pytest.raises(ValueError):
        label_peaks(PeakSet(), effective(POINT_C))


def test_label_unmatched_stays_none():
    ps = label_peaks(PeakSet([Peak(0.9, 1.0)]), effective(POINT_A))
    assert ps.labels == [None]


def test_candidates_point_a():
    em = effective(POINT_A)
    c = dict(candidate_frequencies(em))
    assert c["2*Omega_R"] == pytest.approx(2 * em.rabi.real)
    assert c["2*omega"] == 2.0 and c["4*omega"] == 4.0
    assert c["2*omega+2*Omega_R"] == pytest.approx(2 + 2 * em.rabi.real)
    assert all(v > 0 for v in c.values())


def test_detrend_removes_growth():
    ts = evolve_numeric(POINT_C, t_end=10.0, n_samples=512)
    _, raw = fourier_spectrum(ts)
    _, flat = fourier_spectrum(ts, detrend_exponential=True)
    assert np.sum(flat**2) < 0.1 * np.sum(raw**2)
