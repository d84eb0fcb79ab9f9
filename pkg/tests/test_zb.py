import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import random_k, wavevectors
from photonwf.fieldgrid import GridSpec, observables
from photonwf.modes import AmplitudeSet, ModeKey, random_amplitudes, synthesize_field, wavevector
from photonwf.polarization import DomainError, eps
from photonwf.zb import (
    MomentumSeries,
    energy,
    momentum_series,
    oscillation_orthogonality,
    rt_table_residuals,
    rt_vectors,
    zb_displacement_amplitude,
    zb_extract,
)

BOX = (4.0, 5.0, 6.0)
N = (1, 1, 0)
MN = (-1, -1, 0)


def _two_mode(formalism="dual"):
    amps = AmplitudeSet(BOX)
    if formalism == "dual":
        amps.set(N, 1, b=1.0)
    else:
        amps.set(N, 1, a=1.0)
    amps.set(MN, 0, a=1.0)
    amps.virtual.add(ModeKey.make(MN, 0))
    return amps


def _window(w, periods=8, samples=256):
    span = periods * np.pi / w
    return np.linspace(0, span, samples, endpoint=False)


def test_rt_examples():
    k = np.array([0.3, -1.2, 0.8])
    w = np.linalg.norm(k)
    t = rt_vectors(k)
    assert np.allclose(t.R[1, 1], k / w, atol=1e-15)
    assert not np.any(np.abs(t.T[1, -1]) > 1e-15)
    assert np.allclose(t.T[-1, 0], -eps(k, 1) / np.sqrt(2), atol=1e-15)
    assert np.allclose(t.R[0, 1], -eps(k, 1) / np.sqrt(2), atol=1e-15)
    assert np.allclose(t.R[1, 0].conj(), t.R[0, 1], atol=1e-15)
    with pytest.raises(DomainError):
        rt_vectors([0.0, 0.0, 0.0])


def test_rt_table_random(rng):
    worst = max(max(rt_table_residuals(k).values()) for k in random_k(rng, 200))
    assert worst <= 1e-12


@given(wavevectors())
def test_rt_table_property(k):
    assert max(rt_table_residuals(k).values()) <= 1e-12


def test_series_validation():
    with pytest.raises(ValueError):
        MomentumSeries(np.array([0.0, 1.0]), np.zeros((3, 3)), "dual")
    with pytest.raises(ValueError):
        MomentumSeries(np.array([0.0, 0.0]), np.zeros((2, 3)), "dual")
    with pytest.raises(ValueError):
        momentum_series(AmplitudeSet(BOX), [])
    with pytest.raises(ValueError):
        momentum_series(AmplitudeSet(BOX), [0.0], formalism="other")


def test_empty_series_is_zero():
    s = momentum_series(AmplitudeSet(BOX), np.linspace(0, 1, 5))
    assert not np.any(s.J)


def test_transverse_only_constant(rng):
    amps = random_amplitudes(rng, BOX, 8, 3, lams=(1, -1))
    times = np.linspace(0, 20, 50)
    want = sum(amps.k(key) * (abs(a) ** 2 + abs(b) ** 2) for key, (a, b) in amps.entries.items())
    dual = momentum_series(amps, times)
    assert np.max(np.abs(dual.J - want)) <= 1e-12 * np.max(np.abs(want))
    trad = momentum_series(amps, times, formalism="traditional")
    want_t = sum(amps.k(key) * abs(a) ** 2 for key, (a, _) in amps.entries.items())
    assert np.max(np.abs(trad.J - want_t)) <= 1e-12 * np.max(np.abs(want_t))


@given(st.integers(0, 2**32 - 1))
def test_no_virtual_no_zb(seed):
    rng = np.random.default_rng(seed)
    amps = random_amplitudes(rng, BOX, 6, 2, lams=(1, -1))
    times = np.linspace(0, 10, 40)
    for formalism in ("dual", "traditional"):
        j = momentum_series(amps, times, formalism=formalism).J
        scale = max(np.max(np.abs(j)), 1e-300)
        assert np.max(np.abs(j - j[0])) <= 1e-12 * scale


def test_two_mode_closed_form():
    amps = _two_mode()
    k = wavevector(N, BOX)
    w = np.linalg.norm(k)
    times = np.linspace(0, 3, 17)
    s = momentum_series(amps, times)
    osc = 2 * np.real(w / np.sqrt(2) * eps(k, -1)[None, :] * np.exp(-2j * w * times)[:, None])
    assert np.max(np.abs(s.J - (k + osc))) <= 1e-13


@pytest.mark.parametrize("formalism", ["dual", "traditional"])
def test_two_mode_frequency(formalism):
    amps = _two_mode(formalism)
    k = wavevector(N, BOX)
    w = np.linalg.norm(k)
    s = momentum_series(amps, _window(w), formalism=formalism)
    summary = zb_extract(s)
    assert abs(summary.frequency - 2 * w) <= summary.bin_width
    assert np.max(summary.zb_amplitude) > 0.1
    assert oscillation_orthogonality(s, k) <= 1e-12


def test_breakdown_sums_to_total(rng):
    amps = random_amplitudes(rng, BOX, 10, 2)
    s = momentum_series(amps, np.linspace(0, 4, 30), breakdown=True)
    assert set(s.breakdown) == {"drift", "mixing", "zb_third", "zb_fourth"}
    assert np.max(np.abs(sum(s.breakdown.values()) - s.J)) <= 1e-13
    assert momentum_series(amps, [0.0]).breakdown is None


def test_extract_constant_series():
    times = np.linspace(0, 10, 128, endpoint=False)
    s = MomentumSeries(times, np.tile([1.0, -2.0, 0.5], (128, 1)), "dual")
    out = zb_extract(s)
    assert out.frequency == 0.0 and not np.any(out.zb_amplitude)
    assert np.allclose(out.constant, [1.0, -2.0, 0.5])


def test_extract_synthetic_cosine():
    w = 1.3
    times = _window(w)
    u = np.array([0.6, 0.0, -0.8])
    amp = 0.25
    J = np.array([1.0, 2.0, 3.0]) + amp * np.cos(2 * w * times)[:, None] * u
    out = zb_extract(MomentumSeries(times, J, "dual"))
    assert abs(out.frequency - 2 * w) <= out.bin_width
    assert out.zb_amplitude == pytest.approx(amp * np.abs(u), rel=0.01, abs=1e-12)


def test_extract_errors():
    times = np.linspace(0, 1, 32)
    with pytest.raises(ValueError):
        zb_extract(MomentumSeries(times, np.zeros((32, 3)), "dual"))
    times = np.sort(np.random.default_rng(1).uniform(0, 1, 100))
    with pytest.raises(ValueError, match="uniform"):
        zb_extract(MomentumSeries(times, np.zeros((100, 3)), "dual"))


def test_grid_cross_check(rng):
    spec = GridSpec((32, 32, 32), BOX)
    amps = random_amplitudes(rng, BOX, 8, 4)
    times = np.sort(rng.uniform(0, 5, 4))
    series = momentum_series(amps, times)
    for t, j in zip(times, series.J):
        obs = observables(synthesize_field(amps, spec, t))
        assert np.max(np.abs(obs.J - j)) <= 1e-8 * np.max(np.abs(j))
        assert obs.J0 == pytest.approx(energy(amps), rel=1e-12)


def test_displacement_scale():
    amps = _two_mode()
    k = wavevector(N, BOX)
    w = np.linalg.norm(k)
    s = momentum_series(amps, _window(w, periods=8, samples=512))
    j0 = energy(amps)
    osc = s.J - s.J.mean(axis=0)
    disp = zb_displacement_amplitude(s, j0)
    assert disp == pytest.approx(np.max(np.abs(osc), axis=0) / j0 / (2 * w), rel=1e-6, abs=1e-14)
