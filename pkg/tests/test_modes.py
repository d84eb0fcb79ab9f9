import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import random_k, wavevectors
from photonwf.algebra import hamiltonian_symbol
from photonwf.fieldgrid import GridSpec, random_physical_field
from photonwf.modes import (
    AmplitudeSet,
    ModeKey,
    PotentialAmplitudes,
    amplitudes_from_potential,
    f_spinor,
    fields_from_potential,
    g_spinor,
    mode_spinor,
    project_amplitudes,
    random_amplitudes,
    spinor_from_fields,
    spinor_residuals,
    synthesize_field,
    wavevector,
)
from photonwf.polarization import DomainError, eps

SPEC16 = GridSpec((16, 16, 16), (5.0, 6.0, 7.0))


def test_mode_spinor_examples():
    k = np.array([0.4, -1.1, 2.0])
    s0 = mode_spinor(k, 0)
    assert np.allclose(s0.f, np.concatenate([eps(k, 0), np.zeros(3)]), atol=0)
    s1 = mode_spinor(k, 1)
    assert np.array_equal(s1.f, s1.g)
    assert abs(np.vdot(f_spinor(k, 1), f_spinor(k, -1))) <= 1e-15
    with pytest.raises(DomainError):
        mode_spinor([0, 0, 0], 1)
    with pytest.raises(ValueError):
        mode_spinor(k, 3)


def test_spinor_orthonormality_random(rng):
    ks = random_k(rng, 500)
    lams = rng.choice([1, -1, 0], size=(500, 2))
    for k, (l1, l2) in zip(ks, lams):
        d = float(l1 == l2)
        assert abs(np.vdot(f_spinor(k, l1), f_spinor(k, l2)) - d) <= 1e-12
        assert abs(np.vdot(g_spinor(k, l1), g_spinor(k, l2)) - d) <= 1e-12
        assert abs(np.vdot(f_spinor(k, l1), g_spinor(-k, l2))) <= 1e-12


@given(wavevectors())
def test_spinor_completeness(k):
    assert max(spinor_residuals(k).values()) <= 1e-12


@given(wavevectors())
def test_eigen_structure(k):
    h = hamiltonian_symbol(k)
    n = np.linalg.norm(k)
    for lam in (1, -1):
        assert np.max(np.abs(h @ f_spinor(k, lam) - n * f_spinor(k, lam))) <= 1e-12 * n
        assert np.max(np.abs(h @ g_spinor(-k, lam) + n * g_spinor(-k, lam))) <= 1e-12 * n
    assert np.max(np.abs(h @ f_spinor(k, 0))) <= 1e-12 * n
    assert np.max(np.abs(h @ g_spinor(-k, 0))) <= 1e-12 * n


def test_mode_key_validation():
    with pytest.raises(DomainError):
        ModeKey.make((0, 0, 0), 1)
    with pytest.raises(ValueError):
        ModeKey.make((1, 0, 0), 2)
    assert ModeKey.make((1, 2, 3), 0).flipped() == ModeKey((-1, -2, -3), 0)


def test_empty_synthesis_is_zero():
    assert not np.any(synthesize_field(AmplitudeSet(SPEC16.box), SPEC16).data)


def test_single_mode_synthesis():
    n = (1, -2, 1)
    amps = AmplitudeSet(SPEC16.box).set(n, 1, a=1.0)
    k = wavevector(n, SPEC16.box)
    w = np.linalg.norm(k)
    xs = np.stack(np.meshgrid(*SPEC16.axes(), indexing="ij"), axis=-1)
    want = np.sqrt(w / SPEC16.volume) * np.exp(1j * xs @ k)[..., None] * f_spinor(k, 1)
    assert np.max(np.abs(synthesize_field(amps, SPEC16).data - want)) <= 1e-14


def test_round_trip(rng):
    for _ in range(5):
        amps = random_amplitudes(rng, SPEC16.box, 8, 3)
        back = project_amplitudes(synthesize_field(amps, SPEC16, t=0.37), t=0.37)
        assert amps.max_difference(back) <= 1e-12


def test_a_only_projects_to_no_b(rng):
    amps = random_amplitudes(rng, SPEC16.box, 8, 3, with_b=False)
    back = project_amplitudes(synthesize_field(amps, SPEC16))
    assert max(abs(b) for _, b in back.entries.values()) <= 1e-12


def test_zero_field_projects_to_empty():
    from photonwf.fieldgrid import FieldGrid

    assert project_amplitudes(FieldGrid.zeros(SPEC16)).entries == {}


def test_real_field_round_trip_stays_physical(rng):
    field = random_physical_field(SPEC16, 4, rng)
    field.data -= field.data.mean(axis=(0, 1, 2))  # the k = 0 part is not a mode
    again = synthesize_field(project_amplitudes(field), SPEC16)
    assert again.physical_residual() <= 1e-12
    assert np.max(np.abs(again.data - field.data)) <= 1e-12


def test_synthesis_is_linear(rng):
    a1 = random_amplitudes(rng, SPEC16.box, 5, 3)
    a2 = random_amplitudes(rng, SPEC16.box, 5, 3)
    total = a1.copy()
    for key, (a, b) in a2.entries.items():
        x, y = total.entries.get(key, (0j, 0j))
        total.set(key.n, key.lam, x + 2 * a, y + 2 * b)
    lhs = synthesize_field(total, SPEC16, 0.2).data
    rhs = synthesize_field(a1, SPEC16, 0.2).data + 2 * synthesize_field(a2, SPEC16, 0.2).data
    assert np.max(np.abs(lhs - rhs)) <= 1e-13


def test_compatibility_errors():
    amps = AmplitudeSet((1.0, 1.0, 1.0)).set((1, 0, 0), 1, a=1)
    with pytest.raises(ValueError, match="box"):
        synthesize_field(amps, SPEC16)
    wide = AmplitudeSet(SPEC16.box).set((8, 0, 0), 1, a=1)
    with pytest.raises(ValueError, match=r"\(8, 0, 0\)"):
        synthesize_field(wide, SPEC16)
    with pytest.raises(ValueError, match="variant"):
        synthesize_field(AmplitudeSet(SPEC16.box), SPEC16, variant="other")


def test_variants_use_half_volume_prefactor():
    n = (1, 0, 0)
    amps = AmplitudeSet(SPEC16.box).set(n, 1, a=1.0, b=0.5j)
    k = wavevector(n, SPEC16.box)
    w = np.linalg.norm(k)
    photon = synthesize_field(amps, SPEC16, variant="photon-only").data[0, 0, 0]
    assert np.allclose(photon, 2 * np.sqrt(w / (2 * SPEC16.volume)) * f_spinor(k, 1), atol=1e-15)
    dual_photon = synthesize_field(amps, SPEC16, variant="dualphoton-only").data[0, 0, 0]
    assert np.allclose(dual_photon, 0 * g_spinor(k, 1), atol=1e-15)


def test_plane_wave_from_fields_matches_synthesis():
    n = (0, 1, 1)
    k = wavevector(n, SPEC16.box)
    w = np.linalg.norm(k)
    amps = AmplitudeSet(SPEC16.box).set(n, 1, a=1.0)
    xs = np.stack(np.meshgrid(*SPEC16.axes(), indexing="ij"), axis=-1)
    ph = np.exp(1j * xs @ k)[..., None]
    e = np.sqrt(w / SPEC16.volume) * eps(k, 1) * ph
    b = -1j * e
    assert np.max(np.abs(spinor_from_fields(e, b, SPEC16).data - synthesize_field(amps, SPEC16).data)) <= 1e-14


def test_amplitudes_from_potential_examples():
    box = SPEC16.box
    out = amplitudes_from_potential(PotentialAmplitudes(box, {((1, 0, 0), 1): 0.3 - 0.2j}))
    assert out.a((1, 0, 0), 1) == pytest.approx(1j * (0.3 - 0.2j))
    out = amplitudes_from_potential(PotentialAmplitudes(box, {((1, 0, 0), 3): 0.7, ((1, 0, 0), 0): 0.7}))
    assert out.a((1, 0, 0), 0) == 0
    assert amplitudes_from_potential(PotentialAmplitudes(box)).entries == {}
    with pytest.raises(DomainError):
        PotentialAmplitudes(box, {((0, 0, 0), 1): 1.0})


def _random_potential(rng, box, count, nmax):
    entries = {}
    while len(entries) < count:
        n = tuple(int(v) for v in rng.integers(-nmax, nmax + 1, size=3))
        if n != (0, 0, 0):
            entries[(n, int(rng.integers(4)))] = complex(rng.normal(), rng.normal())
    return PotentialAmplitudes(box, entries)


def test_potential_route(rng):
    for _ in range(3):
        pot = _random_potential(rng, SPEC16.box, 10, 3)
        e, b = fields_from_potential(pot, SPEC16, t=0.8)
        lhs = spinor_from_fields(e, b, SPEC16).data
        rhs = synthesize_field(amplitudes_from_potential(pot), SPEC16, 0.8, variant="photon-only").data
        assert np.max(np.abs(lhs - rhs)) <= 1e-10


@given(st.integers(0, 2**32 - 1))
def test_round_trip_property(seed):
    rng = np.random.default_rng(seed)
    spec = GridSpec((8, 8, 8), (2.0, 3.0, 4.0))
    amps = random_amplitudes(rng, spec.box, 4, 3)
    t = float(rng.uniform(-2, 2))
    assert amps.max_difference(project_amplitudes(synthesize_field(amps, spec, t), t)) <= 1e-12
