import struct

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from photonwf.fieldgrid import (
    BINARY_MAGIC,
    FieldGrid,
    GridSpec,
    evolve_curl_reference,
    evolve_spectral,
    from_real_fields,
    matrix_maxwell_residual,
    observables,
    random_physical_field,
    read_binary,
    read_csv,
    transversality_residual,
    write_binary,
    write_csv,
)
from photonwf.modes import AmplitudeSet, f_spinor, random_amplitudes, synthesize_field, wavevector

SPEC = GridSpec((16, 16, 16), (4.0, 5.0, 6.0))


@pytest.mark.parametrize("dims,box", [((5, 8, 8), (1, 1, 1)), ((2, 8, 8), (1, 1, 1)), ((8, 8, 8), (1, 0, 1)), ((8, 8), (1, 1, 1))])
def test_gridspec_validation(dims, box):
    with pytest.raises(ValueError):
        GridSpec(dims, box)


def test_gridspec_geometry():
    assert SPEC.volume == pytest.approx(120.0)
    assert SPEC.npoints == 16**3
    assert SPEC.wavevectors()[1, 0, 0] == pytest.approx([2 * np.pi / 4, 0, 0])
    assert SPEC.in_band((7, -7, 0)) and not SPEC.in_band((8, 0, 0))


def test_from_real_fields_examples():
    z = np.zeros((16, 16, 16, 3))
    assert not np.any(from_real_fields(z, z, SPEC).data)
    e = z.copy()
    e[..., 0] = 1.0
    f = from_real_fields(e, z, SPEC)
    assert np.allclose(f.data, np.array([1, 0, 0, 0, 0, 0]) / np.sqrt(2), atol=0)
    with pytest.raises(ValueError):
        from_real_fields(z[:-1], z, SPEC)
    with pytest.raises(ValueError):
        from_real_fields(z + 0j, z, SPEC)


def test_observables_single_mode():
    n = (1, 2, -1)
    amps = AmplitudeSet(SPEC.box).set(n, 1, a=1.0)
    obs = observables(synthesize_field(amps, SPEC))
    k = wavevector(n, SPEC.box)
    assert obs.J0 == pytest.approx(np.linalg.norm(k), rel=1e-13)
    assert np.allclose(obs.J, k, atol=1e-13)
    assert abs(obs.scalar_integral) <= 1e-13
    zero = observables(FieldGrid.zeros(SPEC))
    assert zero.J0 == 0 and not np.any(zero.J) and zero.scalar_integral == 0


def test_observables_match_classical_densities(rng):
    field = random_physical_field(SPEC, 3, rng)
    e, b = field.E.real, field.B.real
    dv = SPEC.cell_volume
    obs = observables(field)
    assert obs.J0 == pytest.approx(np.sum(e**2 + b**2) / 2 * dv, rel=1e-13)
    assert np.allclose(obs.J, np.cross(e, b).sum(axis=(0, 1, 2)) * dv, rtol=1e-12, atol=1e-12)
    assert obs.scalar_integral == pytest.approx(np.sum(e**2 - b**2) / 2 * dv, rel=1e-10, abs=1e-12)
    assert not obs.imaginary_flagged


def test_transversality_examples(rng):
    amps = random_amplitudes(rng, SPEC.box, 6, 3, lams=(1, -1))
    de, db = transversality_residual(synthesize_field(amps, SPEC))
    assert de <= 1e-12 and db <= 1e-12
    n = (1, 0, 2)
    k = wavevector(n, SPEC.box)
    w = np.linalg.norm(k)
    de, db = transversality_residual(synthesize_field(AmplitudeSet(SPEC.box).set(n, 0, a=1.0), SPEC))
    assert de == pytest.approx(w * np.sqrt(w / SPEC.volume) * np.sqrt(2), abs=1e-10)
    assert db <= 1e-12
    assert transversality_residual(FieldGrid.zeros(SPEC)) == (0.0, 0.0)


def test_spectral_identity_and_eigen_phase():
    n = (2, -1, 0)
    k = wavevector(n, SPEC.box)
    field = synthesize_field(AmplitudeSet(SPEC.box).set(n, 1, a=1.0), SPEC)
    assert np.array_equal(evolve_spectral(field, 0.3, 0).data, field.data)
    t = 1.7
    out = evolve_spectral(field, t / 10, 10).data
    assert np.max(np.abs(out - field.data * np.exp(-1j * np.linalg.norm(k) * t))) <= 1e-13


def test_spectral_conservation(rng):
    data = rng.normal(size=(16, 16, 16, 6)) + 1j * rng.normal(size=(16, 16, 16, 6))
    field = FieldGrid(SPEC, data)
    after = evolve_spectral(field, 1.0, 1)
    assert observables(after).J0 == pytest.approx(observables(field).J0, rel=1e-12)
    tr = random_physical_field(SPEC, 4, rng, transverse_only=True)
    later = evolve_spectral(tr, 0.05, 40)
    assert np.allclose(observables(later).J, observables(tr).J, rtol=0, atol=1e-12 * observables(tr).J0)


def test_curl_reference_static_fields(rng):
    e = np.zeros((16, 16, 16, 3))
    e[..., 1] = 0.7
    uniform = from_real_fields(e, e * 0, SPEC)
    assert np.max(np.abs(evolve_curl_reference(uniform, 0.1, 20).data - uniform.data)) <= 1e-14
    x = SPEC.axes()[0]
    long = np.zeros((16, 16, 16, 3))
    long[..., 0] = np.cos(2 * np.pi * x / SPEC.box[0])[:, None, None]
    f = from_real_fields(long, long * 0, SPEC)
    assert np.max(np.abs(evolve_curl_reference(f, 0.1, 20).data - f.data)) <= 1e-14
    assert np.array_equal(evolve_curl_reference(f, 0.1, 0).data, f.data)


def test_curl_reference_rejects_complex_fields():
    field = FieldGrid(SPEC, np.ones((16, 16, 16, 6), dtype=complex))
    with pytest.raises(ValueError, match="physical"):
        evolve_curl_reference(field, 0.1, 1)


def test_dual_path_oracle(rng):
    field = random_physical_field(SPEC, 4, rng)
    wmax = np.max(np.linalg.norm(SPEC.wavevectors()[SPEC.band_mask()], axis=-1))
    dt = 10 / wmax / 100
    a = evolve_spectral(field, dt, 100)
    b = evolve_curl_reference(field, dt, 100)
    assert np.max(np.abs(a.data - b.data)) <= 1e-8
    assert a.physical_residual() <= 1e-12 and b.physical_residual() <= 1e-12


def test_matrix_form_maxwell(rng):
    de, db = matrix_maxwell_residual(random_physical_field(SPEC, 5, rng))
    assert de <= 1e-10 and db <= 1e-10


def test_single_mode_eigen_spinor_is_f():
    n = (0, 0, 1)
    k = wavevector(n, SPEC.box)
    psi = synthesize_field(AmplitudeSet(SPEC.box).set(n, 1, a=1.0), SPEC).data[0, 0, 0]
    assert np.allclose(psi / np.linalg.norm(psi), f_spinor(k, 1), atol=1e-15)


def test_csv_round_trip(tmp_path, rng):
    spec = GridSpec((4, 4, 6), (1.0, 2.0, 3.0))
    field = FieldGrid(spec, rng.normal(size=(4, 4, 6, 6)) + 1j * rng.normal(size=(4, 4, 6, 6)))
    path = tmp_path / "f.csv"
    write_csv(field, path)
    header = path.read_text().splitlines()[0]
    assert header == "ix,iy,iz," + ",".join(f"re{i},im{i}" for i in range(6))
    back = read_csv(path, spec.box)
    assert back.spec == spec
    assert np.array_equal(back.data, field.data)


def test_binary_round_trip(tmp_path, rng):
    spec = GridSpec((4, 6, 4), (1.5, 2.0, 3.0))
    field = FieldGrid(spec, rng.normal(size=(4, 6, 4, 6)) + 1j * rng.normal(size=(4, 6, 4, 6)))
    path = tmp_path / "f.bin"
    write_binary(field, path)
    raw = path.read_bytes()
    assert raw[:8] == BINARY_MAGIC
    assert len(raw) == 48 + 4 * 6 * 4 * 6 * 16
    assert struct.unpack_from("<3I", raw, 8) == (4, 6, 4)
    back = read_binary(path)
    assert back.spec == spec and np.array_equal(back.data, field.data)
    bad = tmp_path / "bad.bin"
    bad.write_bytes(b"NOTMAGIC" + raw[8:])
    with pytest.raises(ValueError):
        read_binary(bad)


@given(st.integers(0, 2**32 - 1), st.floats(0.01, 3.0))
def test_reality_preserved(seed, t):
    rng = np.random.default_rng(seed)
    spec = GridSpec((8, 8, 8), (2.0, 2.5, 3.0))
    field = random_physical_field(spec, 3, rng)
    assert evolve_spectral(field, t, 1).physical_residual() <= 1e-12
    assert evolve_curl_reference(field, t / 4, 4).physical_residual() <= 1e-12
