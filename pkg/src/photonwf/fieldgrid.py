"""Sampled spinor fields on a periodic box: observables, divergence checks, time evolution.

DFT convention: forward transform carries exp(-i k.x) and no normalization,
the inverse carries 1/N (numpy's default). Harmonic n on an axis of length L
has physical wavenumber 2 pi n / L.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .algebra import build_matrix_set, hamiltonian_symbol

SQRT2 = np.sqrt(2.0)


@dataclass(frozen=True)
class GridSpec:
    dims: tuple[int, int, int]
    box: tuple[float, float, float]

    def __post_init__(self):
        dims = tuple(int(n) for n in self.dims)
        box = tuple(float(b) for b in self.box)
        if len(dims) != 3 or len(box) != 3:
            raise ValueError("GridSpec needs three dims and three box lengths")
        if any(n < 4 or n % 2 for n in dims):
            raise ValueError(f"grid dims must be even and >= 4, got {dims}")
        if any(not np.isfinite(b) or b <= 0 for b in box):
            raise ValueError(f"box lengths must be positive, got {box}")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "box", box)

    @property
    def volume(self) -> float:
        return float(np.prod(self.box))

    @property
    def npoints(self) -> int:
        return int(np.prod(self.dims))

    @property
    def cell_volume(self) -> float:
        return self.volume / self.npoints

    def axes(self) -> list[np.ndarray]:
        return [np.arange(n) * (length / n) for n, length in zip(self.dims, self.box)]

    def harmonics(self) -> list[np.ndarray]:
        """Integer harmonics per axis in FFT order."""
        return [np.fft.fftfreq(n, 1.0 / n).round().astype(int) for n in self.dims]

    def wavevectors(self) -> np.ndarray:
        """(N1, N2, N3, 3) physical wavevectors in FFT order."""
        ks = [2 * np.pi * h / length for h, length in zip(self.harmonics(), self.box)]
        return np.stack(np.meshgrid(*ks, indexing="ij"), axis=-1)

    def band_mask(self) -> np.ndarray:
        """True for harmonics strictly inside the band |n_i| < N_i / 2 (Nyquist excluded)."""
        hs = np.meshgrid(*self.harmonics(), indexing="ij")
        mask = np.ones(self.dims, dtype=bool)
        for h, n in zip(hs, self.dims):
            mask &= np.abs(h) < n // 2
        return mask

    def in_band(self, n) -> bool:
        return all(abs(int(ni)) < d // 2 for ni, d in zip(n, self.dims))


@dataclass
class FieldGrid:
    """Six-component spinor samples, ``data`` shaped (N1, N2, N3, 6)."""

    spec: GridSpec
    data: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.data = np.asarray(self.data, dtype=complex)
        if self.data.shape != tuple(self.spec.dims) + (6,):
            raise ValueError(f"data shape {self.data.shape} does not match grid {self.spec.dims}")

    @classmethod
    def zeros(cls, spec: GridSpec) -> "FieldGrid":
        return cls(spec, np.zeros(tuple(spec.dims) + (6,), dtype=complex))

    def copy(self) -> "FieldGrid":
        return FieldGrid(self.spec, self.data.copy())

    @property
    def E(self) -> np.ndarray:
        return SQRT2 * self.data[..., :3]

    @property
    def B(self) -> np.ndarray:
        return -1j * SQRT2 * self.data[..., 3:]

    def physical_residual(self) -> float:
        """How far the samples are from the (real E, i real B) form, relative to max |psi|."""
        scale = max(float(np.max(np.abs(self.data), initial=0.0)), 1e-300)
        bad = max(
            float(np.max(np.abs(self.data[..., :3].imag), initial=0.0)),
            float(np.max(np.abs(self.data[..., 3:].real), initial=0.0)),
        )
        return bad / scale

    def is_physical(self, tol: float = 1e-12) -> bool:
        return self.physical_residual() <= tol


def from_real_fields(E, B, spec: GridSpec) -> FieldGrid:
    E = np.asarray(E)
    B = np.asarray(B)
    shape = tuple(spec.dims) + (3,)
    if E.shape != shape or B.shape != shape:
        raise ValueError(f"E and B must both have shape {shape}, got {E.shape} and {B.shape}")
    if np.iscomplexobj(E) or np.iscomplexobj(B):
        raise ValueError("from_real_fields expects real-valued E and B")
    data = np.concatenate([E, 1j * B], axis=-1) / SQRT2
    return FieldGrid(spec, data)


# -- observables -------------------------------------------------------------


@dataclass(frozen=True)
class Observables:
    J0: float
    J: np.ndarray
    scalar_integral: float
    J_imag: np.ndarray
    """Imaginary part of the momentum integral; nonzero only for non-physical input."""

    @property
    def imaginary_flagged(self) -> bool:
        return bool(np.any(np.abs(self.J_imag) > 1e-10 * np.maximum(np.abs(self.J), 1e-300)))


def observables(field: FieldGrid) -> Observables:
    ms = build_matrix_set()
    psi = field.data.reshape(-1, 6)
    dv = field.spec.cell_volume
    j0 = np.einsum("pi,pi->", psi.conj(), psi) * dv
    chi_psi = np.einsum("lij,pj->pli", ms.chi, psi)
    jvec = np.einsum("pi,pli->l", psi.conj(), chi_psi) * dv
    scalar = np.einsum("pi,i,pi->", psi.conj(), np.diag(ms.beta0).real, psi) * dv
    return Observables(
        J0=float(j0.real),
        J=jvec.real.copy(),
        scalar_integral=float(scalar.real),
        J_imag=jvec.imag.copy(),
    )


# -- spectral derivatives ----------------------------------------------------


def _fft(a: np.ndarray) -> np.ndarray:
    return np.fft.fftn(a, axes=(0, 1, 2))


def _ifft(a: np.ndarray) -> np.ndarray:
    return np.fft.ifftn(a, axes=(0, 1, 2))


def spectral_divergence(v: np.ndarray, spec: GridSpec) -> np.ndarray:
    kk = spec.wavevectors()
    return _ifft(1j * np.einsum("...l,...l->...", kk, _fft(v)))


def spectral_curl(v: np.ndarray, spec: GridSpec) -> np.ndarray:
    kk = spec.wavevectors()
    return _ifft(1j * np.cross(kk, _fft(v)))


def spectral_gradient(s: np.ndarray, spec: GridSpec) -> np.ndarray:
    kk = spec.wavevectors()
    return _ifft(1j * kk * _fft(s)[..., None])


def transversality_residual(field: FieldGrid) -> tuple[float, float]:
    """Max |div E| and max |div B| of the field's E and B blocks."""
    div_e = spectral_divergence(field.E, field.spec)
    div_b = spectral_divergence(field.B, field.spec)
    return float(np.max(np.abs(div_e))), float(np.max(np.abs(div_b)))


def apply_hamiltonian(field: FieldGrid) -> FieldGrid:
    """-i beta0 beta . grad applied spectrally."""
    hk = hamiltonian_symbol(field.spec.wavevectors())
    out = _ifft(np.einsum("...ij,...j->...i", hk, _fft(field.data)))
    return FieldGrid(field.spec, out)


def apply_total_angular_momentum(field: FieldGrid, component: int, origin=None) -> FieldGrid:
    """(L + S)_component with L = x cross (-i grad); x measured from ``origin`` (box centre by default).

    Only meaningful for fields that are localized well inside the box, since x
    is not periodic.
    """
    spec = field.spec
    if origin is None:
        origin = np.array(spec.box) / 2
    xs = np.stack(np.meshgrid(*spec.axes(), indexing="ij"), axis=-1) - np.asarray(origin)
    kk = spec.wavevectors()
    # -i d_j psi for each j: shape (..., 3, 6)
    spec_psi = _fft(field.data)
    mom = np.stack([_ifft(kk[..., j, None] * spec_psi) for j in range(3)], axis=-2)
    a, b = (component + 1) % 3, (component + 2) % 3
    orbital = xs[..., a, None] * mom[..., b, :] - xs[..., b, None] * mom[..., a, :]
    spin = np.einsum("ij,...j->...i", build_matrix_set().spin[component], field.data)
    return FieldGrid(spec, orbital + spin)


# -- time evolution ----------------------------------------------------------


def spectral_propagator(spec: GridSpec, t: float) -> np.ndarray:
    """exp(-i H(k) t) for every grid wavevector, via Hermitian eigendecomposition."""
    hk = hamiltonian_symbol(spec.wavevectors())
    w, v = np.linalg.eigh(hk)
    phase = np.exp(-1j * w * t)
    return np.einsum("...ia,...a,...ja->...ij", v, phase, v.conj())


def evolve_spectral(field: FieldGrid, dt: float, steps: int) -> FieldGrid:
    if not np.isfinite(dt):
        raise ValueError("dt must be finite")
    if steps < 0:
        raise ValueError("steps must be non-negative")
    if steps == 0:
        return field.copy()
    u = spectral_propagator(field.spec, dt * steps)
    out = _ifft(np.einsum("...ij,...j->...i", u, _fft(field.data)))
    return FieldGrid(field.spec, out)


def _curl_rates(e_hat: np.ndarray, b_hat: np.ndarray, kk: np.ndarray):
    # d/dt E = curl B, d/dt B = -curl E in Fourier space
    return 1j * np.cross(kk, b_hat), -1j * np.cross(kk, e_hat)


def evolve_curl_reference(field: FieldGrid, dt: float, steps: int, tol: float = 1e-10) -> FieldGrid:
    """Evolve real E, B with the curl equations, one exact rotation per step per mode.

    Longitudinal parts are static; each transverse pair (E_T, i khat x B) rotates
    by angle |k| dt per step.
    """
    if not field.is_physical(tol):
        raise ValueError("evolve_curl_reference needs a physical field (real E, real B)")
    if not np.isfinite(dt):
        raise ValueError("dt must be finite")
    if steps < 0:
        raise ValueError("steps must be non-negative")
    if steps == 0:
        return field.copy()
    spec = field.spec
    e_hat = _fft(field.E.real)
    b_hat = _fft(field.B.real)
    kk = spec.wavevectors()
    kn = np.linalg.norm(kk, axis=-1)
    safe = np.where(kn == 0, 1.0, kn)
    khat = kk / safe[..., None]
    e_long = khat * np.einsum("...l,...l->...", khat, e_hat)[..., None]
    b_long = khat * np.einsum("...l,...l->...", khat, b_hat)[..., None]
    e_tr = e_hat - e_long
    b_tr = b_hat - b_long
    c = np.cos(kn * dt)[..., None]
    s = np.sin(kn * dt)[..., None]
    for _ in range(steps):
        ce = 1j * np.cross(khat, b_tr)
        cb = -1j * np.cross(khat, e_tr)
        e_tr, b_tr = c * e_tr + s * ce, c * b_tr + s * cb
    e_new = _ifft(e_long + e_tr).real
    b_new = _ifft(b_long + b_tr).real
    return from_real_fields(e_new, b_new, spec)


def curl_time_derivatives(field: FieldGrid) -> tuple[np.ndarray, np.ndarray]:
    """(dE/dt, dB/dt) from the curl equations, computed spectrally."""
    return spectral_curl(field.B, field.spec), -spectral_curl(field.E, field.spec)


def matrix_maxwell_residual(field: FieldGrid) -> tuple[float, float]:
    """Residuals of (tau . grad) B = i dE/dt and (tau . grad) E = -i dB/dt.

    The left sides use the tau matrices; the time derivatives come from the curl path.
    """
    tau = build_matrix_set().tau
    kk = field.spec.wavevectors()
    tau_grad = 1j * np.einsum("...l,lij->...ij", kk, tau)
    lhs_b = _ifft(np.einsum("...ij,...j->...i", tau_grad, _fft(field.B)))
    lhs_e = _ifft(np.einsum("...ij,...j->...i", tau_grad, _fft(field.E)))
    de_dt, db_dt = curl_time_derivatives(field)
    return float(np.max(np.abs(lhs_b - 1j * de_dt))), float(np.max(np.abs(lhs_e + 1j * db_dt)))


def random_physical_field(spec: GridSpec, band: int, rng: np.random.Generator, transverse_only: bool = False) -> FieldGrid:
    """Random real E, B keeping only harmonics with |n_i| < band on every axis."""
    shape = tuple(spec.dims) + (3,)
    hs = np.meshgrid(*spec.harmonics(), indexing="ij")
    mask = np.ones(spec.dims, dtype=bool)
    for h, n in zip(hs, spec.dims):
        mask &= np.abs(h) < min(band, n // 2)
    out = []
    kk = spec.wavevectors()
    kn = np.linalg.norm(kk, axis=-1)
    khat = kk / np.where(kn == 0, 1.0, kn)[..., None]
    for _ in range(2):
        v_hat = _fft(rng.standard_normal(shape)) * mask[..., None]
        if transverse_only:
            v_hat = v_hat - khat * np.einsum("...l,...l->...", khat, v_hat)[..., None]
            v_hat[0, 0, 0] = 0.0
        out.append(_ifft(v_hat).real)
    return from_real_fields(out[0], out[1], spec)


# -- snapshot export ---------------------------------------------------------

BINARY_MAGIC = b"PWFGRID1"
_HEADER = struct.Struct("<8s3II3d")  # magic, dims, reserved, box -> 48 bytes
assert _HEADER.size == 48


def write_csv(field: FieldGrid, path) -> None:
    """Columns ix, iy, iz, then re/im of the six components, C order over (ix, iy, iz)."""
    spec = field.spec
    idx = np.stack(np.meshgrid(*[np.arange(n) for n in spec.dims], indexing="ij"), axis=-1).reshape(-1, 3)
    vals = field.data.reshape(-1, 6)
    header = "ix,iy,iz," + ",".join(f"re{c},im{c}" for c in range(6))
    with open(path, "w", newline="") as fh:
        fh.write(header + "\n")
        for (i, j, k), row in zip(idx, vals):
            parts = [str(i), str(j), str(k)]
            for z in row:
                parts.append(repr(float(z.real)))
                parts.append(repr(float(z.imag)))
            fh.write(",".join(parts) + "\n")


def read_csv(path, box) -> FieldGrid:
    raw = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    idx = raw[:, :3].astype(int)
    dims = tuple(int(m) + 1 for m in idx.max(axis=0))
    data = np.zeros(dims + (6,), dtype=complex)
    data[idx[:, 0], idx[:, 1], idx[:, 2]] = raw[:, 3::2] + 1j * raw[:, 4::2]
    return FieldGrid(GridSpec(dims, box), data)


def write_binary(field: FieldGrid, path) -> None:
    """48-byte header (magic, uint32 dims, uint32 reserved, float64 box) then complex128 data, little-endian."""
    spec = field.spec
    header = _HEADER.pack(BINARY_MAGIC, *spec.dims, 0, *spec.box)
    body = np.ascontiguousarray(field.data, dtype="<c16").tobytes()
    Path(path).write_bytes(header + body)


def read_binary(path) -> FieldGrid:
    raw = Path(path).read_bytes()
    magic, n1, n2, n3, _, l1, l2, l3 = _HEADER.unpack_from(raw)
    if magic != BINARY_MAGIC:
        raise ValueError(f"{path}: not a field snapshot (bad magic {magic!r})")
    spec = GridSpec((n1, n2, n3), (l1, l2, l3))
    data = np.frombuffer(raw, dtype="<c16", offset=_HEADER.size).reshape(spec.dims + (6,))
    return FieldGrid(spec, data.astype(complex))
