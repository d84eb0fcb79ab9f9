"""Mode spinors, amplitude sets, field synthesis and projection, and the potential route.

A mode is a lattice harmonic n (physical k = 2 pi n / L per axis) plus a
helicity lam in {+1, -1, 0}. Every mode uses omega = |k|, including lam = 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Literal, NamedTuple

import numpy as np

from .fieldgrid import FieldGrid, GridSpec, spectral_gradient
from .polarization import DomainError, eps

Variant = Literal["dual", "photon-only", "dualphoton-only"]
VARIANTS: tuple[str, ...] = ("dual", "photon-only", "dualphoton-only")


class ModeKey(NamedTuple):
    n: tuple[int, int, int]
    lam: int

    @classmethod
    def make(cls, n, lam: int) -> "ModeKey":
        n = tuple(int(v) for v in n)
        if len(n) != 3:
            raise ValueError(f"mode harmonic must have 3 components, got {n}")
        if n == (0, 0, 0):
            raise DomainError("mode harmonic must be nonzero")
        if lam not in (1, -1, 0):
            raise ValueError(f"helicity must be +1, -1 or 0, got {lam!r}")
        return cls(n, int(lam))

    def flipped(self) -> "ModeKey":
        """Same helicity at -n."""
        return ModeKey(tuple(-v for v in self.n), self.lam)


def wavevector(n, box) -> np.ndarray:
    return 2 * np.pi * np.asarray(n, dtype=float) / np.asarray(box, dtype=float)


def _norm(lam) -> np.ndarray:
    return np.sqrt(1.0 + np.asarray(lam, dtype=float) ** 2)


def f_spinor(k, lam: int) -> np.ndarray:
    e = eps(k, lam)
    return np.concatenate([e, lam * e], axis=-1) / _norm(lam)


def g_spinor(k, lam: int) -> np.ndarray:
    e = eps(k, lam)
    return np.concatenate([lam * e, e], axis=-1) / _norm(lam)


@dataclass(frozen=True)
class ModeSpinor:
    f: np.ndarray
    g: np.ndarray


def mode_spinor(k, lam: int) -> ModeSpinor:
    if lam not in (1, -1, 0):
        raise ValueError(f"helicity must be +1, -1 or 0, got {lam!r}")
    return ModeSpinor(f=f_spinor(k, lam), g=g_spinor(k, lam))


def spinor_residuals(k) -> dict[str, float]:
    """Orthonormality and completeness residuals of {f(k, lam)} and {g(-k, lam)}."""
    k = np.asarray(k, dtype=float)
    lams = (1, -1, 0)
    fs = np.stack([f_spinor(k, l) for l in lams], axis=-1)
    gs = np.stack([g_spinor(k, l) for l in lams], axis=-1)
    gm = np.stack([g_spinor(-k, l) for l in lams], axis=-1)
    eye3 = np.eye(3)
    gram = lambda x, y: np.einsum("...ia,...ib->...ab", x.conj(), y)
    proj = np.einsum("...ia,...ja->...ij", fs, fs.conj()) + np.einsum("...ia,...ja->...ij", gm, gm.conj())
    return {
        "f_orthonormal": float(np.max(np.abs(gram(fs, fs) - eye3))),
        "g_orthonormal": float(np.max(np.abs(gram(gs, gs) - eye3))),
        "f_g_opposite_orthogonal": float(np.max(np.abs(gram(fs, gm)))),
        "completeness": float(np.max(np.abs(proj - np.eye(6)))),
    }


# -- amplitude sets ----------------------------------------------------------


@dataclass
class AmplitudeSet:
    """Sparse (a, b) amplitudes per mode; absent modes are zero.

    ``virtual`` lists lam = 0 modes whose a-amplitude deliberately breaks the
    physical-state condition <a(k, 0)> = 0 to model a virtual admixture.
    """

    box: tuple[float, float, float]
    entries: dict[ModeKey, tuple[complex, complex]] = field(default_factory=dict)
    virtual: set[ModeKey] = field(default_factory=set)

    def __post_init__(self):
        self.box = tuple(float(b) for b in self.box)
        if len(self.box) != 3 or any(b <= 0 for b in self.box):
            raise ValueError(f"box must be three positive lengths, got {self.box}")
        self.entries = {ModeKey.make(*key): (complex(a), complex(b)) for key, (a, b) in self.entries.items()}

    @property
    def volume(self) -> float:
        return float(np.prod(self.box))

    def set(self, n, lam: int, a: complex = 0.0, b: complex = 0.0) -> "AmplitudeSet":
        key = ModeKey.make(n, lam)
        if a == 0 and b == 0:
            self.entries.pop(key, None)
        else:
            self.entries[key] = (complex(a), complex(b))
        return self

    def a(self, n, lam: int) -> complex:
        return self.entries.get(ModeKey(tuple(int(v) for v in n), lam), (0j, 0j))[0]

    def b(self, n, lam: int) -> complex:
        return self.entries.get(ModeKey(tuple(int(v) for v in n), lam), (0j, 0j))[1]

    def sorted_items(self) -> Iterator[tuple[ModeKey, tuple[complex, complex]]]:
        for key in sorted(self.entries):
            yield key, self.entries[key]

    def k(self, key: ModeKey) -> np.ndarray:
        return wavevector(key.n, self.box)

    def copy(self) -> "AmplitudeSet":
        return AmplitudeSet(self.box, dict(self.entries), set(self.virtual))

    def max_difference(self, other: "AmplitudeSet") -> float:
        keys = set(self.entries) | set(other.entries)
        if not keys:
            return 0.0
        return max(
            max(abs(self.a(*key) - other.a(*key)), abs(self.b(*key) - other.b(*key))) for key in keys
        )

    def is_physical(self) -> bool:
        """Every lam = 0 a-amplitude vanishes unless the mode is flagged virtual."""
        return all(key.lam != 0 or a == 0 or key in self.virtual for key, (a, _) in self.entries.items())

    def transverse_only(self) -> bool:
        return all(key.lam != 0 for key in self.entries)


def random_amplitudes(rng: np.random.Generator, box, nmodes: int, nmax: int, lams=(1, -1, 0), with_b: bool = True) -> AmplitudeSet:
    amps = AmplitudeSet(box)
    while len(amps.entries) < nmodes:
        n = tuple(int(v) for v in rng.integers(-nmax, nmax + 1, size=3))
        if n == (0, 0, 0):
            continue
        lam = int(rng.choice(lams))
        a = complex(rng.normal(), rng.normal())
        b = complex(rng.normal(), rng.normal()) if with_b else 0j
        amps.set(n, lam, a, b)
    return amps


# -- plane-wave components ---------------------------------------------------


@dataclass(frozen=True)
class PlaneWave:
    """One term c exp(-i(omega t - k.x)); omega may be negative."""

    omega: float
    k: np.ndarray
    spinor: np.ndarray


def plane_waves(amps: AmplitudeSet, variant: str = "dual") -> list[PlaneWave]:
    """Expand an amplitude set into plane-wave terms, in (n, lam) order.

    dual:            sqrt(w/V) [a f(k) e^{-i(wt-kx)} + b* g(k) e^{+i(wt-kx)}]
    photon-only:     sqrt(w/2V) f(k) [a e^{-i(wt-kx)} + a* e^{+i(wt-kx)}]
    dualphoton-only: sqrt(w/2V) g(k) [b e^{-i(wt-kx)} + b* e^{+i(wt-kx)}]
    """
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}; expected one of {VARIANTS}")
    vol = amps.volume
    out: list[PlaneWave] = []
    for key, (a, b) in amps.sorted_items():
        k = amps.k(key)
        w = float(np.linalg.norm(k))
        if variant == "dual":
            pref = np.sqrt(w / vol)
            out.append(PlaneWave(w, k, pref * a * f_spinor(k, key.lam)))
            out.append(PlaneWave(-w, -k, pref * np.conj(b) * g_spinor(k, key.lam)))
        else:
            pref = np.sqrt(w / (2 * vol))
            amp, spinor = (a, f_spinor(k, key.lam)) if variant == "photon-only" else (b, g_spinor(k, key.lam))
            out.append(PlaneWave(w, k, pref * amp * spinor))
            out.append(PlaneWave(-w, -k, pref * np.conj(amp) * spinor))
    return out


def evaluate_plane_waves(waves: Iterable[PlaneWave], spec: GridSpec, t: float, derivative: int | None = None) -> np.ndarray:
    """Sum the terms on the grid at time t. ``derivative`` = mu selects d_mu psi instead of psi."""
    xs = spec.axes()
    out = np.zeros(tuple(spec.dims) + (6,), dtype=complex)
    for wave in waves:
        coef = wave.spinor * np.exp(-1j * wave.omega * t)
        if derivative is not None:
            coef = coef * (-1j * wave.omega if derivative == 0 else 1j * wave.k[derivative - 1])
        if not np.any(coef):
            continue
        e1, e2, e3 = (np.exp(1j * kc * x) for kc, x in zip(wave.k, xs))
        phase = e1[:, None, None] * e2[None, :, None] * e3[None, None, :]
        out += phase[..., None] * coef
    return out


def _check_compatible(amps: AmplitudeSet, spec: GridSpec) -> None:
    if not np.allclose(amps.box, spec.box, rtol=1e-12, atol=0):
        raise ValueError(f"amplitude box {amps.box} does not match grid box {spec.box}")
    for key in amps.entries:
        if not spec.in_band(key.n):
            raise ValueError(f"mode harmonic {key.n} is not representable on a {spec.dims} grid")


def synthesize_field(amps: AmplitudeSet, spec: GridSpec, t: float = 0.0, variant: str = "dual") -> FieldGrid:
    _check_compatible(amps, spec)
    return FieldGrid(spec, evaluate_plane_waves(plane_waves(amps, variant), spec, t))


def project_amplitudes(field: FieldGrid, t: float = 0.0, drop: float = 1e-14) -> AmplitudeSet:
    """Inverse of dual synthesis for band-limited fields.

    The Fourier coefficient at wavevector q is expanded in the orthonormal basis
    {f(q, lam), g(-q, lam)}; the f part carries a(q, lam), the g part carries
    b*(-q, lam). Content outside the band aliases silently.
    """
    spec = field.spec
    coeff = np.fft.fftn(field.data, axes=(0, 1, 2)) / spec.npoints
    hs = np.stack(np.meshgrid(*spec.harmonics(), indexing="ij"), axis=-1)
    mask = spec.band_mask() & np.any(hs != 0, axis=-1)
    n_list = hs[mask]
    c = coeff[mask]
    k = spec.wavevectors()[mask]
    w = np.linalg.norm(k, axis=-1)
    pref = np.sqrt(w / spec.volume)
    phase = np.exp(1j * w * t)

    a_vals: dict[ModeKey, complex] = {}
    b_vals: dict[ModeKey, complex] = {}
    for lam in (1, -1, 0):
        a = np.einsum("pi,pi->p", f_spinor(k, lam).conj(), c) * phase / pref
        b_conj = np.einsum("pi,pi->p", g_spinor(-k, lam).conj(), c) / (phase * pref)
        for n, av, bv in zip(n_list, a, b_conj):
            a_vals[ModeKey(tuple(int(v) for v in n), lam)] = complex(av)
            b_vals[ModeKey(tuple(int(-v) for v in n), lam)] = complex(np.conj(bv))

    biggest = max((abs(v) for v in (*a_vals.values(), *b_vals.values())), default=0.0)
    cut = drop * biggest
    out = AmplitudeSet(spec.box)
    for key in sorted(set(a_vals) | set(b_vals)):
        a = a_vals.get(key, 0j)
        b = b_vals.get(key, 0j)
        a = a if abs(a) > cut else 0j
        b = b if abs(b) > cut else 0j
        if biggest > 0 and (a or b):
            out.entries[key] = (a, b)
    return out


# -- potential route ---------------------------------------------------------


@dataclass
class PotentialAmplitudes:
    """c(k, s) for the four potential polarizations s = 0..3, keyed by (n, s)."""

    box: tuple[float, float, float]
    entries: dict[tuple[tuple[int, int, int], int], complex] = field(default_factory=dict)

    def __post_init__(self):
        self.box = tuple(float(b) for b in self.box)
        clean = {}
        for (n, s), c in self.entries.items():
            n = tuple(int(v) for v in n)
            if n == (0, 0, 0):
                raise DomainError("potential mode harmonic must be nonzero")
            if s not in (0, 1, 2, 3):
                raise ValueError(f"potential polarization index must be 0..3, got {s!r}")
            clean[(n, int(s))] = complex(c)
        self.entries = clean

    @property
    def volume(self) -> float:
        return float(np.prod(self.box))

    def c(self, n, s: int) -> complex:
        return self.entries.get((tuple(int(v) for v in n), s), 0j)

    def harmonics(self) -> list[tuple[int, int, int]]:
        return sorted({n for n, _ in self.entries})


def amplitudes_from_potential(pot: PotentialAmplitudes) -> AmplitudeSet:
    out = AmplitudeSet(pot.box)
    for n in pot.harmonics():
        c = [pot.c(n, s) for s in range(4)]
        for lam, a in ((1, 1j * c[1]), (-1, 1j * c[2]), (0, 1j * (c[3] - c[0]) / np.sqrt(2))):
            if a != 0:
                out.set(n, lam, a=a)
    return out


def potential_polarizations(k) -> np.ndarray:
    """e^mu(k, s) as rows s = 0..3 of a (4, 4) array, vectorized over leading axes."""
    k = np.asarray(k, dtype=float)
    out = np.zeros(k.shape[:-1] + (4, 4), dtype=complex)
    out[..., 0, 0] = 1.0
    out[..., 1, 1:] = eps(k, 1)
    out[..., 2, 1:] = eps(k, -1)
    out[..., 3, 1:] = eps(k, 0)
    return out


def synthesize_potential(pot: PotentialAmplitudes, spec: GridSpec, t: float = 0.0) -> tuple[np.ndarray, np.ndarray]:
    """A^mu(x, t) and dA^mu/dt on the grid, each shaped (N1, N2, N3, 4).

    A^mu = sum 1/sqrt(2 w V) e^mu(k, s) [c e^{-i(wt-kx)} + c* e^{+i(wt-kx)}].
    """
    if not np.allclose(pot.box, spec.box, rtol=1e-12, atol=0):
        raise ValueError(f"potential box {pot.box} does not match grid box {spec.box}")
    xs = spec.axes()
    a_mu = np.zeros(tuple(spec.dims) + (4,), dtype=complex)
    da_mu = np.zeros_like(a_mu)
    for (n, s), c in sorted(pot.entries.items()):
        if not spec.in_band(n):
            raise ValueError(f"potential harmonic {n} is not representable on a {spec.dims} grid")
        k = wavevector(n, pot.box)
        w = float(np.linalg.norm(k))
        e = potential_polarizations(k)[s]
        pref = 1.0 / np.sqrt(2 * w * pot.volume)
        for sign, amp in ((1, c), (-1, np.conj(c))):
            # sign=+1: e^{-i(wt - kx)}; sign=-1: e^{+i(wt - kx)}
            e1, e2, e3 = (np.exp(1j * sign * kc * x) for kc, x in zip(k, xs))
            phase = (e1[:, None, None] * e2[None, :, None] * e3[None, None, :]) * np.exp(-1j * sign * w * t)
            a_mu += phase[..., None] * (pref * amp * e)
            da_mu += phase[..., None] * (pref * amp * e * (-1j * sign * w))
    return a_mu, da_mu


def fields_from_potential(pot: PotentialAmplitudes, spec: GridSpec, t: float = 0.0) -> tuple[np.ndarray, np.ndarray]:
    """E = -grad A^0 - dA/dt and B = curl A, with spatial derivatives taken spectrally."""
    a_mu, da_mu = synthesize_potential(pot, spec, t)
    grad_a0 = spectral_gradient(a_mu[..., 0], spec)
    e = -grad_a0 - da_mu[..., 1:]
    kk = spec.wavevectors()
    a_hat = np.fft.fftn(a_mu[..., 1:], axes=(0, 1, 2))
    b = np.fft.ifftn(1j * np.cross(kk, a_hat), axes=(0, 1, 2))
    return e, b


def spinor_from_fields(E, B, spec: GridSpec) -> FieldGrid:
    """psi = (E, iB)/sqrt(2) without requiring E, B to be real."""
    return FieldGrid(spec, np.concatenate([E, 1j * np.asarray(B)], axis=-1) / np.sqrt(2.0))
