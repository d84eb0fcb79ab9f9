"""Zitterbewegung of the field momentum: R/T coefficient vectors, closed-form series, extraction."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from .algebra import build_matrix_set
from .modes import AmplitudeSet, ModeKey
from .polarization import eps

Formalism = Literal["dual", "traditional"]
SQRT2 = np.sqrt(2.0)
LAMS = (1, -1, 0)


@dataclass(frozen=True)
class RTTable:
    k: np.ndarray
    R: dict[tuple[int, int], np.ndarray]
    T: dict[tuple[int, int], np.ndarray]


def rt_vectors(k) -> RTTable:
    """R(l, l') = (l + l')/N eps^+(k,l) tau eps(k,l'), T(l, l') = (1 + l l')/N eps^+(k,l) tau eps(-k,l')."""
    k = np.asarray(k, dtype=float)
    tau = build_matrix_set().tau
    R, T = {}, {}
    for l in LAMS:
        for lp in LAMS:
            norm = np.sqrt((1 + l * l) * (1 + lp * lp))
            left = eps(k, l).conj()
            R[l, lp] = (l + lp) / norm * np.einsum("i,nij,j->n", left, tau, eps(k, lp))
            T[l, lp] = (1 + l * lp) / norm * np.einsum("i,nij,j->n", left, tau, eps(-k, lp))
    return RTTable(k=k, R=R, T=T)


def rt_table_residuals(k) -> dict[str, float]:
    """Deviation of rt_vectors(k) from the closed-form table in terms of the triad."""
    k = np.asarray(k, dtype=float)
    t = rt_vectors(k)
    w = np.linalg.norm(k)
    ep, epm = eps(k, 1), eps(-k, 1)
    zero = np.zeros(3)
    expected_R = {
        (1, -1): zero, (-1, 1): zero, (0, 0): zero,
        (1, 1): k / w, (-1, -1): k / w,
        (0, 1): -ep / SQRT2, (-1, 0): -ep / SQRT2,
        (1, 0): -ep.conj() / SQRT2, (0, -1): -ep.conj() / SQRT2,
    }
    expected_T = {
        (1, -1): zero, (-1, 1): zero, (0, 0): zero, (1, 1): zero, (-1, -1): zero,
        (-1, 0): -ep / SQRT2, (1, 0): ep.conj() / SQRT2,
        (0, 1): epm / SQRT2, (0, -1): -epm.conj() / SQRT2,
    }
    res = {}
    for name, got, want in (("R", t.R, expected_R), ("T", t.T, expected_T)):
        for key, val in want.items():
            res[f"{name}{key}"] = float(np.max(np.abs(got[key] - val)))
    return res


@dataclass(frozen=True)
class MomentumSeries:
    times: np.ndarray
    J: np.ndarray  # (len(times), 3)
    formalism: str
    breakdown: dict[str, np.ndarray] | None = None

    def __post_init__(self):
        if len(self.times) != len(self.J):
            raise ValueError("times and J must have equal length")
        if len(self.times) > 1 and np.any(np.diff(self.times) <= 0):
            raise ValueError("times must be strictly increasing")


def energy(amps: AmplitudeSet) -> float:
    """Classical J^0 of the dual expansion: sum of w (|a|^2 + |b|^2) over all modes."""
    return float(sum(np.linalg.norm(amps.k(key)) * (abs(a) ** 2 + abs(b) ** 2) for key, (a, b) in amps.entries.items()))


def _terms_dual(amps: AmplitudeSet, times: np.ndarray) -> dict[str, np.ndarray]:
    a = lambda n, l: amps.a(n, l)
    b = lambda n, l: amps.b(n, l)
    harmonics = sorted({key.n for key in amps.entries})
    out = {name: np.zeros((len(times), 3)) for name in ("drift", "mixing", "zb_third", "zb_fourth")}
    for n in harmonics:
        k = amps.k(ModeKey(n, 1))
        w = np.linalg.norm(k)
        mn = tuple(-v for v in n)
        osc = np.exp(-2j * w * times)[:, None]
        for lam in (1, -1):
            out["drift"] += k * (abs(a(n, lam)) ** 2 + abs(b(n, lam)) ** 2)
            mix = w / SQRT2 * eps(k, lam) * (np.conj(a(n, 0)) * a(n, lam) + b(n, 0) * np.conj(b(n, lam)))
            out["mixing"] -= 2 * mix.real
            third = lam * w / SQRT2 * eps(k, -lam)
            out["zb_third"] += (
                third * (b(n, lam) * a(mn, 0) * osc + np.conj(a(n, lam)) * np.conj(b(mn, 0)) * osc.conj())
            ).real
            fourth = lam * w / SQRT2 * eps(-k, lam)
            out["zb_fourth"] += (
                fourth * (b(n, 0) * a(mn, lam) * osc + np.conj(a(n, 0)) * np.conj(b(mn, lam)) * osc.conj())
            ).real
    return out


def _terms_traditional(amps: AmplitudeSet, times: np.ndarray) -> dict[str, np.ndarray]:
    a = lambda n, l: amps.a(n, l)
    harmonics = sorted({key.n for key in amps.entries})
    out = {name: np.zeros((len(times), 3)) for name in ("drift", "mixing", "zb_third", "zb_fourth")}
    for n in harmonics:
        k = amps.k(ModeKey(n, 1))
        w = np.linalg.norm(k)
        mn = tuple(-v for v in n)
        osc = np.exp(-2j * w * times)[:, None]
        for lam in (1, -1):
            out["drift"] += k * abs(a(n, lam)) ** 2
            out["mixing"] -= 2 * (w / SQRT2 * eps(k, lam) * np.conj(a(n, 0)) * a(n, lam)).real
            coef = lam * w / (2 * SQRT2)
            out["zb_third"] -= 2 * (coef * eps(k, -lam) * a(n, lam) * a(mn, 0) * osc).real
            out["zb_fourth"] += 2 * (coef * eps(-k, lam) * a(n, 0) * a(mn, lam) * osc).real
    return out


def momentum_series(amps: AmplitudeSet, times, formalism: str = "dual", breakdown: bool = False) -> MomentumSeries:
    """Closed-form J(t) with amplitudes as c-numbers (no vacuum terms).

    ``dual`` uses both branches of the photon/dual-photon expansion;
    ``traditional`` uses only the a-amplitudes of the potential-based expansion.
    "H.c." partners are taken as complex conjugates of the whole term, coefficient
    vector included, so J(t) is real.
    """
    times = np.atleast_1d(np.asarray(times, dtype=float))
    if times.size == 0:
        raise ValueError("need at least one time")
    if formalism == "dual":
        terms = _terms_dual(amps, times)
    elif formalism == "traditional":
        terms = _terms_traditional(amps, times)
    else:
        raise ValueError(f"unknown formalism {formalism!r}; expected 'dual' or 'traditional'")
    total = sum(terms.values())
    return MomentumSeries(times=times, J=total, formalism=formalism, breakdown=terms if breakdown else None)


@dataclass(frozen=True)
class ZBSummary:
    constant: np.ndarray
    zb_amplitude: np.ndarray
    frequency: float
    bin_width: float


def zb_extract(series: MomentumSeries, min_samples: int = 64, flat_tol: float = 1e-12) -> ZBSummary:
    """Mean, peak oscillation magnitude per component, and the angular frequency of the DFT peak."""
    t = series.times
    if len(t) < min_samples:
        raise ValueError(f"need at least {min_samples} samples, got {len(t)}")
    dt = np.diff(t)
    if not np.allclose(dt, dt[0], rtol=1e-9, atol=0):
        raise ValueError("zb_extract needs uniformly sampled times")
    nsamp = len(t)
    span = dt[0] * nsamp
    constant = series.J.mean(axis=0)
    osc = series.J - constant
    amp = np.max(np.abs(osc), axis=0)
    bin_width = 2 * np.pi / span
    scale = max(float(np.max(np.abs(constant))), float(np.max(amp)), 1e-300)
    if np.max(amp) <= flat_tol * scale:
        return ZBSummary(constant=constant, zb_amplitude=np.zeros(3), frequency=0.0, bin_width=bin_width)
    power = np.sum(np.abs(np.fft.rfft(osc, axis=0)) ** 2, axis=1)
    power[0] = 0.0
    peak = int(np.argmax(power))
    return ZBSummary(constant=constant, zb_amplitude=amp, frequency=peak * bin_width, bin_width=bin_width)


def oscillation_orthogonality(series: MomentumSeries, k) -> float:
    """max |(J(t) - mean) . khat| relative to the oscillation size."""
    khat = np.asarray(k, dtype=float) / np.linalg.norm(k)
    osc = series.J - series.J.mean(axis=0)
    size = max(float(np.max(np.linalg.norm(osc, axis=1))), 1e-300)
    return float(np.max(np.abs(osc @ khat))) / size


def zb_displacement_amplitude(series: MomentumSeries, J0: float) -> np.ndarray:
    """Componentwise amplitude of the integral of (J(t) - mean)/J0, integrated spectrally.

    Assumes the window covers whole periods of every oscillating component.
    """
    t = series.times
    nsamp = len(t)
    dt = t[1] - t[0]
    osc = (series.J - series.J.mean(axis=0)) / J0
    spec = np.fft.fft(osc, axis=0)
    freqs = 2 * np.pi * np.fft.fftfreq(nsamp, dt)
    safe = np.where(freqs == 0, 1.0, freqs)
    integ = np.where(freqs[:, None] == 0, 0.0, spec / (1j * safe[:, None]))
    disp = np.fft.ifft(integ, axis=0).real
    return np.max(np.abs(disp), axis=0)
