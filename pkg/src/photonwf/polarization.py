"""Helicity polarization triads and the four potential polarization 4-vectors."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import build_matrix_set

SQRT2 = np.sqrt(2.0)
HELICITIES = (1, -1, 0)

# Below this ratio of transverse magnitude to |k| the closed form loses its
# phase reference; the on-axis limit is used instead.
_POLE_RATIO = 1e-150


class DomainError(ValueError):
    """Raised for inputs outside an operation's domain (e.g. a zero wavevector)."""


def _check_k(k) -> np.ndarray:
    k = np.asarray(k, dtype=float)
    if k.shape[-1] != 3:
        raise ValueError(f"wavevector must have a trailing axis of length 3, got shape {k.shape}")
    norm = np.linalg.norm(k, axis=-1)
    if not np.all(np.isfinite(k)):
        raise DomainError("wavevector has non-finite components")
    if np.any(norm == 0.0):
        raise DomainError("zero wavevector has no polarization triad")
    return k


def eps_plus(k) -> np.ndarray:
    """Right-circular polarization vector eps(k, +1), vectorized over leading axes.

    On the third axis the closed form is 0/0; there we return the limit taken
    along the +x direction: (1, i, 0)/sqrt(2) for k3 > 0 and (-1, i, 0)/sqrt(2)
    for k3 < 0. The first is the unique limit; the second depends on the
    approach angle and is a fixed choice.
    """
    k = _check_k(k)
    k1, k2, k3 = k[..., 0], k[..., 1], k[..., 2]
    norm = np.linalg.norm(k, axis=-1)
    rho = np.hypot(k1, k2)
    on_axis = rho <= _POLE_RATIO * norm

    denom = np.where(on_axis, 1.0, k1 - 1j * k2)
    out = np.empty(k.shape, dtype=complex)
    out[..., 0] = (k1 * k3 - 1j * k2 * norm) / denom
    out[..., 1] = (k2 * k3 + 1j * k1 * norm) / denom
    out[..., 2] = -(k1 + 1j * k2)
    out /= (SQRT2 * norm)[..., None]

    if np.any(on_axis):
        sign = np.sign(k3)
        pole = np.stack([sign, 1j * np.ones_like(sign), np.zeros_like(sign)], axis=-1) / SQRT2
        out = np.where(on_axis[..., None], pole, out)
    return out


def eps(k, lam: int) -> np.ndarray:
    """eps(k, lam) for lam in {+1, -1, 0}, vectorized over leading axes of ``k``."""
    if lam == 1:
        return eps_plus(k)
    if lam == -1:
        return eps_plus(k).conj()
    if lam == 0:
        k = _check_k(k)
        return (k / np.linalg.norm(k, axis=-1, keepdims=True)).astype(complex)
    raise ValueError(f"helicity must be +1, -1 or 0, got {lam!r}")


def eps_matrix(k) -> np.ndarray:
    """Triad as columns ordered (+1, -1, 0): shape (..., 3, 3)."""
    p = eps_plus(k)
    z = eps(k, 0)
    return np.stack([p, p.conj(), z], axis=-1)


@dataclass(frozen=True)
class PolarizationTriad:
    k: np.ndarray
    eps_plus: np.ndarray
    eps_minus: np.ndarray
    eps_zero: np.ndarray

    def __getitem__(self, lam: int) -> np.ndarray:
        return {1: self.eps_plus, -1: self.eps_minus, 0: self.eps_zero}[lam]

    def as_matrix(self) -> np.ndarray:
        return np.stack([self.eps_plus, self.eps_minus, self.eps_zero], axis=-1)


def polarization_triad(k) -> PolarizationTriad:
    k = _check_k(k)
    if k.shape != (3,):
        raise ValueError("polarization_triad takes a single wavevector; use eps() for batches")
    p = eps_plus(k)
    return PolarizationTriad(k=k.copy(), eps_plus=p, eps_minus=p.conj(), eps_zero=eps(k, 0))


@dataclass(frozen=True)
class FourPolarizations:
    """e^mu(k, s) for s = 0..3, stored as rows of a (4, 4) complex array."""

    vectors: np.ndarray

    def __getitem__(self, s: int) -> np.ndarray:
        return self.vectors[s]

    @property
    def e0(self):
        return self.vectors[0]

    @property
    def e1(self):
        return self.vectors[1]

    @property
    def e2(self):
        return self.vectors[2]

    @property
    def e3(self):
        return self.vectors[3]


def four_polarizations(k) -> FourPolarizations:
    tri = polarization_triad(k)
    vecs = np.zeros((4, 4), dtype=complex)
    vecs[0, 0] = 1.0
    vecs[1, 1:] = tri.eps_plus
    vecs[2, 1:] = tri.eps_minus
    vecs[3, 1:] = tri.eps_zero
    return FourPolarizations(vectors=vecs)


def triad_residuals(k) -> dict[str, float]:
    """Max residuals of orthonormality, completeness, helicity, reality and conjugation."""
    k = _check_k(k)
    e = eps_matrix(k)
    khat = k / np.linalg.norm(k, axis=-1, keepdims=True)
    tau = build_matrix_set().tau
    gram = np.einsum("...ia,...ib->...ab", e.conj(), e)
    comp = np.einsum("...ia,...ja->...ij", e, e.conj())
    helicity_op = np.einsum("...l,lij->...ij", khat, tau)
    lams = np.array([1.0, -1.0, 0.0])
    hel = np.einsum("...ij,...ja->...ia", helicity_op, e) - e * lams
    return {
        "orthonormality": float(np.max(np.abs(gram - np.eye(3)))),
        "completeness": float(np.max(np.abs(comp - np.eye(3)))),
        "helicity": float(np.max(np.abs(hel))),
        "longitudinal_real": float(np.max(np.abs(e[..., 2].imag))),
        "longitudinal_is_khat": float(np.max(np.abs(e[..., 2] - khat))),
        "minus_is_conj_plus": float(np.max(np.abs(e[..., 1] - e[..., 0].conj()))),
    }
