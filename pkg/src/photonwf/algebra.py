"""Fixed matrices of the (1,0)+(0,1) representation and plane-wave operator symbols.

Conventions used throughout the package: natural units, metric diag(1,-1,-1,-1),
plane waves exp(-i(w t - k.x)) so that d/dt -> -i w and grad -> i k.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

I3 = np.eye(3, dtype=complex)
I6 = np.eye(6, dtype=complex)
METRIC = np.diag([1.0, -1.0, -1.0, -1.0])


def levi_civita() -> np.ndarray:
    eps = np.zeros((3, 3, 3))
    for l, m, n in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        eps[l, m, n] = 1.0
        eps[l, n, m] = -1.0
    return eps


LEVI_CIVITA = levi_civita()


@dataclass(frozen=True)
class MatrixSet:
    """The matrices tau, beta^mu, S, chi and the Lorentz generators Sigma_{mu nu}.

    ``sigma`` is a (4, 4, 6, 6) array indexed by the two Lorentz indices; it is
    antisymmetric in those indices.
    """

    tau: np.ndarray  # (3, 3, 3)
    beta0: np.ndarray  # (6, 6)
    beta: np.ndarray  # (3, 6, 6)
    spin: np.ndarray  # (3, 6, 6)
    chi: np.ndarray  # (3, 6, 6)
    sigma: np.ndarray  # (4, 4, 6, 6)

    @property
    def beta_mu(self) -> np.ndarray:
        """beta^mu stacked as (4, 6, 6), upper index."""
        return np.concatenate([self.beta0[None], self.beta], axis=0)


@lru_cache(maxsize=None)
def build_matrix_set() -> MatrixSet:
    # (tau_l)_{mn} = -i eps_{lmn}
    tau = -1j * LEVI_CIVITA.astype(complex)
    beta0 = np.diag([1, 1, 1, -1, -1, -1]).astype(complex)
    zero = np.zeros((3, 3), dtype=complex)
    beta = np.array([np.block([[zero, t], [-t, zero]]) for t in tau])
    spin = np.array([np.kron(np.eye(2), t) for t in tau])
    chi = np.array([beta0 @ b for b in beta])

    sigma = np.zeros((4, 4, 6, 6), dtype=complex)
    for l in range(3):
        for m in range(3):
            sigma[l + 1, m + 1] = np.einsum("n,nij->ij", LEVI_CIVITA[l, m], spin)
        sigma[l + 1, 0] = 1j * chi[l]
        sigma[0, l + 1] = -1j * chi[l]

    for arr in (tau, beta0, beta, spin, chi, sigma):
        arr.setflags(write=False)
    return MatrixSet(tau=tau, beta0=beta0, beta=beta, spin=spin, chi=chi, sigma=sigma)


def _as_k(k) -> np.ndarray:
    k = np.asarray(k, dtype=float)
    if k.shape[-1] != 3:
        raise ValueError(f"wavevector must have a trailing axis of length 3, got shape {k.shape}")
    return k


def hamiltonian_symbol(k) -> np.ndarray:
    """H(k) = beta0 (beta . k) = chi . k, the Fourier symbol of -i beta0 beta . grad.

    Broadcasts over leading axes of ``k``.
    """
    k = _as_k(k)
    return np.einsum("...l,lij->...ij", k, build_matrix_set().chi)


def omega_symbol(k) -> np.ndarray:
    """Symbol of the operator I2 (x) (grad grad^T) under grad -> i k, i.e. -I2 (x) k k^T."""
    k = _as_k(k)
    outer = -np.einsum("...i,...j->...ij", k, k).astype(complex)
    out = np.zeros(k.shape[:-1] + (6, 6), dtype=complex)
    out[..., :3, :3] = outer
    out[..., 3:, 3:] = outer
    return out


def dirac_symbol(omega, k) -> np.ndarray:
    """Plane-wave symbol of beta^mu d_mu: -i w beta0 + i beta . k."""
    ms = build_matrix_set()
    k = _as_k(k)
    omega = np.asarray(omega, dtype=float)
    return -1j * omega[..., None, None] * ms.beta0 + 1j * np.einsum("...l,lij->...ij", k, ms.beta)


def factorization_residual(omega: float, k) -> float:
    """max-norm of M^2 - [(|k|^2 - w^2) I + Omega(k)] for the symbol M of beta^mu d_mu."""
    k = _as_k(k)
    m = dirac_symbol(omega, k)
    target = (k @ k - omega**2) * I6 + omega_symbol(k)
    return float(np.max(np.abs(m @ m - target)))


def commutator(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return x @ y - y @ x


def anticommutator(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return x @ y + y @ x


def identity_residuals() -> dict[str, float]:
    """Max-norm residuals of every exact identity the matrix set must satisfy."""
    ms = build_matrix_set()
    res: dict[str, float] = {}
    res["tau_commutators"] = max(
        np.max(np.abs(commutator(ms.tau[l], ms.tau[m]) - 1j * np.einsum("n,nij->ij", LEVI_CIVITA[l, m], ms.tau)))
        for l in range(3)
        for m in range(3)
    )
    res["beta0_hermitian"] = np.max(np.abs(ms.beta0 - ms.beta0.conj().T))
    res["beta0_squared"] = np.max(np.abs(ms.beta0 @ ms.beta0 - I6))
    res["beta_antihermitian"] = max(np.max(np.abs(b + b.conj().T)) for b in ms.beta)
    res["chi_hermitian"] = max(np.max(np.abs(c - c.conj().T)) for c in ms.chi)
    res["beta0_beta_anticommute"] = max(np.max(np.abs(anticommutator(ms.beta0, b))) for b in ms.beta)
    res["spin_squared"] = np.max(np.abs(np.einsum("lij,ljk->ik", ms.spin, ms.spin) - 2 * I6))
    res["spin_is_I2_kron_tau"] = max(np.max(np.abs(ms.spin[l] - np.kron(np.eye(2), ms.tau[l]))) for l in range(3))
    res["sigma_antisymmetric"] = np.max(np.abs(ms.sigma + ms.sigma.transpose(1, 0, 2, 3)))
    res["sigma_rotations"] = max(
        np.max(np.abs(ms.sigma[l + 1, m + 1] - np.einsum("n,nij->ij", LEVI_CIVITA[l, m], ms.spin)))
        for l in range(3)
        for m in range(3)
    )
    res["sigma_boosts"] = max(np.max(np.abs(ms.sigma[l + 1, 0] - 1j * ms.chi[l])) for l in range(3))
    return {k: float(v) for k, v in res.items()}
