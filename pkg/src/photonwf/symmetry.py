"""Discrete symmetries, generalized gauge phase, boosts, and pseudo-Lagrangian invariance checks.

Parity and time reversal act on amplitude sets through the map *induced* by
their action on fields, so that transforming amplitudes and then synthesizing
agrees with synthesizing and then transforming the field. The relabelings
that keep the helicity label fixed (parity) or flip it without conjugation
(time reversal) are kept as ``parity_relabel`` / ``time_reversal_relabel``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .algebra import METRIC, build_matrix_set, dirac_symbol
from .fieldgrid import FieldGrid, GridSpec
from .modes import AmplitudeSet, ModeKey, PlaneWave, evaluate_plane_waves, f_spinor, g_spinor, plane_waves, wavevector

LAMS = (1, -1, 0)
DUAL_MATRIX = np.block([[np.zeros((3, 3)), np.eye(3)], [-np.eye(3), np.zeros((3, 3))]]).astype(complex)


def _reflect(data: np.ndarray) -> np.ndarray:
    """x -> -x on a periodic grid: index i -> (-i) mod N on each axis."""
    out = data
    for axis in range(3):
        out = np.roll(np.flip(out, axis=axis), 1, axis=axis)
    return out


def _neg(n) -> tuple[int, int, int]:
    return tuple(-v for v in n)


def _remap(amps: AmplitudeSet, a_rule: Callable, b_rule: Callable, drop: float = 1e-14) -> AmplitudeSet:
    """Accumulate contributions a_rule(key, a) and b_rule(key, b), each an iterable of (new_key, value)."""
    acc_a: dict[ModeKey, complex] = {}
    acc_b: dict[ModeKey, complex] = {}
    for key, (a, b) in amps.sorted_items():
        if a != 0:
            for new_key, val in a_rule(key, a):
                acc_a[new_key] = acc_a.get(new_key, 0j) + val
        if b != 0:
            for new_key, val in b_rule(key, b):
                acc_b[new_key] = acc_b.get(new_key, 0j) + val
    biggest = max((abs(v) for v in (*acc_a.values(), *acc_b.values())), default=0.0)
    out = AmplitudeSet(amps.box)
    for key in sorted(set(acc_a) | set(acc_b)):
        a = acc_a.get(key, 0j)
        b = acc_b.get(key, 0j)
        a = a if abs(a) > drop * biggest else 0j
        b = b if abs(b) > drop * biggest else 0j
        if a or b:
            out.entries[key] = (a, b)
    out.virtual = {key for key in out.entries if key.lam == 0 and (key in amps.virtual or key.flipped() in amps.virtual)}
    return out


def _overlaps(amps: AmplitudeSet, key: ModeKey, target_basis: Callable, source: np.ndarray):
    """Yield (new_key at -n, <target(-k, lam')|source>) for every lam'."""
    k = amps.k(key)
    mn = _neg(key.n)
    for lp in LAMS:
        yield ModeKey(mn, lp), complex(np.vdot(target_basis(-k, lp), source))


# -- parity ------------------------------------------------------------------


def parity(obj):
    """psi(x, t) -> beta0 psi(-x, t), or the amplitude map it induces."""
    beta0 = build_matrix_set().beta0
    if isinstance(obj, FieldGrid):
        return FieldGrid(obj.spec, _reflect(obj.data) @ beta0.T)
    if isinstance(obj, AmplitudeSet):

        def a_rule(key, a):
            src = beta0 @ f_spinor(obj.k(key), key.lam)
            for new_key, ov in _overlaps(obj, key, f_spinor, src):
                yield new_key, ov * a

        def b_rule(key, b):
            # b* g(k) sits at wavevector -k; its image sits at +k, i.e. key -n
            src = beta0 @ g_spinor(obj.k(key), key.lam)
            for new_key, ov in _overlaps(obj, key, g_spinor, src):
                yield new_key, np.conj(ov) * b

        return _remap(obj, a_rule, b_rule)
    raise TypeError(f"parity acts on FieldGrid or AmplitudeSet, not {type(obj).__name__}")


def parity_relabel(amps: AmplitudeSet) -> AmplitudeSet:
    """a(k, lam) -> a(-k, lam), b(k, lam) -> -b(-k, lam): helicity label kept."""
    out = AmplitudeSet(amps.box)
    for key, (a, b) in amps.sorted_items():
        out.entries[key.flipped()] = (a, -b)
    out.virtual = {key.flipped() for key in amps.virtual}
    return out


# -- time reversal -----------------------------------------------------------


def time_reversal(obj):
    """Antiunitary time reversal psi'(x, t) = psi*(x, -t).

    For a FieldGrid the input is read as a snapshot at time t and the output
    is the reversed solution's snapshot at time -t. For an AmplitudeSet the
    induced map is returned, so synthesize(T(amps), -t) == T(synthesize(amps, t)).
    """
    if isinstance(obj, FieldGrid):
        return FieldGrid(obj.spec, obj.data.conj())
    if isinstance(obj, AmplitudeSet):

        def a_rule(key, a):
            src = f_spinor(obj.k(key), key.lam).conj()
            for new_key, ov in _overlaps(obj, key, f_spinor, src):
                yield new_key, ov * np.conj(a)

        def b_rule(key, b):
            src = g_spinor(obj.k(key), key.lam).conj()
            for new_key, ov in _overlaps(obj, key, g_spinor, src):
                # new b* = ov * b
                yield new_key, np.conj(ov * b)

        return _remap(obj, a_rule, b_rule)
    raise TypeError(f"time_reversal acts on FieldGrid or AmplitudeSet, not {type(obj).__name__}")


def time_reversal_relabel(obj):
    """Linear relabeling: a(k, +-1) -> a(-k, -+1), a(k, 0) -> a(k, 0), same for b.

    The field form psi(x, t) -> psi(x, -t) without conjugation leaves a snapshot
    unchanged (it only relabels the time), so it is the identity on FieldGrid.
    """
    if isinstance(obj, FieldGrid):
        return obj.copy()
    if isinstance(obj, AmplitudeSet):
        out = AmplitudeSet(obj.box)
        for key, (a, b) in obj.sorted_items():
            new = key if key.lam == 0 else ModeKey(_neg(key.n), -key.lam)
            out.entries[new] = (a, b)
        out.virtual = set(obj.virtual)
        return out
    raise TypeError(f"time_reversal_relabel acts on FieldGrid or AmplitudeSet, not {type(obj).__name__}")


# -- duality and gauge -------------------------------------------------------


def dual(obj):
    """psi -> M psi* with M = [[0, I], [-I, 0]]; on amplitudes a(k,l) -> b(k,-l), b(k,l) -> -a(k,-l)."""
    if isinstance(obj, FieldGrid):
        return FieldGrid(obj.spec, obj.data.conj() @ DUAL_MATRIX.T)
    if isinstance(obj, AmplitudeSet):
        out = AmplitudeSet(obj.box)
        for key, (a, b) in obj.sorted_items():
            new = ModeKey(key.n, -key.lam)
            out.entries[new] = (b, -a)
        out.virtual = {ModeKey(k.n, -k.lam) for k in obj.virtual}
        return out
    raise TypeError(f"dual acts on FieldGrid or AmplitudeSet, not {type(obj).__name__}")


def gauge_phase(obj, theta: float):
    """psi -> exp(-i theta) psi; a -> exp(-i theta) a, b -> exp(+i theta) b."""
    ph = np.exp(-1j * theta)
    if isinstance(obj, FieldGrid):
        return FieldGrid(obj.spec, obj.data * ph)
    if isinstance(obj, AmplitudeSet):
        out = obj.copy()
        out.entries = {key: (a * ph, b * np.conj(ph)) for key, (a, b) in obj.entries.items()}
        return out
    raise TypeError(f"gauge_phase acts on FieldGrid or AmplitudeSet, not {type(obj).__name__}")


# -- boosts ------------------------------------------------------------------


@dataclass(frozen=True)
class BoostParams:
    rapidity: float
    axis: tuple[float, float, float]

    def __post_init__(self):
        axis = np.asarray(self.axis, dtype=float)
        if axis.shape != (3,) or abs(np.linalg.norm(axis) - 1.0) > 1e-14:
            raise ValueError(f"boost axis must be a unit 3-vector, got {self.axis}")
        object.__setattr__(self, "axis", tuple(axis))

    @classmethod
    def along(cls, rapidity: float, direction) -> "BoostParams":
        d = np.asarray(direction, dtype=float)
        return cls(float(rapidity), tuple(d / np.linalg.norm(d)))

    @property
    def velocity(self) -> float:
        return float(np.tanh(self.rapidity))


def boost_matrix(p: BoostParams) -> np.ndarray:
    """exp(zeta axis.chi), exponentiated through the eigendecomposition of the Hermitian axis.chi."""
    gen = np.einsum("l,lij->ij", np.asarray(p.axis), build_matrix_set().chi)
    w, v = np.linalg.eigh(gen)
    return (v * np.exp(p.rapidity * w)) @ v.conj().T


def lorentz_matrix(p: BoostParams) -> np.ndarray:
    """Lambda acting on (omega, k): omega' = g(omega + v k.n), k' = k + [(g - 1) k.n + g v omega] n."""
    n = np.asarray(p.axis)
    g = np.cosh(p.rapidity)
    gv = np.sinh(p.rapidity)
    lam = np.eye(4)
    lam[0, 0] = g
    lam[0, 1:] = gv * n
    lam[1:, 0] = gv * n
    lam[1:, 1:] += (g - 1) * np.outer(n, n)
    return lam


def boost(obj, p: BoostParams, variant: str = "dual") -> list[PlaneWave]:
    """Boost every plane-wave term of an amplitude set: (omega, k) -> Lambda (omega, k), spinor -> A spinor."""
    if isinstance(obj, FieldGrid):
        raise TypeError("boosts need the analytic mode form (AmplitudeSet); raw grid samples cannot be boosted")
    if not isinstance(obj, AmplitudeSet):
        raise TypeError(f"boost acts on AmplitudeSet, not {type(obj).__name__}")
    return boost_plane_waves(plane_waves(obj, variant), p)


def boost_plane_waves(waves: list[PlaneWave], p: BoostParams) -> list[PlaneWave]:
    A = boost_matrix(p)
    L = lorentz_matrix(p)
    out = []
    for wave in waves:
        kmu = L @ np.concatenate([[wave.omega], wave.k])
        out.append(PlaneWave(float(kmu[0]), kmu[1:], A @ wave.spinor))
    return out


def symbol_residual(wave: PlaneWave) -> float:
    """|M(omega, k) v| for the plane-wave symbol M of beta^mu d_mu."""
    return float(np.linalg.norm(dirac_symbol(wave.omega, wave.k) @ wave.spinor))


def fields_of_spinor(v: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(E, B) with psi = (E, iB)/sqrt(2)."""
    return np.sqrt(2.0) * v[:3], -1j * np.sqrt(2.0) * v[3:]


def classical_boost_fields(E, B, p: BoostParams) -> tuple[np.ndarray, np.ndarray]:
    """Field amplitudes after actively boosting the configuration with velocity v along the axis.

    Parallel parts unchanged; E_perp -> g (E - v x B)_perp, B_perp -> g (B + v x E)_perp.
    """
    n = np.asarray(p.axis)
    g = np.cosh(p.rapidity)
    vvec = np.tanh(p.rapidity) * n
    E = np.asarray(E)
    B = np.asarray(B)
    e_par = n * np.dot(n, E)
    b_par = n * np.dot(n, B)
    e_new = e_par + g * ((E - e_par) - np.cross(vvec, B))
    b_new = b_par + g * ((B - b_par) + np.cross(vvec, E))
    return e_new, b_new


def evaluate_at(waves: list[PlaneWave], points: np.ndarray) -> np.ndarray:
    """psi at spacetime points (..., 4) = (t, x, y, z)."""
    points = np.asarray(points, dtype=float)
    out = np.zeros(points.shape[:-1] + (6,), dtype=complex)
    for wave in waves:
        phase = np.exp(-1j * (wave.omega * points[..., 0] - points[..., 1:] @ wave.k))
        out += phase[..., None] * wave.spinor
    return out


def scalar_density(psi: np.ndarray) -> np.ndarray:
    """psi-bar psi = psi^+ beta0 psi, real part."""
    d = np.diag(build_matrix_set().beta0).real
    return np.einsum("...i,i,...i->...", psi.conj(), d, psi).real


def lorentz_scalar_check(amps: AmplitudeSet, p: BoostParams, points: np.ndarray, variant: str = "dual") -> tuple[float, float]:
    """Compare psi-bar psi before the boost at x with after the boost at Lambda x.

    Returns (max pointwise difference, difference of the sums over the sample set).
    """
    waves = plane_waves(amps, variant)
    boosted = boost_plane_waves(waves, p)
    L = lorentz_matrix(p)
    before = scalar_density(evaluate_at(waves, points))
    mapped = np.asarray(points) @ L.T
    after = scalar_density(evaluate_at(boosted, mapped))
    return float(np.max(np.abs(after - before))), float(abs(after.sum() - before.sum()))


# -- pseudo-Lagrangian -------------------------------------------------------


@dataclass(frozen=True)
class LagrangianReport:
    generator: tuple[int, int]
    epsilon: float
    lagrangian_max: float
    first_order_max: float
    finite_max: float
    boost_identity_max: float | None


def _fields_and_derivatives(waves, spec: GridSpec, t: float):
    psi = evaluate_plane_waves(waves, spec, t)
    dpsi = np.stack([evaluate_plane_waves(waves, spec, t, derivative=mu) for mu in range(4)], axis=0)
    return psi, dpsi


def _bar(psi):
    return psi.conj() * np.diag(build_matrix_set().beta0).real


def lagrangian_density(psi: np.ndarray, dpsi: np.ndarray) -> np.ndarray:
    """psi-bar (i beta^mu d_mu) psi; dpsi is (4, ..., 6) holding d_mu psi."""
    beta_mu = build_matrix_set().beta_mu
    d = 1j * np.einsum("mij,m...j->...i", beta_mu, dpsi)
    return np.einsum("...i,...i->...", _bar(psi), d)


def _epsilon_tensor(generator: tuple[int, int], epsilon: float) -> np.ndarray:
    rho, lam = generator
    if rho == lam or not (0 <= rho < 4 and 0 <= lam < 4):
        raise ValueError(f"generator indices must be two distinct values in 0..3, got {generator}")
    e = np.zeros((4, 4))
    e[rho, lam] = epsilon
    e[lam, rho] = -epsilon
    return e


def pseudo_lagrangian_check(amps: AmplitudeSet, generator: tuple[int, int], epsilon: float, spec: GridSpec, t: float = 0.0, variant: str = "dual") -> LagrangianReport:
    """Change of psi-bar (i beta^mu d_mu) psi under the infinitesimal Lorentz transformation (rho, lam).

    ``generator`` = (l, m) with l, m >= 1 selects a rotation, (l, 0) a boost.
    Reports max over the grid of: the density itself, its first-order change
    (the linear-in-epsilon formula), the finite change L' - L using the
    first-order transformation A = 1 - i eps^{mu nu} Sigma_{mu nu}/2 and
    a = g + eps, and, for boosts, the residual of the boost-sector identity.
    """
    if abs(epsilon) > 1e-3:
        raise ValueError("epsilon must be small (|epsilon| <= 1e-3)")
    ms = build_matrix_set()
    g = METRIC
    eps_up = _epsilon_tensor(generator, epsilon)
    eps_low = g @ eps_up @ g
    sigma = ms.sigma  # lower indices
    beta_mu = ms.beta_mu  # upper index
    beta_low = np.einsum("mn,nij->mij", g, beta_mu)

    waves = plane_waves(amps, variant)
    psi, dpsi = _fields_and_derivatives(waves, spec, t)
    bar = _bar(psi)
    lag = lagrangian_density(psi, dpsi)

    # first-order change: (i/2) eps^{rl} bar [(beta_r d_l - beta_l d_r) - i [beta^mu, Sigma_rl] d_mu] psi
    first = np.zeros(lag.shape, dtype=complex)
    for r in range(4):
        for l in range(4):
            if eps_up[r, l] == 0:
                continue
            op = np.einsum("ij,...j->...i", beta_low[r], dpsi[l]) - np.einsum("ij,...j->...i", beta_low[l], dpsi[r])
            for mu in range(4):
                comm = beta_mu[mu] @ sigma[r, l] - sigma[r, l] @ beta_mu[mu]
                op = op - 1j * np.einsum("ij,...j->...i", comm, dpsi[mu])
            first += 0.5j * eps_up[r, l] * np.einsum("...i,...i->...", bar, op)

    # finite change with the first-order transformation
    A = np.eye(6) - 0.5j * np.einsum("mn,mnij->ij", eps_up, sigma)
    left = ms.beta0 @ A.conj().T @ ms.beta0
    a = g + eps_low
    dpsi_up = np.einsum("ns,s...i->n...i", g, dpsi)  # d^nu psi
    grad = np.einsum("mn,n...i->m...i", a, dpsi_up)  # a_{mu nu} d^nu psi
    Agrad = np.einsum("ij,m...j->m...i", A, grad)
    inner = 1j * np.einsum("mij,m...j->...i", beta_mu, Agrad)
    lag_prime = np.einsum("...i,ij,...j->...", bar, left, inner)
    finite = lag_prime - lag

    boost_id = None
    rho, lam = generator
    if 0 in generator:
        l = (rho or lam) - 1
        # bar [-(beta . d) chi_l + beta0 d_l] psi, derivative index lowered
        d_chi = np.stack([evaluate_plane_waves([PlaneWave(w.omega, w.k, ms.chi[l] @ w.spinor) for w in waves], spec, t, derivative=m) for m in (1, 2, 3)], axis=0)
        bdc = np.einsum("mij,m...j->...i", ms.beta, d_chi)
        term = -bdc + np.einsum("ij,...j->...i", ms.beta0, dpsi[l + 1])
        boost_id = float(np.max(np.abs(np.einsum("...i,...i->...", bar, term))))

    return LagrangianReport(
        generator=tuple(generator),
        epsilon=float(epsilon),
        lagrangian_max=float(np.max(np.abs(lag))),
        first_order_max=float(np.max(np.abs(first))),
        finite_max=float(np.max(np.abs(finite))),
        boost_identity_max=boost_id,
    )
