"""Symbolic creation/annihilation polynomials with an indefinite-metric commutator algebra.

Operators are never represented on a Hilbert space: everything is rewrite
rules. Families:

* ``a``, ``b``: photon / dual-photon modes, indexed by ``ModeKey(n, lam)``;
  ``[a, a^+] = [b, b^+] = 1`` for lam = +-1 and 0 for lam = 0.
* ``c``: potential modes indexed by ``(n, s)``, s = 0..3, with
  ``[c(n, s), c^+(n', s')] = -g_ss' delta_nn'``.

Mixed a/c brackets are evaluated by rewriting ``a`` in terms of ``c``.
There is no such rewriting for ``b``, so b/c brackets raise.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from .algebra import METRIC, build_matrix_set
from .modes import AmplitudeSet, ModeKey, f_spinor, g_spinor, wavevector

DROP = 1e-14
FAMILIES = ("a", "b", "c")
_RANK = {("a", True): 0, ("b", True): 1, ("c", True): 2, ("a", False): 3, ("b", False): 4, ("c", False): 5}
SQRT2 = np.sqrt(2.0)

# a(n, lam) = sum coef * c(n, s)
_A_TO_C = {1: ((1j, 1),), -1: ((1j, 2),), 0: ((1j / SQRT2, 3), (-1j / SQRT2, 0))}


@dataclass(frozen=True, order=False)
class LadderOp:
    family: str
    dagger: bool
    mode: tuple  # ModeKey for a/b, (n, s) for c

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown operator family {self.family!r}")
        n, idx = self.mode
        n = tuple(int(v) for v in n)
        if len(n) != 3:
            raise ValueError(f"mode harmonic must have 3 integers, got {n}")
        if self.family == "c":
            if idx not in (0, 1, 2, 3):
                raise ValueError(f"potential polarization index must be 0..3, got {idx}")
            object.__setattr__(self, "mode", (n, int(idx)))
        else:
            object.__setattr__(self, "mode", ModeKey.make(n, idx))

    @property
    def sort_key(self):
        n, idx = self.mode
        return (_RANK[self.family, self.dagger], tuple(n), int(idx))

    def adjoint(self) -> "LadderOp":
        return LadderOp(self.family, not self.dagger, self.mode)

    def label(self, with_mode: bool = True) -> str:
        name = self.family + ("d" if self.dagger else "")
        if not with_mode:
            return name
        n, idx = self.mode
        ntxt = ",".join(str(v) for v in n)
        itxt = f"s={idx}" if self.family == "c" else f"{idx:+d}"
        return f"{name}({ntxt};{itxt})"


def a(n, lam: int) -> LadderOp:
    return LadderOp("a", False, (n, lam))


def ad(n, lam: int) -> LadderOp:
    return LadderOp("a", True, (n, lam))


def b(n, lam: int) -> LadderOp:
    return LadderOp("b", False, (n, lam))


def bd(n, lam: int) -> LadderOp:
    return LadderOp("b", True, (n, lam))


def c(n, s: int) -> LadderOp:
    return LadderOp("c", False, (n, s))


def cd(n, s: int) -> LadderOp:
    return LadderOp("c", True, (n, s))


Word = tuple[LadderOp, ...]


@dataclass
class LadderPoly:
    """Sum of coefficient * ordered operator word."""

    terms: dict[Word, complex] = field(default_factory=dict)

    @classmethod
    def scalar(cls, value: complex) -> "LadderPoly":
        return cls({(): complex(value)}).simplified()

    @classmethod
    def of(cls, *ops: LadderOp, coef: complex = 1.0) -> "LadderPoly":
        return cls({tuple(ops): complex(coef)}).simplified()

    def simplified(self, drop: float = DROP) -> "LadderPoly":
        return LadderPoly({w: c for w, c in self.terms.items() if abs(c) > drop})

    def _coerce(self, other) -> "LadderPoly":
        if isinstance(other, LadderPoly):
            return other
        if isinstance(other, LadderOp):
            return LadderPoly.of(other)
        if np.isscalar(other):
            return LadderPoly.scalar(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, 0j) + c
        return LadderPoly(out).simplified()

    __radd__ = __add__

    def __neg__(self):
        return LadderPoly({w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if np.isscalar(other):
            return LadderPoly({w: c * other for w, c in self.terms.items()}).simplified()
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict[Word, complex] = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 + w2
                out[w] = out.get(w, 0j) + c1 * c2
        return LadderPoly(out).simplified()

    def __rmul__(self, other):
        if np.isscalar(other):
            return self * other
        return self._coerce(other) * self

    def adjoint(self) -> "LadderPoly":
        return LadderPoly({tuple(op.adjoint() for op in reversed(w)): np.conj(c) for w, c in self.terms.items()})

    def constant(self) -> complex:
        return self.terms.get((), 0j)

    def is_close(self, other: "LadderPoly", tol: float = 1e-12) -> bool:
        diff = normal_order(self - other)
        return all(abs(c) <= tol for c in diff.terms.values())

    def __eq__(self, other):
        if not isinstance(other, LadderPoly):
            return NotImplemented
        return self.is_close(other, tol=DROP)

    __hash__ = None

    def canonical_terms(self) -> list[tuple[Word, complex]]:
        return sorted(self.terms.items(), key=lambda item: (len(item[0]) == 0, [op.sort_key for op in item[0]]))

    def __repr__(self):
        return f"LadderPoly({format_poly(self)})"


# -- brackets ----------------------------------------------------------------


def _c_expansion(op: LadderOp) -> list[tuple[complex, LadderOp]]:
    """Rewrite an a-family operator as a combination of c-family operators."""
    if op.family == "c":
        return [(1.0, op)]
    if op.family == "b":
        raise ValueError("dual-photon operators have no potential-mode image")
    n, lam = op.mode
    terms = [(coef, LadderOp("c", False, (n, s))) for coef, s in _A_TO_C[lam]]
    if op.dagger:
        terms = [(np.conj(coef), o.adjoint()) for coef, o in terms]
    return terms


def _elementary(x: LadderOp, y: LadderOp) -> complex:
    """[x, y] for an annihilator x and creator y."""
    if x.family == y.family:
        if x.mode != y.mode:
            return 0.0
        if x.family == "c":
            s = x.mode[1]
            return -METRIC[s, s]
        return 0.0 if x.mode.lam == 0 else 1.0
    families = {x.family, y.family}
    if families == {"a", "b"}:
        return 0.0
    if "b" in families:
        raise ValueError(f"commutator of {x.label()} with {y.label()} is undefined: b has no potential-mode image")
    total = 0j
    for cx, ox in _c_expansion(x):
        for cy, oy in _c_expansion(y):
            total += cx * cy * _elementary(ox, oy)
    return total


def op_bracket(x: LadderOp, y: LadderOp) -> complex:
    """[x, y] for single operators (always a scalar in this algebra)."""
    if not x.dagger and y.dagger:
        return _elementary(x, y)
    if x.dagger and not y.dagger:
        return -_elementary(y, x)
    return 0.0


# -- normal ordering ---------------------------------------------------------


def _normal_order_word(word: Word, coef: complex, out: dict[Word, complex]) -> None:
    stack = [(word, coef)]
    while stack:
        w, cf = stack.pop()
        for i in range(len(w) - 1):
            if not w[i].dagger and w[i + 1].dagger:
                swapped = w[:i] + (w[i + 1], w[i]) + w[i + 2 :]
                stack.append((swapped, cf))
                br = _elementary(w[i], w[i + 1])
                if br != 0:
                    stack.append((w[:i] + w[i + 2 :], cf * br))
                break
        else:
            creators = sorted((op for op in w if op.dagger), key=lambda o: o.sort_key)
            annihilators = sorted((op for op in w if not op.dagger), key=lambda o: o.sort_key)
            key = tuple(creators + annihilators)
            out[key] = out.get(key, 0j) + cf


def normal_order(x: LadderPoly) -> LadderPoly:
    """Creators left of annihilators in every term, each group sorted canonically."""
    out: dict[Word, complex] = {}
    for w, cf in x.terms.items():
        _normal_order_word(w, cf, out)
    return LadderPoly(out).simplified()


def commutator(x, y) -> LadderPoly:
    """[x, y] = xy - yx, reduced by the bracket rules and normal-ordered."""
    x = x if isinstance(x, LadderPoly) else LadderPoly.of(x)
    y = y if isinstance(y, LadderPoly) else LadderPoly.of(y)
    return normal_order(x * y - y * x)


def substitute_potential_ops(x: LadderPoly) -> LadderPoly:
    """Replace every a / a^+ by its combination of potential-mode operators."""
    out = LadderPoly()
    for w, cf in x.terms.items():
        term = LadderPoly.scalar(cf)
        for op in w:
            if op.family == "c":
                term = term * LadderPoly.of(op)
            else:
                term = term * LadderPoly({(o,): complex(k) for k, o in _c_expansion(op)})
        out = out + term
    return out


# -- expectations ------------------------------------------------------------


VACUUM = "vacuum"


def expectation(x: LadderPoly, state="vacuum") -> complex:
    """<x> in the vacuum, or in the coherent state given by an AmplitudeSet."""
    ordered = normal_order(x)
    if isinstance(state, str):
        if state != VACUUM:
            raise ValueError(f"unknown state {state!r}")
        return complex(ordered.constant())
    if not isinstance(state, AmplitudeSet):
        raise TypeError("state must be 'vacuum' or an AmplitudeSet")
    total = 0j
    for w, cf in ordered.terms.items():
        val = complex(cf)
        for op in w:
            if op.family == "c":
                raise ValueError("coherent expectation is defined for a/b operators only")
            amp = state.a(*op.mode) if op.family == "a" else state.b(*op.mode)
            val *= np.conj(amp) if op.dagger else amp
        total += val
    return total


# -- field momentum ----------------------------------------------------------


def momentum_bilinear(modes: Iterable[ModeKey], component: int, t: float, box) -> LadderPoly:
    """Operator J^mu = integral psi^+ M psi over the box, M = I (mu = 0) or chi_l (mu = l).

    Uses the operator form of the dual expansion with b^* -> b^+; time enters
    only through the e^{+-2 i w t} factors of a^+ b^+ and b a terms.
    """
    if component not in (0, 1, 2, 3):
        raise ValueError(f"component must be 0..3, got {component}")
    keys = sorted({ModeKey.make(*m) for m in modes})
    mat = np.eye(6) if component == 0 else build_matrix_set().chi[component - 1]
    out: dict[Word, complex] = {}

    def add(word, val):
        if abs(val) > DROP:
            out[word] = out.get(word, 0j) + val

    for k1 in keys:
        q1 = wavevector(k1.n, box)
        w = float(np.linalg.norm(q1))
        for k2 in keys:
            q2 = wavevector(k2.n, box)
            if k1.n == k2.n:
                add((ad(*k1), a(*k2)), w * np.vdot(f_spinor(q1, k1.lam), mat @ f_spinor(q2, k2.lam)))
                add((b(*k1), bd(*k2)), w * np.vdot(g_spinor(q1, k1.lam), mat @ g_spinor(q2, k2.lam)))
            elif all(u == -v for u, v in zip(k1.n, k2.n)):
                ph = np.exp(2j * w * t)
                add((ad(*k1), bd(*k2)), w * ph * np.vdot(f_spinor(q1, k1.lam), mat @ g_spinor(q2, k2.lam)))
                add((b(*k1), a(*k2)), w * np.conj(ph) * np.vdot(g_spinor(q1, k1.lam), mat @ f_spinor(q2, k2.lam)))
    return LadderPoly(out).simplified()


# -- text form ---------------------------------------------------------------


def _format_number(z: complex) -> str:
    z = complex(z)
    re = 0.0 if abs(z.real) <= DROP else z.real
    im = 0.0 if abs(z.imag) <= DROP else z.imag
    if im == 0.0:
        return f"{re:.12g}"
    if re == 0.0:
        return f"{im:.12g}i"
    return f"({re:.12g}{im:+.12g}i)"


def format_poly(x: LadderPoly, factor: complex | None = None, label: str = "ω", with_modes: bool | None = None) -> str:
    """Stable plain-text form: terms in canonical order, constant last.

    With ``factor`` every coefficient is divided by it and the sum is printed as
    ``label·(...)``. Mode indices are omitted when every operator acts on a
    single mode, unless ``with_modes`` says otherwise.
    """
    terms = x.canonical_terms()
    if with_modes is None:
        modes = {(op.family == "c", op.mode) for w, _ in terms for op in w}
        with_modes = len({m for _, m in modes}) > 1 or any(isc for isc, _ in modes)
    pieces = []
    for w, cf in terms:
        val = cf / factor if factor is not None else cf
        ops = "·".join(op.label(with_modes) for op in w)
        num = _format_number(val)
        neg = num.startswith("-")
        mag = num[1:] if neg else num
        if not ops:
            body = mag
        elif mag == "1":
            body = ops
        else:
            body = f"{mag}·{ops}"
        pieces.append(("-" if neg else "+", body))
    if not pieces:
        text = "0"
    else:
        sign, first = pieces[0]
        text = ("-" if sign == "-" else "") + first
        for sign, body in pieces[1:]:
            text += f" {sign} {body}"
    if factor is not None:
        return f"{label}·({text})"
    return text


def terms_by_word(x: LadderPoly) -> Mapping[Word, complex]:
    return dict(x.canonical_terms())
