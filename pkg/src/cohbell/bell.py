"""Bell-type coherence functionals and the CHSH functional.

All three functionals combine the four setting pairs in the order
QS, RS, RT, QT with a minus sign on QT.  On product states the l1 form is
bounded by 8, the relative-entropy form by 4 and CHSH by 2.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .coherence import ObservableSetting, computational, hadamard_basis, setting_from_observable
from .errors import InvalidDimension
from .linalg import X, Z, von_neumann_entropy
from .states import QState

PAIR_LABELS = ("QS", "RS", "RT", "QT")
SIGNS = np.array(kernels.SIGNS)

BOUND_L1 = 8.0
BOUND_REL_ENT = 4.0
BOUND_CHSH = 2.0
TSIRELSON = 2.0 * math.sqrt(2.0)
VIOLATION_SLACK = 1e-12

ALPHA = math.sqrt(2.0 + math.sqrt(2.0))
BETA = math.sqrt(2.0 - math.sqrt(2.0))


@dataclass(frozen=True)
class SettingQuartet:
    """Settings Q, R for party A and S, T for party B."""

    q: ObservableSetting
    r: ObservableSetting
    s: ObservableSetting
    t: ObservableSetting

    def bases(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        return self.q.basis, self.r.basis, self.s.basis, self.t.basis


@dataclass(frozen=True)
class BellReport:
    functional: str
    terms: dict
    value: float
    bound: float

    @property
    def violated(self) -> bool:
        return self.value > self.bound + VIOLATION_SLACK

    @property
    def margin(self) -> float:
        return self.value - self.bound

    def to_dict(self) -> dict:
        return {
            "functional": self.functional,
            "terms": dict(self.terms),
            "value": self.value,
            "bound": self.bound,
            "violated": self.violated,
            "margin": self.margin,
        }


def _stats(rho: QState, quartet: SettingQuartet):
    if rho.dim != 4:
        raise InvalidDimension("Bell functionals need a two-qubit state")
    return kernels.bell_stats(rho.mat, *quartet.bases())


def _report(name: str, terms: np.ndarray, value: float, bound: float) -> BellReport:
    return BellReport(name, dict(zip(PAIR_LABELS, map(float, terms))), float(value), bound)


def b_cl1(rho: QState, quartet: SettingQuartet) -> BellReport:
    """Sum over pairs of ``C_l1 + 1`` with the QT term subtracted; bound 8."""
    l1, _, _ = _stats(rho, quartet)
    terms = l1 + 1.0
    return _report("l1", terms, SIGNS @ terms, BOUND_L1)


def b_cr(rho: QState, quartet: SettingQuartet) -> BellReport:
    """Same combination of relative entropies of coherence; bound 4."""
    _, h, _ = _stats(rho, quartet)
    terms = h - von_neumann_entropy(rho.mat)
    return _report("rel-ent", terms, SIGNS @ terms, BOUND_REL_ENT)


def chsh(rho: QState, quartet: SettingQuartet) -> BellReport:
    """``|<QS> + <RS> + <RT> - <QT>|`` for the +-1 observables of each setting."""
    _, _, e = _stats(rho, quartet)
    return _report("chsh", e, abs(SIGNS @ e), BOUND_CHSH)


def chsh_direct(rho: QState, quartet: SettingQuartet) -> float:
    """CHSH value from explicit observables ``Tr(rho A (x) B)``; slow reference path."""
    obs = [quartet.q.observable(), quartet.r.observable(), quartet.s.observable(), quartet.t.observable()]
    total = 0.0
    for sign, (i, j) in zip(SIGNS, kernels.PAIRS):
        total += sign * np.trace(rho.mat @ np.kron(obs[i], obs[j])).real
    return abs(total)


def evaluate(rho: QState, quartet: SettingQuartet, functional: str) -> BellReport:
    try:
        fn = {"l1": b_cl1, "rel-ent": b_cr, "chsh": chsh}[functional]
    except KeyError:
        raise ValueError(f"unknown functional {functional!r}") from None
    return fn(rho, quartet)


def quartet_example1() -> SettingQuartet:
    """Q, T computational; R from the eigenstates of ``(-Z-X)/sqrt2``; S = {|+>, |->}."""
    plus = np.array([1.0, 1.0]) / math.sqrt(2.0)
    zero = np.array([1.0, 0.0])
    r = ObservableSetting.from_vectors((plus + zero) / ALPHA, (plus - zero) / BETA, "R")
    return SettingQuartet(computational("Q"), r, hadamard_basis("S"), computational("T"))


def quartet_example2() -> SettingQuartet:
    s2 = 1.0 / math.sqrt(2.0)
    r = ObservableSetting(np.array([[s2, 1j * s2], [1j * s2, s2]]), "R")
    s = ObservableSetting(np.array([[s2, s2], [-s2, s2]], dtype=complex), "S")
    return SettingQuartet(computational("Q"), r, s, computational("T"))


def chsh_optimal_observables() -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    return Z, X, (-Z - X) / math.sqrt(2.0), (Z - X) / math.sqrt(2.0)


def quartet_chsh_optimal() -> SettingQuartet:
    """Eigenbases of Q=Z, R=X, S=(-Z-X)/sqrt2, T=(Z-X)/sqrt2, +1 eigenvector first."""
    q, r, s, t = chsh_optimal_observables()
    return SettingQuartet(
        setting_from_observable(q, "Q"),
        setting_from_observable(r, "R"),
        setting_from_observable(s, "S"),
        setting_from_observable(t, "T"),
    )


def quartet_from_bloch(params) -> SettingQuartet:
    """Quartet from eight Bloch angles ``(theta, phi)`` for Q, R, S, T."""
    p = [float(x) for x in params]
    labels = "QRST"
    return SettingQuartet(*(ObservableSetting(kernels.bloch_basis(p[2 * k], p[2 * k + 1]), labels[k],
                                              (p[2 * k], p[2 * k + 1])) for k in range(4)))
