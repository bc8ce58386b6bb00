"""Basis-dependent coherence: l1-norm and relative entropy of coherence.

A two-qubit state is always measured in a local basis, one orthonormal
qubit basis per party.  The state is rotated into that basis with
``(Ua (x) Ub)^H rho (Ua (x) Ub)`` where the columns of ``Ua`` and ``Ub`` are
the basis vectors, and the coherence is read off the rotated matrix.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import kernels
from .errors import DegenerateObservable, InvalidDimension, InvalidParameter, InvalidSetting
from .linalg import HERMITIAN_TOL, I2, as_cmat, dagger, eigh, shannon_entropy, von_neumann_entropy
from .states import QState

UNITARY_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class ObservableSetting:
    """An orthonormal qubit basis; column ``k`` of ``basis`` is ``|b_k>``.

    Column 0 is the +1 outcome when the setting is read as a dichotomic
    observable.
    """

    basis: np.ndarray
    label: str = ""
    bloch: Optional[tuple[float, float]] = field(default=None, compare=False)

    def __post_init__(self):
        u = as_cmat(self.basis, dims=(2,)).copy()
        err = float(np.max(np.abs(dagger(u) @ u - I2)))
        if err > UNITARY_TOL:
            raise InvalidSetting(f"basis columns are not orthonormal (deviation {err:.3g})")
        u.setflags(write=False)
        object.__setattr__(self, "basis", u)

    @classmethod
    def from_vectors(cls, v0, v1, label: str = "") -> "ObservableSetting":
        return cls(np.column_stack([np.asarray(v0, complex), np.asarray(v1, complex)]), label)

    @classmethod
    def from_bloch(cls, theta: float, phi: float, label: str = "") -> "ObservableSetting":
        """Basis ``{cos(t/2)|0> + e^{i p} sin(t/2)|1>, orthogonal complement}``."""
        if not (0.0 <= theta <= math.pi and 0.0 <= phi <= 2.0 * math.pi):
            raise InvalidParameter(f"Bloch angles ({theta}, {phi}) outside the box")
        return cls(kernels.bloch_basis(theta, phi), label, (theta, phi))

    def vector(self, k: int) -> np.ndarray:
        return self.basis[:, k]

    def observable(self) -> np.ndarray:
        """The +-1 observable ``|b0><b0| - |b1><b1|``."""
        b0, b1 = self.basis[:, 0], self.basis[:, 1]
        return np.outer(b0, b0.conj()) - np.outer(b1, b1.conj())


@dataclass(frozen=True)
class CoherencePair:
    l1: float
    rel_ent: float


def computational(label: str = "Z") -> ObservableSetting:
    return ObservableSetting(I2.copy(), label)


def hadamard_basis(label: str = "X") -> ObservableSetting:
    """The ``{|+>, |->}`` basis."""
    s = 1.0 / math.sqrt(2.0)
    return ObservableSetting(np.array([[s, s], [s, -s]], dtype=complex), label)


def setting_from_observable(obs, label: str = "") -> ObservableSetting:
    """Eigenbasis of a nondegenerate Hermitian qubit observable.

    Columns are ordered by descending eigenvalue, so a +-1 observable gets
    its +1 eigenvector first.

    Raises:
        DegenerateObservable: if the two eigenvalues coincide to ``1e-9``.
    """
    w, v = eigh(as_cmat(obs, dims=(2,)))
    if abs(w[1] - w[0]) <= HERMITIAN_TOL:
        raise DegenerateObservable("observable has a degenerate spectrum; pass an explicit basis")
    return ObservableSetting(v[:, ::-1].copy(), label)


def _as_setting(s) -> ObservableSetting:
    return s if isinstance(s, ObservableSetting) else ObservableSetting(s)


def _check_settings(rho: QState, settings: Sequence) -> list[ObservableSetting]:
    settings = [_as_setting(s) for s in settings]
    need = 1 if rho.dim == 2 else 2
    if len(settings) != need:
        raise InvalidDimension(f"dim-{rho.dim} state needs {need} setting(s), got {len(settings)}")
    return settings


def rotate(rho: QState, settings: Sequence) -> np.ndarray:
    """Matrix of ``rho`` in the local basis given by ``settings``."""
    settings = _check_settings(rho, settings)
    if rho.dim == 2:
        u = settings[0].basis
        return dagger(u) @ rho.mat @ u
    return kernels.rotate_pair(rho.mat, settings[0].basis, settings[1].basis)


def rotate_local(rho: QState, a, b) -> QState:
    """``(Ua (x) Ub)^H rho (Ua (x) Ub)`` as a new state."""
    if rho.dim != 4:
        raise InvalidDimension("rotate_local needs a two-qubit state")
    return QState(rotate(rho, [a, b]))


def _l1_of(m: np.ndarray) -> float:
    return float(np.sum(np.abs(m[~np.eye(m.shape[0], dtype=bool)])))


def c_l1(rho: QState, settings: Sequence) -> float:
    """Sum of absolute off-diagonal entries in the chosen basis."""
    return _l1_of(rotate(rho, settings))


def dephased_spectrum(rho: QState, settings: Sequence) -> np.ndarray:
    d = np.diag(rotate(rho, settings)).real
    return np.clip(d, 0.0, None) / max(float(np.sum(np.clip(d, 0.0, None))), 1e-300)


def c_r(rho: QState, settings: Sequence) -> float:
    """Relative entropy of coherence ``S(rho_diag) - S(rho)`` in bits."""
    value = shannon_entropy(dephased_spectrum(rho, settings)) - von_neumann_entropy(rho.mat)
    return max(value, 0.0)


def coherence(rho: QState, settings: Sequence) -> CoherencePair:
    return CoherencePair(c_l1(rho, settings), c_r(rho, settings))


def c_r_oracle(rho: QState, settings: Sequence, samples: int, rng=None) -> float:
    """Upper estimate of ``min_sigma S(rho || sigma)`` over incoherent ``sigma``.

    ``sigma`` ranges over ``samples`` random states diagonal in the chosen
    basis plus the dephased state itself.  Relative entropies are computed
    from matrix logarithms in the original frame, independently of ``c_r``.
    """
    if samples < 1:
        raise InvalidParameter("samples must be >= 1")
    settings = _check_settings(rho, settings)
    rng = np.random.default_rng(rng)
    u = settings[0].basis if rho.dim == 2 else np.kron(settings[0].basis, settings[1].basis)
    lam, _ = eigh(rho.mat)
    lam = np.clip(lam, 0.0, None)
    nz = lam > 0
    tr_rho_log_rho = float(np.sum(lam[nz] * np.log2(lam[nz])))

    rotated_diag = np.array([(u[:, i].conj() @ rho.mat @ u[:, i]).real for i in range(rho.dim)])
    support = rotated_diag > 1e-15

    def rel_ent(q: np.ndarray) -> float:
        if np.any(q[support] <= 0.0):
            return math.inf
        logq = np.where(q > 0.0, np.log2(np.where(q > 0.0, q, 1.0)), 0.0)
        log_sigma = u @ np.diag(logq) @ dagger(u)
        return tr_rho_log_rho - float(np.trace(rho.mat @ log_sigma).real)

    best = rel_ent(np.clip(rotated_diag, 0.0, None) / np.sum(np.clip(rotated_diag, 0.0, None)))
    qs = rng.dirichlet(np.ones(rho.dim), size=samples)
    for q in qs:
        best = min(best, rel_ent(q))
    return best
