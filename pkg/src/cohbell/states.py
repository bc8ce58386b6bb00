"""Validated one- and two-qubit density matrices and the named states used throughout."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import InvalidDimension, InvalidParameter, InvalidState
from .linalg import HERMITIAN_TOL, I2, I4, as_cmat, dagger, eigh, hermiticity_error

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True, eq=False)
class QState:
    """An immutable density matrix of dimension 2 or 4.

    Construction checks hermiticity, unit trace and positivity, each to
    ``1e-9``.  The stored matrix is read-only.
    """

    mat: np.ndarray

    def __post_init__(self):
        m = as_cmat(self.mat).copy()
        validate_density(m)
        m.setflags(write=False)
        object.__setattr__(self, "mat", m)

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    def eigvals(self) -> np.ndarray:
        return eigh(self.mat)[0]

    def purity(self) -> float:
        return float(np.trace(self.mat @ self.mat).real)

    def allclose(self, other: "QState", atol: float = 1e-12) -> bool:
        return self.dim == other.dim and bool(np.allclose(self.mat, other.mat, rtol=0, atol=atol))

    def to_dict(self) -> dict:
        return {
            "dim": self.dim,
            "re": self.mat.real.tolist(),
            "im": self.mat.imag.tolist(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, payload: dict) -> "QState":
        if not isinstance(payload, dict) or not {"dim", "re", "im"} <= payload.keys():
            raise InvalidState("state JSON must be an object with keys dim, re, im")
        try:
            re = np.asarray(payload["re"], dtype=float)
            im = np.asarray(payload["im"], dtype=float)
            dim = int(payload["dim"])
        except (TypeError, ValueError) as exc:
            raise InvalidState(f"state JSON has non-numeric entries: {exc}") from exc
        if re.shape != im.shape:
            raise InvalidState(f"re and im shapes differ: {re.shape} vs {im.shape}")
        if re.shape != (dim, dim):
            raise InvalidDimension(f"declared dim {dim} does not match matrix shape {re.shape}")
        return cls(re + 1j * im)

    @classmethod
    def from_json(cls, text: str) -> "QState":
        try:
            payload = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InvalidState(f"malformed JSON: {exc}") from exc
        return cls.from_dict(payload)


def validate_density(m: np.ndarray, tol: float = HERMITIAN_TOL) -> None:
    """Raise ``InvalidState`` naming the first violated invariant."""
    herm = hermiticity_error(m)
    if herm > tol:
        raise InvalidState(f"matrix is not hermitian (max |rho - rho^H| = {herm:.3g})")
    tr = np.trace(m)
    if abs(tr - 1.0) > tol:
        raise InvalidState(f"trace is {tr.real:.12g}, expected 1")
    lam = eigh(0.5 * (m + dagger(m)))[0]
    if lam[0] < -tol:
        raise InvalidState(f"matrix is not positive semidefinite (min eigenvalue {lam[0]:.3g})")


def _normalized(m: np.ndarray) -> np.ndarray:
    return m / np.trace(m).real


def projector(vec) -> QState:
    """Pure state ``|v><v|`` from an (unnormalized) vector of length 2 or 4."""
    v = np.asarray(vec, dtype=np.complex128).reshape(-1)
    nrm = np.linalg.norm(v)
    if nrm == 0 or v.size not in (2, 4):
        raise InvalidParameter("need a nonzero vector of length 2 or 4")
    v = v / nrm
    return QState(np.outer(v, v.conj()))


def singlet() -> QState:
    return projector([0.0, 1.0, -1.0, 0.0])


def pure_two_qubit(theta: float, phi: float) -> QState:
    """Schmidt-form state ``cos(theta/2)|00> + e^{i phi} sin(theta/2)|11>``."""
    if not 0.0 <= theta <= math.pi:
        raise InvalidParameter(f"theta={theta} outside [0, pi]")
    if not 0.0 <= phi <= TWO_PI:
        raise InvalidParameter(f"phi={phi} outside [0, 2pi]")
    vec = np.zeros(4, dtype=np.complex128)
    vec[0] = math.cos(theta / 2)
    vec[3] = math.sin(theta / 2) * complex(math.cos(phi), math.sin(phi))
    return projector(vec)


def werner(p: float) -> QState:
    """``p I/4 + (1 - p) |singlet><singlet|``."""
    if not 0.0 <= p <= 1.0:
        raise InvalidParameter(f"p={p} outside [0, 1]")
    return QState(_normalized(p * I4 / 4 + (1.0 - p) * singlet().mat))


def product(a: QState, b: QState) -> QState:
    if a.dim != 2 or b.dim != 2:
        raise InvalidDimension("product() takes two single-qubit states")
    return QState(_normalized(np.kron(a.mat, b.mat)))


def max_coherent(d: int) -> QState:
    """Uniform superposition over the computational basis."""
    if d not in (2, 4):
        raise InvalidDimension(f"unsupported dimension {d}")
    return projector(np.ones(d))


def maximally_mixed(d: int) -> QState:
    if d not in (2, 4):
        raise InvalidDimension(f"unsupported dimension {d}")
    return QState(np.eye(d, dtype=np.complex128) / d)


def qubit_from_bloch(r) -> QState:
    """Single-qubit state with Bloch vector ``r`` (``|r| <= 1``)."""
    x, y, z = (float(c) for c in r)
    if x * x + y * y + z * z > 1.0 + 1e-12:
        raise InvalidParameter("Bloch vector longer than 1")
    m = 0.5 * (I2 + np.array([[z, x - 1j * y], [x + 1j * y, -z]]))
    return QState(m)


def load_state(path) -> QState:
    """Read a state from the JSON ``{dim, re, im}`` format."""
    text = Path(path).read_text(encoding="utf-8")
    return QState.from_json(text)


def save_state(state: QState, path) -> None:
    Path(path).write_text(state.to_json() + "\n", encoding="utf-8")
