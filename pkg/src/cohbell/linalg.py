"""Small complex-matrix kernel for one- and two-qubit operators.

Matrices are plain ``numpy`` complex arrays of shape ``(2, 2)`` or ``(4, 4)``.
Two-qubit indices follow ``2 * i_A + i_B`` (party A is the high bit), which
is what ``numpy.kron`` produces.
"""
from __future__ import annotations

import numpy as np

from . import kernels
from .errors import InvalidDimension, InvalidDistribution, InvalidState, NotHermitian

HERMITIAN_TOL = 1e-9
CLIP_TOL = 1e-10
JACOBI_TOL = 1e-12
JACOBI_MAX_SWEEPS = 100

I2 = np.eye(2, dtype=np.complex128)
I4 = np.eye(4, dtype=np.complex128)
X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)


def as_cmat(m, dims=(2, 4)) -> np.ndarray:
    """Coerce to a finite square complex array whose size is in ``dims``."""
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] not in dims:
        raise InvalidDimension(f"expected a square matrix of size {dims}, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InvalidState("matrix has non-finite entries")
    return a


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(m).T


def kron(a, b) -> np.ndarray:
    """Tensor product of two single-qubit operators."""
    a = as_cmat(a, dims=(2,))
    b = as_cmat(b, dims=(2,))
    return np.kron(a, b)


def hermiticity_error(m: np.ndarray) -> float:
    return float(np.max(np.abs(m - dagger(m))))


def eigh(m, tol: float = HERMITIAN_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Hermitian eigendecomposition by cyclic Jacobi rotations.

    Returns ascending eigenvalues and a matrix whose columns are the
    eigenvectors.  Each eigenvector is normalized and rephased so that its
    largest-magnitude component is real and positive.

    Raises:
        NotHermitian: if ``max|m - m^H|`` exceeds ``tol``.
    """
    a = as_cmat(m)
    if hermiticity_error(a) > tol:
        raise NotHermitian(f"matrix is not hermitian (deviation {hermiticity_error(a):.3g})")
    a = 0.5 * (a + dagger(a))
    scale = max(1.0, float(np.max(np.abs(a))))
    w, v, _ = kernels.jacobi_eigh(a, JACOBI_TOL * scale, JACOBI_MAX_SWEEPS)
    order = np.argsort(w, kind="stable")
    w = np.asarray(w)[order]
    v = np.asarray(v)[:, order]
    for k in range(v.shape[1]):
        col = v[:, k]
        col = col / np.linalg.norm(col)
        j = int(np.argmax(np.abs(col) - 1e-12 * np.arange(col.size)))
        v[:, k] = col * (abs(col[j]) / col[j])
    return w, v


def clip_spectrum(values, tol: float = CLIP_TOL, *, error=InvalidState) -> np.ndarray:
    """Zero out tiny negative noise; anything below ``-tol`` is an error."""
    p = np.asarray(values, dtype=float)
    if np.any(p < -tol):
        raise error(f"negative probability/eigenvalue {p.min():.3g} beyond clip tolerance")
    return np.clip(p, 0.0, None)


def _entropy_bits(p: np.ndarray) -> float:
    p = p[p > 0.0]
    h = float(-np.sum(p * np.log2(p)))
    return h if h > 0.0 else 0.0


def shannon_entropy(p) -> float:
    """Shannon entropy in bits with ``0 log 0 = 0``."""
    q = clip_spectrum(p, error=InvalidDistribution)
    if q.ndim != 1 or q.size == 0:
        raise InvalidDistribution("expected a non-empty 1-d probability vector")
    if abs(q.sum() - 1.0) > HERMITIAN_TOL:
        raise InvalidDistribution(f"probabilities sum to {q.sum():.12g}, not 1")
    return _entropy_bits(q)


def von_neumann_entropy(rho) -> float:
    """Von Neumann entropy in bits of a density matrix."""
    a = as_cmat(rho)
    try:
        w, _ = eigh(a)
    except NotHermitian as exc:
        raise InvalidState(str(exc)) from exc
    if abs(np.trace(a).real - 1.0) > HERMITIAN_TOL:
        raise InvalidState("trace is not 1")
    return _entropy_bits(clip_spectrum(w))
