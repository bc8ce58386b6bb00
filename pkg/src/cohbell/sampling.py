"""Random states, bases and unitaries for property checks and optimizer starts."""
from __future__ import annotations

import math

import numpy as np

from .bell import SettingQuartet
from .coherence import ObservableSetting
from .states import QState, product, projector, qubit_from_bloch


def rng_from(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def haar_unitary(n: int, rng) -> np.ndarray:
    """Haar-random ``n x n`` unitary via QR of a complex Ginibre matrix."""
    rng = rng_from(rng)
    z = (rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))) / math.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def unit_sphere(rng) -> np.ndarray:
    v = rng_from(rng).normal(size=3)
    return v / np.linalg.norm(v)


def unit_ball(rng) -> np.ndarray:
    rng = rng_from(rng)
    return unit_sphere(rng) * rng.uniform() ** (1.0 / 3.0)


def random_qubit(rng, pure: bool = False) -> QState:
    """Uniform on the Bloch sphere if ``pure`` else uniform in the ball."""
    return qubit_from_bloch(unit_sphere(rng) if pure else unit_ball(rng))


def random_product(rng, pure: bool | None = None) -> QState:
    """Product of two random qubits; ``pure=None`` picks each kind with prob. 1/2."""
    rng = rng_from(rng)
    if pure is None:
        pure = bool(rng.integers(2))
    return product(random_qubit(rng, pure), random_qubit(rng, pure))


def random_pure(dim: int, rng) -> QState:
    rng = rng_from(rng)
    return projector(rng.normal(size=dim) + 1j * rng.normal(size=dim))


def random_density(dim: int, rng, rank: int | None = None) -> QState:
    """Random mixed state ``G G^H / Tr`` with ``G`` of shape ``dim x rank``."""
    rng = rng_from(rng)
    rank = dim if rank is None else rank
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    m = g @ g.conj().T
    return QState(m / np.trace(m).real)


def random_setting(rng, label: str = "") -> ObservableSetting:
    return ObservableSetting(haar_unitary(2, rng), label)


def random_quartet(rng) -> SettingQuartet:
    rng = rng_from(rng)
    return SettingQuartet(*(random_setting(rng, x) for x in "QRST"))
