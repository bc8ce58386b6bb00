import math

import numpy as np
import pytest

from cohbell import linalg
from cohbell.errors import InvalidDimension, InvalidDistribution, InvalidState, NotHermitian
from cohbell.linalg import I2, I4, X, Z, eigh, kron, shannon_entropy, von_neumann_entropy

ALPHA = math.sqrt(2 + math.sqrt(2))
BETA = math.sqrt(2 - math.sqrt(2))


def random_hermitian(n, rng, scale=1.0):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return scale * (a + a.conj().T) / 2


def test_kron_examples():
    assert np.array_equal(kron(I2, I2), I4)
    assert np.array_equal(kron(Z, Z), np.diag([1, -1, -1, 1]).astype(complex))
    p0 = np.diag([1, 0]).astype(complex)
    p1 = np.diag([0, 1]).astype(complex)
    expected = np.zeros((4, 4), complex)
    expected[1, 1] = 1
    assert np.array_equal(kron(p0, p1), expected)


def test_kron_index_convention():
    # party A is the high bit: entry (2*iA + iB, 2*jA + jB)
    a = np.arange(4).reshape(2, 2).astype(complex)
    b = np.arange(4, 8).reshape(2, 2).astype(complex)
    k = kron(a, b)
    for ia, ja, ib, jb in np.ndindex(2, 2, 2, 2):
        assert k[2 * ia + ib, 2 * ja + jb] == a[ia, ja] * b[ib, jb]


def test_kron_rejects_wrong_dim():
    with pytest.raises(InvalidDimension):
        kron(I4, I2)


def test_kron_trace_multiplicative(rng):
    for _ in range(50):
        a, b = random_hermitian(2, rng), random_hermitian(2, rng)
        assert np.trace(kron(a, b)) == pytest.approx(np.trace(a) * np.trace(b), abs=1e-12)


def test_eigh_pauli(backend):
    w, v = eigh(Z)
    assert np.allclose(w, [-1, 1])
    assert np.allclose(v[:, 0], [0, 1]) and np.allclose(v[:, 1], [1, 0])
    w, v = eigh(X)
    s = 1 / math.sqrt(2)
    assert np.allclose(w, [-1, 1])
    # phase convention: largest component real positive (first on ties)
    assert np.allclose(v[:, 0], [s, -s])
    assert np.allclose(v[:, 1], [s, s])


def test_eigh_tilted_observable(backend):
    obs = (-Z - X) / math.sqrt(2)
    w, v = eigh(obs)
    assert np.allclose(w, [-1, 1], atol=1e-12)
    plus = np.array([1, 1]) / math.sqrt(2)
    zero = np.array([1, 0])
    # (|+> + |0>)/alpha is the -1 eigenvector, (|+> - |0>)/beta the +1 eigenvector
    assert np.allclose(v[:, 0], (plus + zero) / ALPHA, atol=1e-12)
    assert np.allclose(v[:, 1], (plus - zero) / BETA, atol=1e-12)


def test_eigh_rejects_non_hermitian():
    with pytest.raises(NotHermitian):
        eigh(np.array([[0, 1], [0, 0]]))


@pytest.mark.parametrize("n", [2, 4])
def test_eigh_reconstruction_and_orthonormality(backend, rng, n):
    for _ in range(1000):
        m = random_hermitian(n, rng, scale=rng.uniform(0.01, 10))
        w, v = eigh(m)
        assert np.all(np.diff(w) >= 0)
        assert np.max(np.abs(v.conj().T @ v - np.eye(n))) < 1e-9
        assert np.max(np.abs(v @ np.diag(w) @ v.conj().T - m)) < 1e-8
        assert np.max(np.abs(m @ v - v * w)) < 1e-8


def test_eigh_matches_lapack(backend, rng):
    for _ in range(200):
        m = random_hermitian(4, rng)
        assert np.allclose(eigh(m)[0], np.linalg.eigvalsh(m), atol=1e-10)


def test_eigh_degenerate_inputs(backend):
    w, v = eigh(I4)
    assert np.allclose(w, 1) and np.allclose(v, I4)
    w, _ = eigh(np.kron(Z, I2))
    assert np.allclose(w, [-1, -1, 1, 1])


def test_von_neumann_examples(backend):
    assert von_neumann_entropy(np.diag([1, 0])) == 0
    assert von_neumann_entropy(I4 / 4) == pytest.approx(2, abs=1e-12)
    assert von_neumann_entropy(np.diag([0.5, 0.5, 0, 0])) == pytest.approx(1, abs=1e-12)


def test_von_neumann_rejects_invalid():
    with pytest.raises(InvalidState):
        von_neumann_entropy(np.diag([1.5, -0.5]))
    with pytest.raises(InvalidState):
        von_neumann_entropy(np.diag([0.5, 0.4]))
    with pytest.raises(InvalidState):
        von_neumann_entropy(np.array([[0.5, 1], [0, 0.5]]))


def test_von_neumann_clips_tiny_negative():
    assert von_neumann_entropy(np.diag([1 + 5e-11, -5e-11])) == pytest.approx(0, abs=1e-9)


def test_entropy_bounds(rng):
    for n in (2, 4):
        for _ in range(200):
            g = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
            rho = g @ g.conj().T
            rho /= np.trace(rho)
            s = von_neumann_entropy(rho)
            assert -1e-12 <= s <= math.log2(n) + 1e-12


def test_shannon_examples():
    assert shannon_entropy([0.5, 0.5]) == 1
    assert shannon_entropy([1, 0]) == 0
    quad = [1 / (4 * ALPHA**2)] * 2 + [1 / (4 * BETA**2)] * 2
    assert shannon_entropy(quad) == pytest.approx(1.6009, abs=5e-5)


def test_shannon_matches_direct_sum():
    p = [0.1, 0.2, 0.3, 0.4]
    assert shannon_entropy(p) == pytest.approx(-sum(x * math.log2(x) for x in p), abs=1e-15)


def test_shannon_rejects_bad_distributions():
    with pytest.raises(InvalidDistribution):
        shannon_entropy([1.2, -0.2])
    with pytest.raises(InvalidDistribution):
        shannon_entropy([0.3, 0.3])


def test_as_cmat_rejects_nan():
    with pytest.raises(InvalidState):
        linalg.as_cmat([[np.nan, 0], [0, 1]])
