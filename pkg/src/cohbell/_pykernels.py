"""Pure numpy implementation of the hot kernels.

Mirrors ``_ckernels.pyx`` function for function; ``cohbell.kernels`` picks
whichever is importable.  All inputs are assumed already validated.
"""
import math

import numpy as np

# order of the four (A, B) pairs in every functional: QS, RS, RT, QT
PAIRS = ((0, 2), (1, 2), (1, 3), (0, 3))
SIGNS = (1.0, 1.0, 1.0, -1.0)

_SPIN = np.array([1.0, -1.0, -1.0, 1.0])
_OFFDIAG4 = ~np.eye(4, dtype=bool)


def _eye_mask(n):
    return np.eye(n, dtype=bool)


def jacobi_eigh(m, tol=1e-12, max_sweeps=100):
    """Cyclic complex Jacobi. Returns (diagonal, accumulated unitary, sweeps).

    Eigenvalues are unsorted; ``tol`` bounds the off-diagonal Frobenius norm.
    """
    a = np.array(m, dtype=np.complex128)
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    sweeps = 0
    for it in range(1, max_sweeps + 1):
        off = math.sqrt(float(np.sum(np.abs(a[~_eye_mask(n)]) ** 2)))
        if off < tol:
            break
        sweeps = it
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag < 1e-300:
                    continue
                phase = apq / mag
                app = a[p, p].real
                aqq = a[q, q].real
                tau = (aqq - app) / (2.0 * mag)
                t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                # J = D(phase) . real rotation; only columns p, q differ from identity
                jpp, jpq = c, s
                jqp, jqq = -s * phase.conjugate(), c * phase.conjugate()
                colp = a[:, p].copy()
                colq = a[:, q].copy()
                a[:, p] = colp * jpp + colq * jqp
                a[:, q] = colp * jpq + colq * jqq
                rowp = a[p, :].copy()
                rowq = a[q, :].copy()
                a[p, :] = np.conj(jpp) * rowp + np.conj(jqp) * rowq
                a[q, :] = np.conj(jpq) * rowp + np.conj(jqq) * rowq
                a[p, q] = 0.0
                a[q, p] = 0.0
                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = vp * jpp + vq * jqp
                v[:, q] = vp * jpq + vq * jqq
    return np.diag(a).real.copy(), v, sweeps


def bloch_basis(theta, phi):
    c = math.cos(0.5 * theta)
    s = math.sin(0.5 * theta)
    e = complex(math.cos(phi), math.sin(phi))
    return np.array([[c, -s * e.conjugate()], [s * e, c]], dtype=np.complex128)


def rotate_pair(rho, ua, ub):
    k = np.kron(ua, ub)
    return k.conj().T @ rho @ k


def _entropy_bits(p):
    p = p[p > 0.0]
    return float(-np.sum(p * np.log2(p)))


def pair_stats(rho, ua, ub):
    """(l1 coherence, diagonal Shannon entropy, correlator) in the basis ua (x) ub."""
    m = rotate_pair(rho, ua, ub)
    d = np.clip(np.diag(m).real, 0.0, None)
    l1 = float(np.sum(np.abs(m[_OFFDIAG4])))
    return l1, _entropy_bits(d), float(_SPIN @ d)


def bell_stats(rho, uq, ur, us, ut):
    """Arrays (l1, H, E) of length 4 over the pairs QS, RS, RT, QT."""
    us_ = (uq, ur, us, ut)
    out = np.empty((3, 4))
    for k, (i, j) in enumerate(PAIRS):
        out[:, k] = pair_stats(rho, us_[i], us_[j])
    return out[0], out[1], out[2]


def objective(rho, params, mode, s_rho):
    """Functional value for 8 Bloch angles (Q, R, S, T). mode 0=l1, 1=rel-ent, 2=chsh."""
    bases = [bloch_basis(params[2 * k], params[2 * k + 1]) for k in range(4)]
    l1, h, e = bell_stats(rho, *bases)
    if mode == 0:
        return float(l1[0] + l1[1] + l1[2] - l1[3] + 2.0)
    if mode == 1:
        return float(h[0] + h[1] + h[2] - h[3] - 2.0 * s_rho)
    return abs(float(e[0] + e[1] + e[2] - e[3]))
