# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels; same signatures and semantics as ``_pykernels``."""
import numpy as np

from libc.math cimport sqrt, cos, sin, log2, fabs, hypot

PAIRS = ((0, 2), (1, 2), (1, 3), (0, 3))
SIGNS = (1.0, 1.0, 1.0, -1.0)

cdef int[4] _PA = [0, 1, 1, 0]
cdef int[4] _PB = [2, 2, 3, 3]
cdef double[4] _SPIN = [1.0, -1.0, -1.0, 1.0]


cdef inline double cabs2(double complex z) nogil:
    return z.real * z.real + z.imag * z.imag


cdef inline double cabs_(double complex z) nogil:
    return hypot(z.real, z.imag)


cdef inline double complex conj_(double complex z) nogil:
    return z.real - 1j * z.imag


def jacobi_eigh(m, double tol=1e-12, int max_sweeps=100):
    cdef double complex[:, ::1] a = np.array(m, dtype=np.complex128, order="C")
    cdef Py_ssize_t n = a.shape[0]
    v_arr = np.eye(n, dtype=np.complex128)
    cdef double complex[:, ::1] v = v_arr
    cdef Py_ssize_t p, q, k
    cdef int sweeps = 0, it
    cdef double off, mag, app, aqq, tau, t, c, s
    cdef double complex phase, jqp, jqq, xp, xq
    for it in range(1, max_sweeps + 1):
        off = 0.0
        for p in range(n):
            for q in range(n):
                if p != q:
                    off += cabs2(a[p, q])
        if sqrt(off) < tol:
            break
        sweeps = it
        for p in range(n - 1):
            for q in range(p + 1, n):
                mag = cabs_(a[p, q])
                if mag < 1e-300:
                    continue
                phase = a[p, q] / mag
                app = a[p, p].real
                aqq = a[q, q].real
                tau = (aqq - app) / (2.0 * mag)
                t = (1.0 if tau >= 0 else -1.0) / (fabs(tau) + sqrt(1.0 + tau * tau))
                c = 1.0 / sqrt(1.0 + t * t)
                s = t * c
                jqp = -s * conj_(phase)
                jqq = c * conj_(phase)
                for k in range(n):
                    xp = a[k, p]
                    xq = a[k, q]
                    a[k, p] = xp * c + xq * jqp
                    a[k, q] = xp * s + xq * jqq
                for k in range(n):
                    xp = a[p, k]
                    xq = a[q, k]
                    a[p, k] = c * xp + conj_(jqp) * xq
                    a[q, k] = s * xp + conj_(jqq) * xq
                a[p, q] = 0.0
                a[q, p] = 0.0
                for k in range(n):
                    xp = v[k, p]
                    xq = v[k, q]
                    v[k, p] = xp * c + xq * jqp
                    v[k, q] = xp * s + xq * jqq
    w = np.empty(n)
    for k in range(n):
        w[k] = a[k, k].real
    return w, v_arr, sweeps


cdef inline void _bloch(double theta, double phi, double complex[:, ::1] u) nogil:
    cdef double c = cos(0.5 * theta)
    cdef double s = sin(0.5 * theta)
    cdef double complex e = cos(phi) + 1j * sin(phi)
    u[0, 0] = c
    u[0, 1] = -s * conj_(e)
    u[1, 0] = s * e
    u[1, 1] = c


def bloch_basis(double theta, double phi):
    out = np.empty((2, 2), dtype=np.complex128)
    _bloch(theta, phi, out)
    return out


cdef void _rotate(const double complex[:, ::1] rho, const double complex[:, ::1] ua,
                  const double complex[:, ::1] ub, double complex[:, ::1] out) noexcept nogil:
    cdef double complex kmat[4][4]
    cdef double complex tmp[4][4]
    cdef double complex acc
    cdef int i, j, k, l
    for i in range(2):
        for j in range(2):
            for k in range(2):
                for l in range(2):
                    kmat[2 * i + k][2 * j + l] = ua[i, j] * ub[k, l]
    # tmp = rho . K
    for i in range(4):
        for j in range(4):
            acc = 0
            for k in range(4):
                acc = acc + rho[i, k] * kmat[k][j]
            tmp[i][j] = acc
    # out = K^dagger . tmp
    for i in range(4):
        for j in range(4):
            acc = 0
            for k in range(4):
                acc = acc + conj_(kmat[k][i]) * tmp[k][j]
            out[i, j] = acc


cdef void _stats(const double complex[:, ::1] rho, const double complex[:, ::1] ua,
                 const double complex[:, ::1] ub, double complex[:, ::1] work,
                 double* l1, double* h, double* e) noexcept nogil:
    cdef int i, j
    cdef double d
    _rotate(rho, ua, ub, work)
    l1[0] = 0.0
    h[0] = 0.0
    e[0] = 0.0
    for i in range(4):
        for j in range(4):
            if i != j:
                l1[0] += cabs_(work[i, j])
        d = work[i, i].real
        if d > 0.0:
            h[0] -= d * log2(d)
            e[0] += _SPIN[i] * d


def rotate_pair(rho, ua, ub):
    cdef const double complex[:, ::1] r = np.ascontiguousarray(rho, dtype=np.complex128)
    cdef const double complex[:, ::1] a = np.ascontiguousarray(ua, dtype=np.complex128)
    cdef const double complex[:, ::1] b = np.ascontiguousarray(ub, dtype=np.complex128)
    out = np.empty((4, 4), dtype=np.complex128)
    _rotate(r, a, b, out)
    return out


def pair_stats(rho, ua, ub):
    cdef const double complex[:, ::1] r = np.ascontiguousarray(rho, dtype=np.complex128)
    cdef const double complex[:, ::1] a = np.ascontiguousarray(ua, dtype=np.complex128)
    cdef const double complex[:, ::1] b = np.ascontiguousarray(ub, dtype=np.complex128)
    cdef double complex[:, ::1] work = np.empty((4, 4), dtype=np.complex128)
    cdef double l1, h, e
    _stats(r, a, b, work, &l1, &h, &e)
    return l1, h, e


cdef void _bell(const double complex[:, ::1] rho, const double complex[:, :, ::1] bases,
                double complex[:, ::1] work, double* l1, double* h, double* e) noexcept nogil:
    cdef int k
    for k in range(4):
        _stats(rho, bases[_PA[k]], bases[_PB[k]], work, &l1[k], &h[k], &e[k])


def bell_stats(rho, uq, ur, us, ut):
    cdef const double complex[:, ::1] r = np.ascontiguousarray(rho, dtype=np.complex128)
    cdef double complex[:, :, ::1] bases = np.ascontiguousarray(
        np.stack([uq, ur, us, ut]), dtype=np.complex128)
    cdef double complex[:, ::1] work = np.empty((4, 4), dtype=np.complex128)
    l1 = np.empty(4)
    h = np.empty(4)
    e = np.empty(4)
    cdef double[::1] l1v = l1, hv = h, ev = e
    _bell(r, bases, work, &l1v[0], &hv[0], &ev[0])
    return l1, h, e


def objective(rho, const double[::1] params, int mode, double s_rho):
    cdef const double complex[:, ::1] r = np.ascontiguousarray(rho, dtype=np.complex128)
    cdef double complex[:, :, ::1] bases = np.empty((4, 2, 2), dtype=np.complex128)
    cdef double complex[:, ::1] work = np.empty((4, 4), dtype=np.complex128)
    cdef double l1[4]
    cdef double h[4]
    cdef double e[4]
    cdef int k
    for k in range(4):
        _bloch(params[2 * k], params[2 * k + 1], bases[k])
    _bell(r, bases, work, l1, h, e)
    if mode == 0:
        return l1[0] + l1[1] + l1[2] - l1[3] + 2.0
    if mode == 1:
        return h[0] + h[1] + h[2] - h[3] - 2.0 * s_rho
    return fabs(e[0] + e[1] + e[2] - e[3])
