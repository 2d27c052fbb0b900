# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot loops: dense complex LU and the Hermitian Levinson recursion.

Same signatures as ``_pykernels``; see that module for the contract.
"""
from libc.math cimport fabs, hypot

NAME = "cython"


cdef inline double _abs2(double complex z) noexcept nogil:
    return z.real * z.real + z.imag * z.imag


cdef inline double _abs1(double complex z) noexcept nogil:
    # |re| + |im| as in LAPACK's izamax; cannot underflow like |z|^2
    return fabs(z.real) + fabs(z.imag)


cdef inline double complex _conj(double complex z) noexcept nogil:
    return z.conjugate()


def lu_factor(double complex[:, ::1] a, Py_ssize_t[::1] piv, double tiny):
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t i, j, k, p
    cdef Py_ssize_t first_zero = -1
    cdef double best, v, fr, fi, xr, xi
    cdef double complex pivot, f, tmp
    cdef double* ri
    cdef double* rk
    with nogil:
        for k in range(n):
            p = k
            best = _abs1(a[k, k])
            for i in range(k + 1, n):
                v = _abs1(a[i, k])
                if v > best:
                    best = v
                    p = i
            piv[k] = p
            if p != k:
                for j in range(n):
                    tmp = a[k, j]
                    a[k, j] = a[p, j]
                    a[p, j] = tmp
            if hypot(a[k, k].real, a[k, k].imag) <= tiny:
                if first_zero < 0:
                    first_zero = k
                continue
            pivot = a[k, k]
            rk = <double*> &a[k, 0]
            for i in range(k + 1, n):
                f = a[i, k] / pivot
                a[i, k] = f
                fr = f.real
                fi = f.imag
                if fr == 0.0 and fi == 0.0:
                    continue
                ri = <double*> &a[i, 0]
                for j in range(2 * (k + 1), 2 * n, 2):
                    xr = rk[j]
                    xi = rk[j + 1]
                    ri[j] -= fr * xr - fi * xi
                    ri[j + 1] -= fr * xi + fi * xr
    return first_zero


def lu_solve(double complex[:, ::1] lu, Py_ssize_t[::1] piv, double complex[:, ::1] b):
    cdef Py_ssize_t n = lu.shape[0]
    cdef Py_ssize_t nrhs = b.shape[1]
    cdef Py_ssize_t i, j, k, c
    cdef double complex tmp, s
    with nogil:
        for k in range(n):
            if piv[k] != k:
                for c in range(nrhs):
                    tmp = b[k, c]
                    b[k, c] = b[piv[k], c]
                    b[piv[k], c] = tmp
        for c in range(nrhs):
            for i in range(1, n):
                s = b[i, c]
                for j in range(i):
                    s = s - lu[i, j] * b[j, c]
                b[i, c] = s
            for i in range(n - 1, -1, -1):
                s = b[i, c]
                for j in range(i + 1, n):
                    s = s - lu[i, j] * b[j, c]
                b[i, c] = s / lu[i, i]


def levinson(double complex[::1] col, double complex[::1] u,
             double complex[::1] alpha, double[::1] eps):
    cdef Py_ssize_t n = col.shape[0]
    cdef Py_ssize_t m, k, half
    cdef double e = col[0].real
    cdef double complex beta, rho, uk, ul
    cdef Py_ssize_t status = -1
    for k in range(n):
        u[k] = 0
    u[0] = 1
    eps[0] = e
    with nogil:
        for m in range(1, n):
            beta = 0
            for k in range(m):
                beta = beta + col[m - k] * u[k]
            rho = beta / e
            if _abs2(rho) >= 1.0:
                status = m - 1
                break
            alpha[m - 1] = rho
            half = m // 2
            for k in range(half + 1):
                uk = u[k]
                ul = u[m - k]
                if k == m - k:
                    u[k] = uk - rho * _conj(uk)
                else:
                    u[k] = uk - rho * _conj(ul)
                    u[m - k] = ul - rho * _conj(uk)
            e = e * (1.0 - _abs2(rho))
            eps[m] = e
    return status
