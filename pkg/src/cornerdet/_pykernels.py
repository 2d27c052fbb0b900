"""Numpy fallback for the compiled kernels in ``_ckernels.pyx``.

All three functions work in place on C-contiguous complex128 arrays and
return an integer status instead of raising, so both backends stay
interchangeable behind :mod:`cornerdet._kernels`.
"""
import numpy as np

NAME = "python"


def lu_factor(a, piv, tiny):
    """LU with partial pivoting, overwriting ``a`` with L (unit, strict lower) and U.

    Returns the index of the first pivot with modulus <= ``tiny``, or -1.
    """
    n = a.shape[0]
    first_zero = -1
    for k in range(n):
        col = a[k:, k]
        p = k + int(np.argmax(np.abs(col.real) + np.abs(col.imag)))
        piv[k] = p
        if p != k:
            a[[k, p], :] = a[[p, k], :]
        if abs(a[k, k]) <= tiny:
            if first_zero < 0:
                first_zero = k
            continue
        a[k + 1:, k] /= a[k, k]
        a[k + 1:, k + 1:] -= np.outer(a[k + 1:, k], a[k, k + 1:])
    return first_zero


def lu_solve(lu, piv, b):
    """Solve in place for the 2-D right-hand side ``b`` using factors from :func:`lu_factor`."""
    n = lu.shape[0]
    for k in range(n):
        if piv[k] != k:
            b[[k, piv[k]], :] = b[[piv[k], k], :]
    for i in range(1, n):
        b[i, :] -= lu[i, :i] @ b[:i, :]
    for i in range(n - 1, -1, -1):
        b[i, :] = (b[i, :] - lu[i, i + 1:] @ b[i + 1:, :]) / lu[i, i]


def levinson(col, u, alpha, eps):
    """Hermitian Levinson recursion on the first column ``col`` of T_n.

    On exit ``u`` holds the monic first column of T_n^{-1} (u[0] == 1),
    ``alpha[j]`` the reflection coefficients and ``eps[m]`` the ratios
    det T_{m+1} / det T_m. Returns -1, or the index of the first reflection
    coefficient of modulus >= 1.
    """
    n = col.shape[0]
    u[:] = 0
    u[0] = 1
    e = col[0].real
    eps[0] = e
    for m in range(1, n):
        beta = np.dot(col[m:0:-1], u[:m])
        rho = beta / e
        if abs(rho) >= 1.0:
            return m - 1
        alpha[m - 1] = rho
        u[:m + 1] = u[:m + 1] - rho * np.conj(u[m::-1])
        e = e * (1.0 - abs(rho) ** 2)
        eps[m] = e
    return -1
