"""Dense complex linear algebra used as the brute-force oracle.

Matrices are plain 2-D numpy arrays; everything is converted to C-contiguous
complex128 on entry. The elimination itself runs in :mod:`cornerdet._kernels`.
"""
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import DomainError, ShapeError, SingularMatrixError

#: Pivots with modulus at or below this are treated as exact zeros.
PIVOT_TINY = 1e-300


def as_matrix(M):
    """Return ``M`` as a finite, C-contiguous complex128 2-D array (always a copy)."""
    a = np.array(M, dtype=np.complex128, order="C", copy=True)
    if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
        raise ShapeError(f"expected a non-empty 2-D matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise DomainError("matrix has non-finite entries")
    return a


@dataclass(frozen=True)
class LUFactorization:
    """Packed LU factors of a square matrix, P M = L U.

    Attributes:
        lu: unit lower triangle (below the diagonal) and U (on and above it).
        piv: LAPACK-style row interchanges, row k was swapped with piv[k].
        singular_at: index of the first zero pivot, or -1.
    """

    lu: np.ndarray
    piv: np.ndarray
    singular_at: int

    @property
    def n(self):
        return self.lu.shape[0]

    def slogdet(self):
        """Return ``(phase, logabs)`` with det = phase * exp(logabs).

        A singular factorization gives ``(0, -inf)``.
        """
        if self.singular_at >= 0:
            return 0j, -np.inf
        d = np.diagonal(self.lu)
        swaps = int(np.count_nonzero(self.piv != np.arange(self.n)))
        logabs = float(np.sum(np.log(np.abs(d))))
        # Sum of arguments keeps the phase free of overflow.
        angle = float(np.sum(np.angle(d))) + np.pi * swaps
        return complex(np.cos(angle), np.sin(angle)), logabs

    def det(self):
        """Determinant; overflows to inf quietly (use :meth:`slogdet` for large n)."""
        phase, logabs = self.slogdet()
        if phase == 0:
            return 0j
        with np.errstate(over="ignore"):
            return phase * np.exp(logabs)

    def solve(self, rhs):
        if self.singular_at >= 0:
            raise SingularMatrixError(self.singular_at)
        b = np.array(rhs, dtype=np.complex128, copy=True)
        vector = b.ndim == 1
        if vector:
            b = b.reshape(-1, 1)
        if b.shape[0] != self.n:
            raise ShapeError(f"right-hand side has {b.shape[0]} rows, matrix is {self.n}x{self.n}")
        b = np.ascontiguousarray(b)
        _kernels.backend.lu_solve(self.lu, self.piv, b)
        return b[:, 0] if vector else b


def lu_factor(M, backend=None):
    """Factor a square matrix with partial pivoting.

    Args:
        M: square array-like.
        backend: optional kernel module (``_kernels.BACKENDS[name]``); defaults
            to the one selected at import.
    """
    a = as_matrix(M)
    if a.shape[0] != a.shape[1]:
        raise ShapeError(f"matrix must be square, got {a.shape}")
    piv = np.zeros(a.shape[0], dtype=np.intp)
    k = (backend or _kernels.backend).lu_factor(a, piv, PIVOT_TINY)
    return LUFactorization(a, piv, int(k))


def slogdet(M):
    return lu_factor(M).slogdet()


def determinant(M):
    """Determinant via LU with partial pivoting; exactly 0 for a collapsed pivot."""
    return lu_factor(M).det()


def solve(M, rhs):
    """Solve ``M x = rhs``; raises :class:`SingularMatrixError` naming the bad pivot."""
    return lu_factor(M).solve(rhs)


def inverse(M):
    f = lu_factor(M)
    return f.solve(np.eye(f.n, dtype=np.complex128))


def counter_identity(n):
    """The n x n flip matrix W with ones on the antidiagonal."""
    return np.eye(n)[::-1].copy()


def flip(B):
    """Return W B W, i.e. B rotated by 180 degrees."""
    return np.asarray(B)[::-1, ::-1].copy()
