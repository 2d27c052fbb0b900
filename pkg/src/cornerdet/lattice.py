"""Exact integer arithmetic for the lattice of the cyclic group Z/(n+1).

The basis B_n is the (n+1) x n matrix whose top n rows are the tridiagonal
(-2 on the diagonal, 1 beside it) and whose last row is (1, 0, ..., 0, 1).
Its Gram matrix B_n^T B_n is T_n(|1 - t|^4) with ones added in the two
antidiagonal corners, and det(B_n^T B_n) = (n + 1)^3.
"""
import warnings
from dataclasses import dataclass

from .errors import DomainError

#: Largest n accepted by :func:`cauchy_binet_check` (n + 1 minors of size n).
CAUCHY_BINET_MAX_N = 14


class DegenerateBasisWarning(UserWarning):
    """The n = 1 basis does not follow the general pattern unambiguously."""


@dataclass(frozen=True)
class IntegerMatrix:
    """Dense matrix of Python integers (arbitrary precision)."""

    entries: tuple

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in r) for r in self.entries)
        if not rows or not rows[0] or any(len(r) != len(rows[0]) for r in rows):
            raise DomainError("integer matrix must be rectangular with at least one entry")
        object.__setattr__(self, "entries", rows)

    @property
    def rows(self):
        return len(self.entries)

    @property
    def cols(self):
        return len(self.entries[0])

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def transpose(self):
        return IntegerMatrix(tuple(zip(*self.entries)))

    def __matmul__(self, other):
        if self.cols != other.rows:
            raise DomainError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        cols = list(zip(*other.entries))
        return IntegerMatrix(tuple(tuple(sum(a * b for a, b in zip(r, c)) for c in cols)
                                   for r in self.entries))

    def delete_row(self, i):
        return IntegerMatrix(self.entries[:i] + self.entries[i + 1:])

    def tolist(self):
        return [list(r) for r in self.entries]


def bareiss_det(M):
    """Determinant of a square integer matrix by fraction-free elimination.

    Every intermediate value is an integer minor of ``M``, so the division
    by the previous pivot is exact.
    """
    a = [list(map(int, r)) for r in (M.entries if isinstance(M, IntegerMatrix) else M)]
    n = len(a)
    if n == 0 or any(len(r) != n for r in a):
        raise DomainError("Bareiss needs a nonempty square matrix")
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        piv = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * piv - aik * row_k[j]) // prev
            row_i[k] = 0
        prev = piv
    return sign * a[n - 1][n - 1]


def _check_n(n):
    n = int(n)
    if n < 1:
        raise DomainError(f"n must be at least 1, got {n}")
    if n == 1:
        warnings.warn("the n = 1 basis is ambiguous; using the column (-2, 1)",
                      DegenerateBasisWarning, stacklevel=3)
    return n


def build_basis(n):
    """The (n+1) x n basis matrix B_n.

    For n = 1 the pattern gives the single column (-2, 1); this case is
    flagged with :class:`DegenerateBasisWarning` rather than interpreted.
    """
    n = _check_n(n)
    rows = [[0] * n for _ in range(n + 1)]
    for i in range(n):
        rows[i][i] = -2
        if i + 1 < n:
            rows[i][i + 1] = rows[i + 1][i] = 1
    if n == 1:
        rows[1][0] = 1
    else:
        rows[n][0] = rows[n][n - 1] = 1
    return IntegerMatrix(rows)


def gram_matrix(n):
    """A_n = B_n^T B_n."""
    B = build_basis(n)
    return B.transpose() @ B


def gram_determinant(n):
    """Exact det(B_n^T B_n); equals (n + 1)**3 for n >= 2."""
    return bareiss_det(gram_matrix(n))


def tridiagonal_det(k):
    """Determinant of the k x k tridiagonal matrix (-2 diagonal, 1 off-diagonal): (-1)**k (k+1)."""
    k = int(k)
    if k < 0:
        raise DomainError("k must be nonnegative")
    d_prev, d = 1, -2  # D_0, D_1
    if k == 0:
        return 1
    for _ in range(k - 1):
        d_prev, d = d, -2 * d - d_prev
    return d


def cauchy_binet_check(n):
    """Sum of squared maximal minors of B_n, which equals det(B_n^T B_n).

    Returns:
        ``(total, minors)`` where ``minors[j]`` is ``|det C_j|`` and C_j is
        B_n without row j (0-based, in row order).
    """
    n = int(n)
    if not 2 <= n <= CAUCHY_BINET_MAX_N:
        raise DomainError(f"Cauchy-Binet check supports 2 <= n <= {CAUCHY_BINET_MAX_N}, got {n}")
    B = build_basis(n)
    dets = [bareiss_det(B.delete_row(j)) for j in range(n + 1)]
    return sum(d * d for d in dets), [abs(d) for d in dets]
