"""Finite Toeplitz matrices, corner perturbations and corners of the inverse."""
import math
from dataclasses import dataclass

import mpmath
import numpy as np
from scipy.linalg import toeplitz as _dense_toeplitz

from . import _kernels
from .errors import DefinitenessError, DomainError, FormulaInapplicableError, ShapeError
from .linalg import determinant, lu_factor
from .symbols import fourier_coefficients, is_hermitian

#: Above this size inverse corners come from two solves plus GST, below it from a full inverse.
GST_THRESHOLD = 64
#: GST needs x_1 != 0; it is treated as zero below this fraction of max|x|.
GST_X1_RTOL = 1e-12
#: A corner ratio that cancels by more than this many digits is recomputed in extended precision.
RATIO_MAX_LOST_DIGITS = 6
#: Digits kept beyond the observed cancellation in the extended-precision ratio.
RATIO_GUARD_DIGITS = 30


def _block(E, m0, name):
    B = np.array(E, dtype=np.complex128)
    if B.ndim == 0:
        B = B.reshape(1, 1)
    if B.shape != (m0, m0):
        raise ShapeError(f"{name} must be {m0}x{m0}, got {B.shape}")
    if not np.all(np.isfinite(B)):
        raise DomainError(f"{name} has non-finite entries")
    return B


@dataclass(frozen=True)
class CornerPerturbation:
    """Four m0 x m0 blocks placed in the corners of an n x n zero matrix."""

    m0: int
    E11: np.ndarray
    E12: np.ndarray
    E21: np.ndarray
    E22: np.ndarray

    def __post_init__(self):
        if int(self.m0) < 1:
            raise DomainError("m0 must be at least 1")
        object.__setattr__(self, "m0", int(self.m0))
        for name in ("E11", "E12", "E21", "E22"):
            object.__setattr__(self, name, _block(getattr(self, name), self.m0, name))

    @classmethod
    def scalar(cls, E):
        """m0 = 1 perturbation from the 2 x 2 matrix ``[[E11, E12], [E21, E22]]``."""
        E = np.asarray(E, dtype=np.complex128)
        if E.shape != (2, 2):
            raise ShapeError(f"scalar corner matrix must be 2x2, got {E.shape}")
        return cls(1, E[0, 0], E[0, 1], E[1, 0], E[1, 1])

    @classmethod
    def zero(cls, m0=1):
        z = np.zeros((m0, m0))
        return cls(m0, z, z, z, z)

    @classmethod
    def from_block_matrix(cls, B):
        B = np.asarray(B, dtype=np.complex128)
        if B.ndim != 2 or B.shape[0] != B.shape[1] or B.shape[0] % 2:
            raise ShapeError(f"block matrix must be 2m0 x 2m0, got {B.shape}")
        m = B.shape[0] // 2
        return cls(m, B[:m, :m], B[:m, m:], B[m:, :m], B[m:, m:])

    def block_matrix(self):
        """``[[E11, E12], [E21, E22]]`` as one 2m0 x 2m0 array."""
        return np.block([[self.E11, self.E12], [self.E21, self.E22]])


@dataclass(frozen=True)
class InverseCorners:
    """The four m0 x m0 corner blocks of an n x n inverse."""

    n: int
    m0: int
    S11: np.ndarray
    S12: np.ndarray
    S21: np.ndarray
    S22: np.ndarray

    def block_matrix(self):
        return np.block([[self.S11, self.S12], [self.S21, self.S22]])


@dataclass(frozen=True)
class PredictorData:
    """Output of the Levinson recursion for a Hermitian Toeplitz matrix.

    Attributes:
        n: matrix size.
        first_column: first column ``c_1..c_n`` of T_n^{-1}.
        monic_coeffs: ascending coefficients of the monic predictor polynomial
            of degree n-1 (the last entry is 1).
        kappa: ``prod_j (1 - |alpha_j|^2)^(-1/2)``, the leading coefficient of
            the orthonormal polynomial for the normalised measure.
        verblunsky: ``alpha_0 .. alpha_{n-2}``.
        det_ratios: ``det T_k / det T_{k-1}`` for k = 1..n (with det T_0 = 1).
    """

    n: int
    first_column: np.ndarray
    monic_coeffs: np.ndarray
    kappa: float
    verblunsky: np.ndarray
    det_ratios: np.ndarray


def build_toeplitz(s, n):
    """T_n(a) with entry (j, k) equal to a_{j-k}."""
    n = int(n)
    if n < 1:
        raise DomainError("n must be at least 1")
    a = fourier_coefficients(s, -(n - 1), n - 1)
    return _dense_toeplitz(a[n - 1:], a[n - 1::-1])


def build_perturbation(p, n):
    """The n x n matrix E_n carrying p's blocks in its corners."""
    n = int(n)
    m = p.m0
    if n < 2 * m:
        raise ShapeError(f"n = {n} is smaller than 2*m0 = {2 * m}")
    E = np.zeros((n, n), dtype=np.complex128)
    E[:m, :m] = p.E11
    E[:m, n - m:] = p.E12
    E[n - m:, :m] = p.E21
    E[n - m:, n - m:] = p.E22
    return E


def corners_of(M, m0):
    """Corner blocks of a square matrix, as :class:`InverseCorners`."""
    M = np.asarray(M)
    n = M.shape[0]
    if n < 2 * m0:
        raise ShapeError(f"n = {n} is smaller than 2*m0 = {2 * m0}")
    return InverseCorners(n, m0, M[:m0, :m0].copy(), M[:m0, n - m0:].copy(),
                          M[n - m0:, :m0].copy(), M[n - m0:, n - m0:].copy())


def _check_gst(x, y):
    x = np.asarray(x, dtype=np.complex128)
    y = np.asarray(y, dtype=np.complex128)
    if x.ndim != 1 or x.shape != y.shape or x.size == 0:
        raise ShapeError("x and y must be nonempty vectors of equal length")
    if abs(x[0]) <= GST_X1_RTOL * np.max(np.abs(x)):
        raise FormulaInapplicableError("first entry of the first column is (numerically) zero")
    return x, y


def gst_inverse(x, y):
    """Rebuild T_n^{-1} from its first column ``x`` and last column ``y``.

    ``T^{-1} = (L(x) U(y_n..y_1) - L(0, y_1..y_{n-1}) U(0, x_n..x_2)) / x_1``
    with L(.) lower-triangular Toeplitz by first column and U(.) upper-triangular
    Toeplitz by first row.
    """
    x, y = _check_gst(x, y)
    n = x.size
    z = np.zeros(n, dtype=np.complex128)
    L1 = _dense_toeplitz(x, z)
    U1 = _dense_toeplitz(np.r_[y[-1], z[1:]], y[::-1])
    L2 = _dense_toeplitz(np.r_[0, y[:-1]], z)
    U2 = _dense_toeplitz(z, np.r_[0, x[:0:-1]])
    return (L1 @ U1 - L2 @ U2) / x[0]


def _gst_entry(x, y, i, j):
    # 1-based (i, j); the sum runs over k = 1..min(i, j)
    n = x.size
    k = np.arange(1, min(i, j) + 1)
    first = x[i - k] * y[n - j + k - 1]
    yk = np.where(i - k >= 1, y[np.maximum(i - k - 1, 0)], 0)
    xk = np.where(k < j, x[np.minimum(n - j + k, n - 1)], 0)
    return (first.sum() - (yk * xk).sum()) / x[0]


def gst_corners(x, y, m0):
    """Corner blocks of T_n^{-1} from the GST formula, without forming the full inverse."""
    x, y = _check_gst(x, y)
    n = x.size
    if n < 2 * m0:
        raise ShapeError(f"n = {n} is smaller than 2*m0 = {2 * m0}")
    top = range(1, m0 + 1)
    bottom = range(n - m0 + 1, n + 1)

    def blk(rows, cols):
        return np.array([[_gst_entry(x, y, i, j) for j in cols] for i in rows])

    return InverseCorners(n, m0, blk(top, top), blk(top, bottom), blk(bottom, top), blk(bottom, bottom))


def inverse_corners_of_matrix(T, m0):
    """Corner blocks of ``T^{-1}`` for a nonsingular (Toeplitz) matrix ``T``."""
    f = lu_factor(T)
    n = f.n
    if n < 2 * m0:
        raise ShapeError(f"n = {n} is smaller than 2*m0 = {2 * m0}")
    if n > GST_THRESHOLD:
        rhs = np.zeros((n, 2), dtype=np.complex128)
        rhs[0, 0] = 1
        rhs[-1, 1] = 1
        cols = f.solve(rhs)
        x, y = cols[:, 0], cols[:, 1]
        if abs(x[0]) > GST_X1_RTOL * np.max(np.abs(x)):
            return gst_corners(x, y, m0)
    return corners_of(f.solve(np.eye(n, dtype=np.complex128)), m0)


def inverse_corners(s, n, m0):
    """The four m0 x m0 corners of T_n^{-1}(a)."""
    return inverse_corners_of_matrix(build_toeplitz(s, n), m0)


def levinson_first_column(s, n, backend=None):
    """First column of T_n^{-1}(a) for a Hermitian symbol by the Levinson recursion.

    The Verblunsky coefficients follow from the ratio of the last and first
    entries of consecutive first columns, ``alpha_{k-1} = -c_{k+1}^{(k+1)} / c_1^{(k+1)}``.

    Raises:
        DefinitenessError: when a reflection coefficient reaches modulus 1.
    """
    n = int(n)
    if n < 1:
        raise DomainError("n must be at least 1")
    if not is_hermitian(s):
        raise DomainError("the Levinson recursion here needs a Hermitian symbol")
    col = np.ascontiguousarray(fourier_coefficients(s, 0, n - 1))
    if not col[0].real > 0:
        raise DefinitenessError(-1, "a_0 is not positive, T_1 is not positive definite")
    u = np.zeros(n, dtype=np.complex128)
    alpha = np.zeros(max(n - 1, 0), dtype=np.complex128)
    eps = np.zeros(n, dtype=np.float64)
    status = (backend or _kernels.backend).levinson(col, u, alpha, eps)
    if status >= 0:
        raise DefinitenessError(int(status))
    kappa = float(np.prod(1.0 / np.sqrt(1.0 - np.abs(alpha) ** 2)))
    return PredictorData(n, u / eps[-1], np.conj(u[::-1]), kappa, alpha, eps)


def det_ratio_from_corners(corners, p):
    """``det(I + S E)`` for the 2m0 x 2m0 block matrices of corners S and perturbation E."""
    if corners.m0 != p.m0:
        raise ShapeError(f"corner size {corners.m0} does not match perturbation size {p.m0}")
    S = corners.block_matrix()
    return determinant(np.eye(2 * p.m0) + S @ p.block_matrix())


def _lost_digits(M, det):
    """Digits cancelled in ``det`` relative to the row-sum bound on ``|det M|``."""
    bound = np.prod(np.sum(np.abs(M), axis=1))
    if bound == 0:
        return 0.0
    if det == 0:
        return math.inf
    return max(0.0, math.log10(bound / abs(det)))


def _mp_levinson(a, n):
    """First and last columns of T_n^{-1} by the two-sided Levinson recursion, in mpmath.

    ``a[k + n - 1]`` holds the coefficient a_k. Returns ``None`` when a leading
    principal minor vanishes and the recursion breaks down.
    """
    a0 = a[n - 1]
    if a0 == 0:
        return None
    f = [1 / a0]
    b = [1 / a0]
    for k in range(1, n):
        ef = mpmath.fsum(a[n - 1 + k - j] * f[j] for j in range(k))
        eb = mpmath.fsum(a[n - 2 - j] * b[j] for j in range(k))
        denom = 1 - ef * eb
        if denom == 0:
            return None
        f, b = ([(fj - ef * bj) / denom for fj, bj in zip(f + [0], [0] + b)],
                [(bj - eb * fj) / denom for fj, bj in zip(f + [0], [0] + b)])
    return f, b


def _mp_gst_entry(x, y, i, j):
    n = len(x)
    terms = [x[i - k] * y[n - j + k - 1] for k in range(1, min(i, j) + 1)]
    terms += [-y[i - k - 1] * x[n - j + k] for k in range(1, min(i, j) + 1) if i - k >= 1 and k < j]
    return mpmath.fsum(terms) / x[0]


def _mp_ratio(s, p, n, lost):
    """The corner ratio with corners and the small determinant in extended precision.

    The working precision grows until the observed cancellation leaves
    ``RATIO_GUARD_DIGITS`` digits; the matrix entries are the same doubles the
    double-precision path uses.
    """
    coeffs = fourier_coefficients(s, -(n - 1), n - 1)
    E = p.block_matrix()
    m = p.m0
    idx = list(range(1, m + 1)) + list(range(n - m + 1, n + 1))
    dps = 60 if math.isinf(lost) else int(lost) + RATIO_GUARD_DIGITS + 20
    val = None
    for _ in range(4):
        with mpmath.workdps(dps):
            a = [mpmath.mpc(complex(z)) for z in coeffs]
            cols = _mp_levinson(a, n)
            if cols is None:
                return None
            x, y = cols
            S = mpmath.matrix([[_mp_gst_entry(x, y, i, j) for j in idx] for i in idx])
            Emp = mpmath.matrix([[mpmath.mpc(complex(z)) for z in row] for row in E])
            M = mpmath.eye(2 * m) + S * Emp
            val = mpmath.det(M)
            bound = mpmath.fprod(mpmath.fsum(abs(M[r, c]) for c in range(2 * m)) for r in range(2 * m))
            if val == 0:
                dps *= 2
                continue
            cancelled = float(mpmath.log10(bound / abs(val))) if bound else 0.0
            if dps - cancelled >= RATIO_GUARD_DIGITS:
                return complex(val)
            dps = int(cancelled) + RATIO_GUARD_DIGITS + 20
    return complex(val)


def perturbed_det_ratio_exact(s, p, n):
    """``det(T_n(a) + E_n) / det T_n(a)`` from the corners of T_n^{-1}(a).

    Never forms the perturbed n x n matrix. The 2m0 x 2m0 determinant can
    cancel badly (e.g. when the ratio decays like r**n); if more than
    ``RATIO_MAX_LOST_DIGITS`` digits are lost, the corners and the
    determinant are recomputed with mpmath from the same matrix entries.
    """
    n = int(n)
    if n < 2 * p.m0:
        raise ShapeError(f"n = {n} is smaller than 2*m0 = {2 * p.m0}")
    corners = inverse_corners(s, n, p.m0)
    M = np.eye(2 * p.m0) + corners.block_matrix() @ p.block_matrix()
    ratio = determinant(M)
    lost = _lost_digits(M, ratio)
    if lost > RATIO_MAX_LOST_DIGITS:
        refined = _mp_ratio(s, p, n, lost)
        if refined is not None:
            return refined
    return ratio
