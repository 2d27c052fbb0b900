"""Limits of ``det(T_n(a) + E_n) / det T_n(a)`` as n grows.

All limits share one shape: ``det(I + diag(S11, flip(S11).T) E)`` where S11 is
the top-left m0 x m0 block of the (semi-)infinite inverse. What changes with the
symbol class is how S11 is obtained:

* tame (invertible T(a)): ``T(a)^{-1} = T(a_+^{-1}) T(a_-^{-1}) / G(a)``;
* Hermitian with Fisher-Hartwig zeros: the first column of T_n^{-1} converges
  entrywise to ``(a_+^{-1})_{j-1} / G(a)`` and S11 is rebuilt from it.
"""
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import toeplitz as _dense_toeplitz

from .errors import DomainError, FormulaInapplicableError, ShapeError, UnsupportedSymbolError
from .linalg import determinant, flip
from .symbols import (
    PureFisherHartwig,
    analytic_inverse_coeffs,
    analytic_minus_inverse_coeffs,
    geometric_mean,
    is_hermitian,
)
from .toeplitz import perturbed_det_ratio_exact


@dataclass
class LimitRatioReport:
    """Finite-n ratios next to their limit.

    Attributes:
        limit_value: the n -> infinity ratio.
        samples: ``(n, ratio)`` pairs, strictly increasing in n.
        residuals: ``(n, |ratio - limit|)``, aligned with ``samples``.
        residuals_monotone: True when the residuals strictly decrease
            (or all vanish to rounding).
    """

    limit_value: complex
    samples: list = field(default_factory=list)
    residuals: list = field(default_factory=list)
    residuals_monotone: bool = True


def tame_limit_ratio(S11, p):
    """``det(I + diag(S11, flip(S11).T) [[E11, E12], [E21, E22]])``."""
    S = np.atleast_2d(np.asarray(S11, dtype=np.complex128))
    m = p.m0
    if S.shape != (m, m):
        raise ShapeError(f"S11 must be {m}x{m}, got {S.shape}")
    D = np.zeros((2 * m, 2 * m), dtype=np.complex128)
    D[:m, :m] = S
    D[m:, m:] = flip(S).T
    return determinant(np.eye(2 * m) + D @ p.block_matrix())


def scalar_tame_limit(G, E):
    """``det(I + E / G)`` for four scalar corners.

    Vanishes exactly when G is an eigenvalue of ``-E``.
    """
    G = float(G)
    if not G > 0:
        raise DomainError(f"G must be positive, got {G}")
    E = np.asarray(E, dtype=np.complex128)
    if E.shape != (2, 2):
        raise ShapeError(f"E must be 2x2, got {E.shape}")
    # expanded by hand so the eigenvalue case cancels exactly in exact inputs
    return (1 + E[0, 0] / G) * (1 + E[1, 1] / G) - E[0, 1] * E[1, 0] / G ** 2


def hermitian_first_column_limit(s, m, grid=None):
    """Limits ``c_1..c_m`` of the first column of T_n^{-1}(a), ``c_j = (a_+^{-1})_{j-1} / G(a)``."""
    if not is_hermitian(s):
        raise UnsupportedSymbolError("first-column limits need a Hermitian symbol")
    return analytic_inverse_coeffs(s, int(m), grid) / geometric_mean(s, grid)


def s11_limit_matrix(c):
    """``L(c) U(conj c) / c_1`` with L lower- and U upper-triangular Toeplitz.

    Raises:
        FormulaInapplicableError: if ``c_1`` vanishes.
    """
    c = np.atleast_1d(np.asarray(c, dtype=np.complex128))
    if c.ndim != 1 or c.size == 0:
        raise ShapeError("c must be a nonempty vector")
    if abs(c[0]) <= 1e-300 or abs(c[0]) <= 1e-14 * np.max(np.abs(c)):
        raise FormulaInapplicableError("c_1 = 0, the limit matrix is degenerate")
    z = np.zeros_like(c)
    L = _dense_toeplitz(c, z)
    U = _dense_toeplitz(np.r_[np.conj(c[0]), z[1:]], np.conj(c))
    return L @ U / c[0]


def hermitian_limit_ratio(s, p, grid=None):
    return tame_limit_ratio(s11_limit_matrix(hermitian_first_column_limit(s, p.m0, grid)), p)


def tame_s11(s, m0, grid=None):
    """Top-left m0 x m0 block of ``T(a)^{-1} = T(a_+^{-1}) T(a_-^{-1}) / G(a)``.

    Needs a symbol without zeros on the circle and with winding number zero.
    """
    if isinstance(s, PureFisherHartwig):
        raise UnsupportedSymbolError("pure Fisher-Hartwig symbols are not tame")
    m0 = int(m0)
    plus = analytic_inverse_coeffs(s, m0, grid)
    minus = analytic_minus_inverse_coeffs(s, m0, grid)
    z = np.zeros(m0, dtype=np.complex128)
    lower = _dense_toeplitz(plus, z)
    upper = _dense_toeplitz(np.r_[minus[0], z[1:]], minus)
    return lower @ upper / geometric_mean(s, grid)


def limit_ratio(s, p, grid=None):
    """The n -> infinity ratio, picking the applicable route for the symbol class."""
    if is_hermitian(s):
        return hermitian_limit_ratio(s, p, grid)
    if isinstance(s, PureFisherHartwig):
        raise UnsupportedSymbolError(
            "no limit formula for non-Hermitian pure Fisher-Hartwig symbols")
    return tame_limit_ratio(tame_s11(s, p.m0, grid), p)


def limit_ratio_report(s, p, n_list, grid=None):
    """Finite-n ratios from the corner oracle, paired with the limit."""
    ns = sorted(int(n) for n in n_list)
    if not ns:
        raise DomainError("n_list is empty")
    if len(set(ns)) != len(ns):
        raise DomainError("n_list has repeated values")
    if ns[0] < 2 * p.m0:
        raise ShapeError(f"every n must be at least 2*m0 = {2 * p.m0}")
    lim = complex(limit_ratio(s, p, grid))
    samples = [(n, complex(perturbed_det_ratio_exact(s, p, n))) for n in ns]
    residuals = [(n, abs(r - lim)) for n, r in samples]
    res = [r for _, r in residuals]
    floor = 1e-13 * max(1.0, abs(lim))
    monotone = all(b < a or (a <= floor and b <= floor) for a, b in zip(res, res[1:]))
    return LimitRatioReport(lim, samples, residuals, monotone)
