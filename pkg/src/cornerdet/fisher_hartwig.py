"""Closed forms for the pure Fisher-Hartwig symbol ``(1 - 1/t)**delta (1 - t)**gamma``.

Everything is expressed through Gamma quotients: the Barnes-G quotient of the
exact determinant telescopes (via ``G(z + 1) = Gamma(z) G(z)``) into a finite
Gamma product, so no Barnes function is ever evaluated for finite n.
"""
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DomainError, PoleError
from .linalg import determinant
from .special import gamma_ratio, is_pole, log_gamma
from .symbols import PureFisherHartwig


@dataclass(frozen=True)
class FHParams:
    """Exponents of ``xi_delta eta_gamma``; validated like :class:`PureFisherHartwig`."""

    delta: complex
    gamma: complex

    def __post_init__(self):
        d, g = complex(self.delta), complex(self.gamma)
        if not (d.real > -1 and g.real > -1 and (d + g).real > -1):
            raise DomainError(
                f"need Re delta, Re gamma, Re(delta+gamma) > -1; got delta={d}, gamma={g}")
        object.__setattr__(self, "delta", d)
        object.__setattr__(self, "gamma", g)

    @classmethod
    def from_symbol(cls, s):
        return cls(s.delta, s.gamma)

    def symbol(self):
        return PureFisherHartwig(self.delta, self.gamma)

    def swapped(self):
        """Parameters of the transposed symbol ``xi_gamma eta_delta``."""
        return FHParams(self.gamma, self.delta)


@dataclass(frozen=True)
class AsymptoticEntry:
    """``leading * n**order_exponent * (1 + correction / (2 n))``."""

    leading: complex
    correction: complex
    order_exponent: complex

    def __call__(self, n):
        return self.leading * complex(n) ** self.order_exponent * (1 + self.correction / (2 * n))


def _as_params(p):
    if isinstance(p, FHParams):
        return p
    if isinstance(p, PureFisherHartwig):
        return FHParams.from_symbol(p)
    d, g = p
    return FHParams(d, g)


def _clean(z, real):
    return complex(z.real, 0.0) if real else complex(z)


def _is_real(p):
    return p.delta.imag == 0 and p.gamma.imag == 0


# -- determinants -------------------------------------------------------------

def _log_ratio_terms(p, n):
    # log R_j for j = 1..n, R_j = Gamma(j) Gamma(j+d+g) / (Gamma(j+d) Gamma(j+g));
    # R_1 from log-Gamma, then R_{j+1} / R_j = 1 - d g / ((j+d)(j+g)) exactly
    d, g = p.delta, p.gamma
    for z in (1 + d, 1 + g, 1 + d + g):
        if is_pole(z):
            raise PoleError(f"uncancelled Gamma pole at z={z}")
    first = log_gamma(1 + d + g) - log_gamma(1 + d) - log_gamma(1 + g)
    j = np.arange(1, n, dtype=np.float64)
    inc = np.log1p(-d * g / ((j + d) * (j + g)))
    return first + np.concatenate(([0j], np.cumsum(inc)))


def fh_log_exact_det(p, n):
    """Logarithm of det T_n(xi_delta eta_gamma) (any branch)."""
    p = _as_params(p)
    n = int(n)
    if n < 1:
        raise DomainError("n must be at least 1")
    t = _log_ratio_terms(p, n)
    return complex(math.fsum(t.real), math.fsum(t.imag))


#: Integer exponents up to this n are multiplied out in exact rationals.
EXACT_RATIONAL_MAX_N = 2000


def _integer_exponents(p):
    return all(z.imag == 0 and z.real >= 0 and z.real == int(z.real) for z in (p.delta, p.gamma))


def fh_exact_det_rational(p, n):
    """The determinant as a :class:`Fraction` for nonnegative integer exponents."""
    p = _as_params(p)
    if not _integer_exponents(p):
        raise DomainError("rational determinant needs nonnegative integer exponents")
    a, b = int(p.delta.real), int(p.gamma.real)
    ratio = Fraction(math.factorial(a + b), math.factorial(a) * math.factorial(b))
    det = Fraction(1)
    for j in range(1, int(n) + 1):
        det *= ratio
        ratio *= Fraction(j * (j + a + b), (j + a) * (j + b))
    return det


def fh_exact_det(p, n):
    """det T_n(xi_delta eta_gamma) = prod_{j=1..n} Gamma(j) Gamma(j+delta+gamma) / (Gamma(j+delta) Gamma(j+gamma))."""
    p = _as_params(p)
    if _integer_exponents(p) and 1 <= int(n) <= EXACT_RATIONAL_MAX_N:
        return complex(float(fh_exact_det_rational(p, n)))
    return _clean(np.exp(fh_log_exact_det(p, n)), _is_real(p))


def _barnes_g_int(k):
    """Barnes G(k) for a positive integer k: 0! 1! ... (k-2)!."""
    return math.prod(math.factorial(i) for i in range(k - 1))


def fh_det_constant(p):
    """The constant ``G(1+delta) G(1+gamma) / G(1+delta+gamma)`` in front of n**(delta*gamma).

    Exact rational arithmetic for nonnegative integer exponents; otherwise the
    limit of ``det T_N / N**(delta gamma)`` with three levels of Richardson
    extrapolation on N = 1000, 2000, 4000, 8000.
    """
    p = _as_params(p)
    d, g = p.delta, p.gamma
    if _integer_exponents(p):
        a, b = int(d.real), int(g.real)
        return complex(Fraction(_barnes_g_int(a + 1) * _barnes_g_int(b + 1),
                                _barnes_g_int(a + b + 1)))
    Ns = [1000, 2000, 4000, 8000]
    terms = _log_ratio_terms(p, Ns[-1])
    logs = [complex(math.fsum(terms[:N].real), math.fsum(terms[:N].imag)) - d * g * math.log(N)
            for N in Ns]
    vals = [np.exp(v) for v in logs]
    # error expansion in powers of 1/N
    for level in range(1, len(vals)):
        f = 2.0 ** level
        vals = [(f * vals[i + 1] - vals[i]) / (f - 1) for i in range(len(vals) - 1)]
    return _clean(vals[0], _is_real(p))


def fh_asymptotic_det(p, n):
    """Leading-order approximation ``constant * n**(delta gamma)``."""
    p = _as_params(p)
    return _clean(fh_det_constant(p) * complex(n) ** (p.delta * p.gamma), _is_real(p))


# -- inverse ----------------------------------------------------------------

def _mu(k, alpha):
    # Gamma(k + alpha) / (Gamma(1 + alpha) Gamma(k))
    return np.array([gamma_ratio([kk + alpha], [1 + alpha, kk]) for kk in k])


def _binomial_minus(k, alpha):
    # Gamma(k + alpha) / (Gamma(alpha) Gamma(k + 1)); equals [k == 0] when alpha == 0
    if alpha == 0:
        return np.where(np.asarray(k) == 0, 1.0 + 0j, 0j)
    return np.array([gamma_ratio([kk + alpha], [alpha, kk + 1]) for kk in k])


def duduchava_roch_inverse(p, n):
    """T_n^{-1}(xi_delta eta_gamma) as a product of diagonal and triangular Toeplitz factors.

    ``Gamma_{d,g} M_g T_n(xi_{-d}) M_{d+g}^{-1} T_n(eta_{-g}) M_d`` with
    ``M_a = diag(Gamma(k+a) / (Gamma(1+a) Gamma(k)))``.
    """
    p = _as_params(p)
    n = int(n)
    if n < 1:
        raise DomainError("n must be at least 1")
    d, g = p.delta, p.gamma
    k = np.arange(1, n + 1)
    kk = np.arange(n)
    const = gamma_ratio([1 + d, 1 + g], [1 + d + g])
    xi = _binomial_minus(kk, d)
    eta = _binomial_minus(kk, g)
    upper = np.zeros((n, n), dtype=np.complex128)
    lower = np.zeros((n, n), dtype=np.complex128)
    for i in range(n):
        upper[i, i:] = xi[:n - i]
        lower[i:, i] = eta[:n - i]
    mg, md, ms = _mu(k, g), _mu(k, d), _mu(k, d + g)
    if np.any(ms == 0):
        raise PoleError("M_{delta+gamma} is singular")
    inv = const * (mg[:, None] * upper / ms[None, :]) @ (lower * md[None, :])
    return inv.real.astype(np.complex128) if _is_real(p) else inv


def fh_last_col_entry(p, j, n):
    """Exact entry ``c_{jn}^{(n)}`` of the last column of T_n^{-1}(xi_delta eta_gamma).

    ``Gamma(j+g) / (Gamma(d) Gamma(j)) * Gamma(n-j+d) Gamma(n+d) / (Gamma(n-j+1) Gamma(n+d+g))``;
    for ``j == n`` the two ``Gamma(d)`` factors cancel analytically.
    """
    p = _as_params(p)
    j, n = int(j), int(n)
    if not 1 <= j <= n:
        raise DomainError(f"need 1 <= j <= n, got j={j}, n={n}")
    d, g = p.delta, p.gamma
    if j == n:
        val = gamma_ratio([n + g, n + d], [n, n + d + g])
    else:
        val = gamma_ratio([j + g, n - j + d, n + d], [d, j, n - j + 1, n + d + g])
    return _clean(val, _is_real(p))


def fh_first_col_entry(p, j, n):
    """``c_{j1}^{(n)}(xi_d eta_g) = c_{n-j+1, n}^{(n)}(xi_g eta_d)``."""
    p = _as_params(p)
    return fh_last_col_entry(p.swapped(), int(n) - int(j) + 1, n)


def fh_corner_entries(p, n):
    """The 2 x 2 matrix ``[[c_11, c_1n], [c_n1, c_nn]]`` of T_n^{-1}(xi_delta eta_gamma)."""
    p = _as_params(p)
    return np.array([[fh_first_col_entry(p, 1, n), fh_last_col_entry(p, 1, n)],
                     [fh_first_col_entry(p, n, n), fh_last_col_entry(p, n, n)]])


def fh_entry_asymptotic(p, j, which="top"):
    """Two-term expansion of ``c_{jn}`` (``top``) or ``c_{n-j,n}`` (``bottom``) for fixed j."""
    p = _as_params(p)
    d, g = p.delta, p.gamma
    j = int(j)
    s = d + g
    if which == "top":
        if j < 1:
            raise DomainError("top entries need j >= 1")
        lead = gamma_ratio([j + g], [d, j])
        corr = (d - j) * (d - j - 1) + d * (d - 1) - s * (s - 1) - j * (j - 1)
        return AsymptoticEntry(lead, corr, d - g - 1)
    if which == "bottom":
        if j < 0:
            raise DomainError("bottom entries need j >= 0")
        lead = 1 + 0j if j == 0 else gamma_ratio([j + d], [d, j + 1])
        corr = (g - j) * (g - j - 1) + d * (d - 1) - s * (s - 1) - (j + 1) * j
        return AsymptoticEntry(lead, corr, 0j)
    raise DomainError(f"which must be 'top' or 'bottom', got {which!r}")


def gamma_ratio_asymptotic(alpha, n):
    """Two-term Stirling approximation ``n**alpha (1 + alpha (alpha - 1) / (2 n))`` of Gamma(n+alpha)/Gamma(n)."""
    alpha = complex(alpha)
    val = complex(n) ** alpha * (1 + alpha * (alpha - 1) / (2 * n))
    return _clean(val, alpha.imag == 0)


# -- scalar corners ---------------------------------------------------------

def fh_scalar_corner_ratio(p, E, n):
    """Exact ``det(T_n + E_n) / det T_n`` for scalar corners, from exact corner entries of the inverse."""
    p = _as_params(p)
    E = np.asarray(E, dtype=np.complex128)
    if E.shape != (2, 2):
        raise DomainError(f"scalar corner matrix must be 2x2, got {E.shape}")
    if int(n) < 2:
        raise DomainError("n must be at least 2")
    C = fh_corner_entries(p, n)
    return _clean(determinant(np.eye(2) + C @ E), _is_real(p) and np.all(E.imag == 0))


def cor33_expansion(alpha, E, n):
    """``det(I + E) + (alpha / n) (E12 + E21 - alpha (E11 + E22) - 2 alpha det E)`` for ``|1 - t|**(2 alpha)``."""
    E = np.asarray(E, dtype=np.complex128)
    if E.shape != (2, 2):
        raise DomainError(f"scalar corner matrix must be 2x2, got {E.shape}")
    detE = E[0, 0] * E[1, 1] - E[0, 1] * E[1, 0]
    base = (1 + E[0, 0]) * (1 + E[1, 1]) - E[0, 1] * E[1, 0]
    val = base + (alpha / n) * (E[0, 1] + E[1, 0] - alpha * (E[0, 0] + E[1, 1]) - 2 * alpha * detE)
    return _clean(val, np.all(E.imag == 0) and complex(alpha).imag == 0)


def example34_closed_det(alpha, n, perturbed=False):
    """Exact rational determinants for ``|1 - t|**(2 alpha)``, alpha in {1, 2, 3}.

    With ``perturbed=True`` the matrix carries ones in the top-right and
    bottom-left corners.
    """
    n = int(n)
    if alpha not in (1, 2, 3):
        raise DomainError(f"closed forms exist for alpha in (1, 2, 3), got {alpha!r}")
    if n < (2 if perturbed else 1):
        raise DomainError("n is too small for this closed form")
    if alpha == 1:
        return Fraction(4) if perturbed else Fraction(n + 1)
    if alpha == 2:
        if perturbed:
            return Fraction((n + 1) ** 3)
        return Fraction((n + 1) * (n + 2) ** 2 * (n + 3), 12)
    if perturbed:
        return Fraction((n + 1) * (n + 2) ** 2 * (n + 3) * ((n + 2) ** 2 + 1) * ((n + 2) ** 2 + 2), 360)
    return Fraction((n + 1) * (n + 2) ** 2 * (n + 3) ** 3 * (n + 4) ** 2 * (n + 5), 8640)


def growth_exponents(p):
    """Exponents of n for det T_n and det(T_n + E_n) with antidiagonal unit corners.

    Only the leading powers are reported; constants are not certified.
    """
    p = _as_params(p)
    d, g = p.delta, p.gamma
    base = d * g
    if d.real > g.real:
        pert = (d - 1) * (g + 1)
    elif d.real < g.real:
        pert = (g - 1) * (d + 1)
    else:
        pert = base - 1
    return {"unperturbed": base, "perturbed": pert}
