"""Symbols on the unit circle and the sequences derived from them.

Three families are supported:

* :class:`LaurentPolynomial` -- finitely many nonzero Fourier coefficients.
* :class:`PureFisherHartwig` -- ``(1 - t)**gamma * (1 - 1/t)**delta``.
* :class:`HermitianFisherHartwig` -- ``prod_j |t_j - t|**(2 alpha_j) * b(t)``
  with a positive Laurent polynomial ``b``.

All functions here are pure; nothing is cached.
"""
import functools
import math
import os
import re
from dataclasses import dataclass, field

import mpmath
import numpy as np

from .errors import DivergenceError, DomainError, ParseError, UnsupportedSymbolError
from .special import log_gamma_array

DEFAULT_FFT_GRID = 4096
FFT_GRID_ENV = "CORNERDET_FFT_GRID"
POSITIVITY_GRID = 1024
#: Composite quadrature for several singularities: nodes per panel, the largest phase
#: k * (panel width) a panel must resolve, and the working digits of the Jacobi rules.
QUADRATURE_PANEL_NODES = 30
QUADRATURE_PANEL_PHASE = 12.0
QUADRATURE_RULE_DIGITS = 40


def default_fft_grid():
    value = os.environ.get(FFT_GRID_ENV)
    if not value:
        return DEFAULT_FFT_GRID
    try:
        grid = int(value)
    except ValueError:
        raise DomainError(f"{FFT_GRID_ENV} must be an integer, got {value!r}") from None
    if grid < 16:
        raise DomainError(f"{FFT_GRID_ENV} must be at least 16")
    return grid


@dataclass(frozen=True)
class LaurentPolynomial:
    """``a(t) = sum_k coeffs[k] t**k`` over a finite index set."""

    coeffs: dict

    def __post_init__(self):
        clean = {}
        for k, c in self.coeffs.items():
            if int(k) != k:
                raise DomainError(f"Laurent index must be an integer, got {k!r}")
            c = complex(c)
            if not (math.isfinite(c.real) and math.isfinite(c.imag)):
                raise DomainError("Laurent coefficients must be finite")
            if c != 0:
                clean[int(k)] = c
        object.__setattr__(self, "coeffs", dict(sorted(clean.items())))

    @classmethod
    def constant(cls, c):
        return cls({0: c})

    @property
    def k_min(self):
        return min(self.coeffs, default=0)

    @property
    def k_max(self):
        return max(self.coeffs, default=0)

    def coefficient(self, k):
        return self.coeffs.get(int(k), 0j)

    def __call__(self, t):
        t = np.asarray(t, dtype=np.complex128)
        out = np.zeros_like(t)
        for k, c in self.coeffs.items():
            out += c * t**k
        return out

    def is_hermitian(self, tol=1e-14):
        scale = max((abs(c) for c in self.coeffs.values()), default=1.0)
        return all(abs(c - np.conj(self.coefficient(-k))) <= tol * scale
                   for k, c in self.coeffs.items())


@dataclass(frozen=True)
class PureFisherHartwig:
    """``xi_delta * eta_gamma = (1 - 1/t)**delta (1 - t)**gamma``."""

    delta: complex
    gamma: complex

    def __post_init__(self):
        d, g = complex(self.delta), complex(self.gamma)
        if not (d.real > -1 and g.real > -1 and (d + g).real > -1):
            raise DomainError(
                f"need Re delta, Re gamma, Re(delta+gamma) > -1; got delta={d}, gamma={g}")
        object.__setattr__(self, "delta", d)
        object.__setattr__(self, "gamma", g)

    @property
    def is_hermitian(self):
        return self.delta == self.gamma and self.delta.imag == 0


@dataclass(frozen=True)
class HermitianFisherHartwig:
    """``prod_j |t_j - t|**(2 alpha_j) * b(t)`` with distinct unimodular ``t_j``."""

    singularities: tuple
    smooth_part: LaurentPolynomial = field(default_factory=lambda: LaurentPolynomial.constant(1.0))

    def __post_init__(self):
        sing = tuple((complex(t), float(alpha)) for t, alpha in self.singularities)
        for t, alpha in sing:
            if abs(abs(t) - 1.0) > 1e-12:
                raise DomainError(f"singularity {t} is not on the unit circle")
            if not alpha > -0.5:
                raise DomainError(f"exponent alpha={alpha} must exceed -1/2 for integrability")
        for i in range(len(sing)):
            for j in range(i + 1, len(sing)):
                if abs(sing[i][0] - sing[j][0]) <= 1e-12:
                    raise DomainError("singularity points must be pairwise distinct")
        object.__setattr__(self, "singularities", sing)
        b = self.smooth_part
        if not isinstance(b, LaurentPolynomial):
            raise DomainError("smooth part must be a LaurentPolynomial")
        if not b.is_hermitian():
            raise DomainError("smooth part must be real-valued on the circle")
        theta = 2 * np.pi * np.arange(POSITIVITY_GRID) / POSITIVITY_GRID
        if np.min(b(np.exp(1j * theta)).real) <= 0:
            raise DomainError("smooth part must be strictly positive on the circle")


@dataclass(frozen=True)
class LogCoefficients:
    """Fourier coefficients ``(log a)_k`` for ``|k| <= half_order``."""

    half_order: int
    values: np.ndarray

    def __getitem__(self, k):
        if abs(k) > self.half_order:
            raise IndexError(f"|k| = {abs(k)} exceeds half order {self.half_order}")
        return complex(self.values[k + self.half_order])

    def positive(self):
        """``(log a)_1, ..., (log a)_K``."""
        return self.values[self.half_order + 1:]

    def negative(self):
        """``(log a)_{-1}, ..., (log a)_{-K}``."""
        return self.values[:self.half_order][::-1]


@dataclass(frozen=True)
class SzegoConstant:
    value: complex
    last_term: float
    terms: int


def is_hermitian(s):
    if isinstance(s, HermitianFisherHartwig):
        return True
    if isinstance(s, PureFisherHartwig):
        return s.is_hermitian
    return s.is_hermitian()


# -- Fourier coefficients ---------------------------------------------------

def _pure_fh_coefficients(delta, gamma, ks):
    ks = np.asarray(ks, dtype=np.int64)
    if all(z.imag == 0 and z.real >= 0 and z.real == int(z.real) for z in (delta, gamma)):
        # nonnegative integers: a trigonometric polynomial with integer coefficients
        a, b = int(delta.real), int(gamma.real)
        return np.array([(-1) ** (k % 2) * math.comb(a + b, a + k) if -a <= k <= b else 0
                         for k in ks.tolist()], dtype=np.complex128)
    dk = delta + ks + 1
    gk = gamma - ks + 1
    zero = _at_pole(dk) | _at_pole(gk)
    with np.errstate(all="ignore"):
        logs = (log_gamma_array(1 + delta + gamma) - log_gamma_array(np.where(zero, 1, dk))
                - log_gamma_array(np.where(zero, 1, gk)))
        vals = np.where(ks % 2 == 0, 1.0, -1.0) * np.exp(logs)
    vals = np.where(zero, 0j, vals)
    if delta.imag == 0 and gamma.imag == 0:
        vals = vals.real.astype(np.complex128)
    if not np.all(np.isfinite(vals)):
        raise DomainError("Fourier coefficient is not finite")
    return vals


def _at_pole(z):
    z = np.asarray(z, dtype=np.complex128)
    return (z.imag == 0) & (z.real <= 0) & (z.real == np.floor(z.real))


def _hermitian_fh_single(s, half):
    # one singularity: closed-form coefficients times the finite smooth part
    (t, alpha), = s.singularities
    b = s.smooth_part
    L = half + max(abs(b.k_min), abs(b.k_max))
    ks = np.arange(-L, L + 1)
    seq = _pure_fh_coefficients(complex(alpha), complex(alpha), ks) * np.exp(-1j * np.angle(t) * ks)
    bseq = np.array([b.coefficient(k) for k in range(b.k_min, b.k_max + 1)])
    full = np.convolve(seq, bseq)  # full[i] is the coefficient of index i - L + b.k_min
    lo = L - b.k_min - half
    return full[lo:lo + 2 * half + 1]


@functools.lru_cache(maxsize=64)
def _gauss_jacobi(N, a, b):
    """Gauss rule for the weight ``(1 - x)**a (1 + x)**b`` on [-1, 1] (Golub-Welsch in mpmath).

    scipy's rule loses digits for negative exponents; the rules needed here
    are small, so they are built once in extended precision and cached.
    """
    with mpmath.workdps(QUADRATURE_RULE_DIGITS):
        a, b = mpmath.mpf(a), mpmath.mpf(b)
        J = mpmath.zeros(N, N)
        for n in range(N):
            if n == 0:
                J[0, 0] = (b - a) / (a + b + 2)
            else:
                s2 = 2 * n + a + b
                J[n, n] = (b * b - a * a) / (s2 * (s2 + 2))
                if n == 1:
                    beta = 4 * (1 + a) * (1 + b) / ((2 + a + b) ** 2 * (3 + a + b))
                else:
                    beta = 4 * n * (n + a) * (n + b) * (n + a + b) / (s2 ** 2 * (s2 + 1) * (s2 - 1))
                J[n, n - 1] = J[n - 1, n] = mpmath.sqrt(beta)
        nodes, vecs = mpmath.eigsy(J)
        mass = 2 ** (a + b + 1) * mpmath.gamma(a + 1) * mpmath.gamma(b + 1) / mpmath.gamma(a + b + 2)
        x = np.array([float(nodes[i]) for i in range(N)])
        w = np.array([float(mass * vecs[0, i] ** 2) for i in range(N)])
    order = np.argsort(x)
    return x[order], w[order]


def _arc_rule(A, B, alpha_a, alpha_b, half):
    """Nodes and weights on the arc [A, B] for the full symbol, with the
    endpoint powers absorbed into Gauss-Jacobi rules on the first and last panel.

    Returns ``(theta, w, sing)`` where ``sing`` is +1 on the A panel, -1 on
    the B panel and 0 elsewhere.
    """
    length = B - A
    panels = max(2, math.ceil(length * max(half, 1) / QUADRATURE_PANEL_PHASE))
    d = length / panels
    N = QUADRATURE_PANEL_NODES
    xl, wl = np.polynomial.legendre.leggauss(N)
    thetas, weights, flags = [], [], []
    for j in range(panels):
        left = A + j * d
        if j == 0:
            x, w = _gauss_jacobi(N, 0.0, 2 * alpha_a)
            w = w * (d / 2) ** (1 + 2 * alpha_a)
            flag = 1
        elif j == panels - 1:
            x, w = _gauss_jacobi(N, 2 * alpha_b, 0.0)
            w = w * (d / 2) ** (1 + 2 * alpha_b)
            flag = -1
        else:
            x, w = xl, wl * (d / 2)
            flag = 0
        thetas.append(left + (d / 2) * (1 + x))
        weights.append(w)
        flags.append(np.full(N, flag))
    return np.concatenate(thetas), np.concatenate(weights), np.concatenate(flags)


def _hermitian_fh_quadrature(s, half):
    """Coefficients for several singularities by composite Gauss quadrature on each arc.

    Between consecutive singular angles A < B the panels touching A and B carry
    Gauss-Jacobi rules for ``(theta - A)**(2 alpha_A)`` and ``(B - theta)**(2 alpha_B)``;
    everything else is smooth, and panels are short enough to resolve ``exp(-i k theta)``.
    """
    sing = sorted(((float(np.angle(t)) % (2 * np.pi), alpha) for t, alpha in s.singularities))
    m = len(sing)
    thetas, values = [], []
    for i, (A, alpha_a) in enumerate(sing):
        B, alpha_b = sing[(i + 1) % m]
        if B <= A:
            B += 2 * np.pi
        theta, w, flag = _arc_rule(A, B, alpha_a, alpha_b, half)
        f = np.real(s.smooth_part(np.exp(1j * theta)))
        for j, (theta_j, alpha) in enumerate(sing):
            chord = np.abs(2 * np.sin((theta - theta_j) / 2))
            if j == i:
                chord = np.where(flag == 1, chord / (theta - A), chord)
            elif j == (i + 1) % m:
                chord = np.where(flag == -1, chord / (B - theta), chord)
            f = f * chord ** (2 * alpha)
        thetas.append(theta)
        values.append(w * f)
    theta = np.concatenate(thetas)
    wf = np.concatenate(values)
    # exp(-i k theta) in blocks: exp(-i k0 theta) * exp(-i j theta), j < block
    block = 64
    inner = np.exp(-1j * np.outer(np.arange(block), theta))
    ks = np.arange(-half, half + 1)
    out = np.empty(ks.size, dtype=np.complex128)
    for start in range(0, ks.size, block):
        k0 = ks[start]
        stop = min(start + block, ks.size)
        out[start:stop] = inner[:stop - start] @ (np.exp(-1j * k0 * theta) * wf)
    return out / (2 * np.pi)


def _hermitian_fh_coefficients(s, kmin, kmax):
    half = max(abs(kmin), abs(kmax), 1)
    if len(s.singularities) == 0:
        acc = np.array([s.smooth_part.coefficient(k) for k in range(-half, half + 1)], dtype=np.complex128)
    elif len(s.singularities) == 1:
        acc = _hermitian_fh_single(s, half)
    else:
        acc = _hermitian_fh_quadrature(s, half)
    acc = 0.5 * (acc + np.conj(acc[::-1]))
    return acc[kmin + half:kmax + half + 1]


def fourier_coefficients(s, kmin, kmax):
    """Array of ``a_k`` for ``k = kmin..kmax`` (inclusive)."""
    if kmax < kmin:
        return np.zeros(0, dtype=np.complex128)
    ks = np.arange(kmin, kmax + 1)
    if isinstance(s, LaurentPolynomial):
        return np.array([s.coefficient(k) for k in ks], dtype=np.complex128)
    if isinstance(s, PureFisherHartwig):
        return _pure_fh_coefficients(s.delta, s.gamma, ks)
    if isinstance(s, HermitianFisherHartwig):
        return _hermitian_fh_coefficients(s, kmin, kmax)
    raise UnsupportedSymbolError(f"unknown symbol type {type(s).__name__}")


def fourier_coefficient(s, k):
    """The k-th Fourier coefficient ``a_k``.

    For a pure Fisher-Hartwig symbol this is
    ``(-1)**k Gamma(1+delta+gamma) / (Gamma(delta+k+1) Gamma(gamma-k+1))``,
    exactly zero whenever one of the denominator arguments is a nonpositive
    integer.
    """
    return complex(fourier_coefficients(s, k, k)[0])


# -- logarithms -------------------------------------------------------------

def _laurent_log_coefficients(b, K, grid=None):
    grid = max(grid or default_fft_grid(), 4 * K + 4, 4 * (b.k_max - b.k_min + 1))
    theta = 2 * np.pi * np.arange(grid) / grid
    vals = b(np.exp(1j * theta))
    scale = np.max(np.abs(vals))
    if scale == 0 or np.min(np.abs(vals)) <= 1e-13 * scale:
        raise UnsupportedSymbolError("symbol vanishes on the unit circle; its logarithm is not available")
    if b.is_hermitian():
        if np.min(vals.real) <= 0:
            raise DomainError("Hermitian symbol is not strictly positive on the circle")
        logs = np.log(vals.real).astype(np.complex128)
    else:
        arg = np.unwrap(np.angle(np.append(vals, vals[0])))
        winding = (arg[-1] - arg[0]) / (2 * np.pi)
        if abs(winding) > 0.5:
            raise UnsupportedSymbolError(
                f"symbol has winding number {round(winding)} about the origin")
        logs = np.log(np.abs(vals)) + 1j * arg[:-1]
    c = np.fft.fft(logs) / grid
    idx = np.arange(-K, K + 1)
    return c[idx % grid]


def log_coefficients(s, K, grid=None):
    """``(log a)_k`` for ``|k| <= K``.

    Singular factors use the exact series
    ``log|t_j - t|**(2 alpha) = -alpha sum_{k>=1} (conj(t_j)**k t**k + t_j**k t**-k) / k``;
    Laurent polynomials (and smooth parts) are handled by an FFT of the
    continuous logarithm on a grid of ``grid`` points.
    """
    K = int(K)
    if K < 0:
        raise DomainError("K must be nonnegative")
    k = np.arange(1, K + 1)
    out = np.zeros(2 * K + 1, dtype=np.complex128)
    if isinstance(s, PureFisherHartwig):
        out[K + 1:] = -s.gamma / k
        out[:K] = (-s.delta / k)[::-1]
    elif isinstance(s, HermitianFisherHartwig):
        for t, alpha in s.singularities:
            out[K + 1:] += -alpha * np.conj(t) ** k / k
            out[:K] += (-alpha * t ** k / k)[::-1]
        out += _laurent_log_coefficients(s.smooth_part, K, grid)
    elif isinstance(s, LaurentPolynomial):
        out = _laurent_log_coefficients(s, K, grid)
    else:
        raise UnsupportedSymbolError(f"unknown symbol type {type(s).__name__}")
    if is_hermitian(s):
        out = 0.5 * (out + np.conj(out[::-1]))
        out[K] = out[K].real
    return LogCoefficients(K, out)


def geometric_mean(s, grid=None):
    """``G(a) = exp((log a)_0)``.

    Real and positive for Hermitian symbols; for a non-Hermitian Laurent
    polynomial with winding number zero the value may be complex.
    """
    g = np.exp(log_coefficients(s, 0, grid)[0])
    if is_hermitian(s) or abs(g.imag) <= 1e-15 * abs(g):
        return float(g.real)
    return complex(g)


#: Consecutive non-decreasing envelope values that flag a divergent Szego series.
DIVERGENCE_RUN = 16


def szego_constant(s, K=256, grid=None):
    """Partial sum of ``E(a) = exp sum_{k>=1} k (log a)_{-k} (log a)_k`` up to ``K``.

    Raises:
        DivergenceError: if the envelope ``max_{k-15 <= i <= k} i |term_i|``
            fails to decrease over 16 consecutive non-negligible terms while
            being re-attained (within a factor 2) in the last 8, i.e. the
            terms are not ``o(1/k)``. The envelope also catches
            oscillating ``1/k`` patterns from several singularities.
    """
    lc = log_coefficients(s, K, grid)
    pos, neg = lc.positive(), lc.negative()
    k = np.arange(1, K + 1)
    terms = k * neg * pos
    partial = np.cumsum(terms)
    weighted = k * np.abs(terms)
    run = 0
    prev = None
    for i in range(K):
        env = weighted[max(0, i - DIVERGENCE_RUN + 1):i + 1].max()
        if env <= 1e-18 * (i + 1) * max(1.0, abs(partial[i])):
            run, prev = 0, None
            continue
        # a single old spike can hold the window max flat; require the max to recur recently
        recent = weighted[max(0, i - DIVERGENCE_RUN // 2 + 1):i + 1].max()
        if prev is not None and env >= (1 - 1e-9) * prev and recent >= 0.5 * env:
            run += 1
            if run >= DIVERGENCE_RUN:
                raise DivergenceError(
                    f"Szego series does not converge (terms ~ 1/k near k={i + 1})")
        else:
            run = 0
        prev = env
    total = partial[-1] if K else 0j
    return SzegoConstant(complex(np.exp(total)), float(abs(terms[-1])) if K else 0.0, K)


def exp_series(f, m):
    """Coefficients ``g_0..g_{m-1}`` of ``exp(sum_{k>=1} f[k-1] z**k)``.

    Uses ``k g_k = sum_{j=1..k} j f_j g_{k-j}``.
    """
    g = np.zeros(m, dtype=np.complex128)
    if m == 0:
        return g
    g[0] = 1.0
    jf = np.arange(1, m) * np.asarray(f[:m - 1], dtype=np.complex128)
    for k in range(1, m):
        g[k] = np.dot(jf[:k], g[k - 1::-1]) / k
    return g


def analytic_inverse_coeffs(s, m, grid=None):
    """``(a_+^{-1})_0 .. (a_+^{-1})_{m-1}`` where ``a_+^{-1} = exp(-sum_{k>=1} (log a)_k z**k)``."""
    if m < 1:
        raise DomainError("m must be at least 1")
    lc = log_coefficients(s, 4 * m + 64, grid)
    return exp_series(-lc.positive(), m)


def analytic_minus_inverse_coeffs(s, m, grid=None):
    """``(a_-^{-1})_0, (a_-^{-1})_{-1}, ..., (a_-^{-1})_{-(m-1)}`` from the negative log-coefficients."""
    if m < 1:
        raise DomainError("m must be at least 1")
    lc = log_coefficients(s, 4 * m + 64, grid)
    return exp_series(-lc.negative(), m)


# -- literal grammar ---------------------------------------------------------

_COMPLEX_RE = re.compile(r"^[+-]?[0-9.eE+\-ij]*$")


def parse_complex(text):
    """Parse ``a+bi`` style literals (``j`` is accepted too)."""
    t = text.strip().replace(" ", "")
    if not t or not _COMPLEX_RE.match(t):
        raise ParseError(f"not a complex literal: {text!r}")
    t = t.replace("i", "j")
    if t in ("j", "+j", "-j"):
        t = t.replace("j", "1j")
    try:
        return complex(t)
    except ValueError:
        raise ParseError(f"not a complex literal: {text!r}") from None


def parse_laurent(text):
    coeffs = {}
    for item in filter(None, (p.strip() for p in text.split(","))):
        if "=" not in item:
            raise ParseError(f"Laurent term must look like k=c, got {item!r}")
        k, c = item.split("=", 1)
        try:
            k = int(k)
        except ValueError:
            raise ParseError(f"Laurent index must be an integer, got {k!r}") from None
        coeffs[k] = coeffs.get(k, 0) + parse_complex(c)
    if not coeffs:
        raise ParseError("empty Laurent polynomial")
    return LaurentPolynomial(coeffs)


def parse_symbol(text):
    """Parse a symbol literal.

    Grammar::

        fh:<delta>,<gamma>
        laurent:k1=c1,k2=c2,...
        hfh:[(t_re,t_im,alpha);...]*b:k1=c1,...     (the *b: part is optional)
    """
    text = text.strip()
    kind, sep, body = text.partition(":")
    if not sep:
        raise ParseError(f"symbol literal needs a 'kind:' prefix: {text!r}")
    if kind == "fh":
        parts = body.split(",")
        if len(parts) != 2:
            raise ParseError(f"fh symbol needs two parameters, got {body!r}")
        return PureFisherHartwig(parse_complex(parts[0]), parse_complex(parts[1]))
    if kind == "laurent":
        return parse_laurent(body)
    if kind == "hfh":
        m = re.match(r"^\[(.*)\](?:\*b:(?:laurent:)?(.*))?$", body)
        if not m:
            raise ParseError(f"malformed hfh literal: {body!r}")
        sing = []
        for item in filter(None, (p.strip() for p in m.group(1).split(";"))):
            nums = item.strip("()").split(",")
            if len(nums) != 3:
                raise ParseError(f"singularity must be (t_re,t_im,alpha), got {item!r}")
            try:
                t_re, t_im, alpha = (float(x) for x in nums)
            except ValueError:
                raise ParseError(f"bad number in singularity {item!r}") from None
            sing.append((complex(t_re, t_im), alpha))
        smooth = parse_laurent(m.group(2)) if m.group(2) else LaurentPolynomial.constant(1.0)
        return HermitianFisherHartwig(tuple(sing), smooth)
    raise ParseError(f"unknown symbol kind {kind!r}")
