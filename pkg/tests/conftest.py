"""Shared fixtures and independent oracles for the test suite."""
from fractions import Fraction

import mpmath
import numpy as np
import pytest

from cornerdet import _kernels
from cornerdet.symbols import HermitianFisherHartwig, LaurentPolynomial, PureFisherHartwig
from cornerdet.toeplitz import CornerPerturbation

FFT_ORACLE_POINTS = 2 ** 14


def fft_coefficients(fun, kmin, kmax, points=FFT_ORACLE_POINTS):
    """Fourier coefficients of ``fun(t)`` on the unit circle by a plain FFT (aliasing-limited)."""
    theta = 2 * np.pi * np.arange(points) / points
    c = np.fft.fft(fun(np.exp(1j * theta))) / points
    return c[np.arange(kmin, kmax + 1) % points]


def pure_fh_function(delta, gamma):
    return lambda t: (1 - 1 / t) ** delta * (1 - t) ** gamma


def mp_det(M, dps=50):
    """Determinant by LU in extended precision (mpmath)."""
    with mpmath.workdps(dps):
        A = mpmath.matrix([[mpmath.mpc(complex(x)) for x in row] for row in np.asarray(M)])
        return complex(mpmath.det(A))


def fraction_det(rows):
    """Exact determinant by rational Gaussian elimination."""
    M = [[Fraction(x) for x in r] for r in rows]
    n = len(M)
    det = Fraction(1)
    for k in range(n):
        p = next((i for i in range(k, n) if M[i][k] != 0), None)
        if p is None:
            return Fraction(0)
        if p != k:
            M[k], M[p] = M[p], M[k]
            det = -det
        det *= M[k][k]
        for i in range(k + 1, n):
            if M[i][k] == 0:
                continue
            f = M[i][k] / M[k][k]
            for j in range(k, n):
                M[i][j] -= f * M[k][j]
    return det


def tame_symbol(mu=0.5, nu=0.5):
    """(1 - mu t)(1 - nu / t)."""
    return LaurentPolynomial({0: 1 + mu * nu, 1: -mu, -1: -nu})


def tame_dets(mu, nu, n):
    """Exact det T_n and det(T_n + antidiagonal unit corners) for ``tame_symbol``."""
    det = (1 - (mu * nu) ** (n + 1)) / (1 - mu * nu)
    pert = (1 + mu * nu) * (mu * nu) ** (n - 1) + mu ** (n - 1) + nu ** (n - 1)
    return det, pert


ANTIDIAGONAL = CornerPerturbation.scalar([[0, 1], [1, 0]])
IDENTITY = CornerPerturbation.scalar(np.eye(2))
ONES = CornerPerturbation.scalar(np.ones((2, 2)))
BLOCK2 = CornerPerturbation(2, [[1, 0.5j], [0, 2]], [[0, 1], [1, 0]],
                            [[1, 0], [0.5, 1]], [[0.3, 0], [0, -1]])

EXAMPLE_44 = HermitianFisherHartwig(((1, 0.3), (-1, 0.4)))


@pytest.fixture(params=sorted(_kernels.BACKENDS))
def backend(request):
    return _kernels.BACKENDS[request.param]


FIXTURE_SYMBOLS = {
    "fh(2,2)": PureFisherHartwig(2, 2),
    "fh(1,1)": PureFisherHartwig(1, 1),
    "fh(0.3,0.7)": PureFisherHartwig(0.3, 0.7),
    "fh(1.5,2)": PureFisherHartwig(1.5, 2),
    "fh(0.5,1.5)": PureFisherHartwig(0.5, 1.5),
    "two-zero": EXAMPLE_44,
    "tame": tame_symbol(),
    "laurent": LaurentPolynomial({0: 2, 1: 0.5 + 0.2j, -1: 0.3, 2: 0.1j}),
}

CORNER_SETS = {"antidiagonal": ANTIDIAGONAL, "identity": IDENTITY, "ones": ONES, "block2": BLOCK2}
