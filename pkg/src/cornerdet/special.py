"""Gamma-function helpers.

Every Gamma quotient in the package is evaluated as the exponential of a sum
of log-Gamma values, so arguments around 10^3 never overflow.
"""
import numpy as np
from scipy.special import loggamma

from .errors import PoleError


def is_pole(z):
    """True if Gamma has a pole at ``z`` (a nonpositive integer)."""
    z = complex(z)
    return z.imag == 0.0 and z.real <= 0.0 and z.real == np.floor(z.real)


def log_gamma(z):
    """Principal-branch log Gamma(z) for complex ``z``.

    The branch is the analytic continuation from the positive real axis with
    a cut along the negative real axis, so ``exp`` of it is always Gamma(z).

    Raises:
        PoleError: if ``z`` is a nonpositive integer.
    """
    if is_pole(z):
        raise PoleError(f"Gamma has a pole at z = {complex(z).real:g}")
    return complex(loggamma(complex(z)))


def gamma_ratio(numer, denom):
    """Return prod Gamma(numer) / prod Gamma(denom).

    A pole in the denominator makes the quotient exactly zero (1/Gamma vanishes
    there); a pole in the numerator raises :class:`PoleError`.
    """
    for z in numer:
        if is_pole(z):
            raise PoleError(f"Gamma pole in numerator at z = {complex(z).real:g}")
    if any(is_pole(z) for z in denom):
        return 0j
    s = sum(log_gamma(z) for z in numer) - sum(log_gamma(z) for z in denom)
    return complex(np.exp(s))


def log_gamma_array(z):
    """Vectorised log Gamma on a complex array; poles give ``inf``/``nan`` entries."""
    return loggamma(np.asarray(z, dtype=np.complex128))
