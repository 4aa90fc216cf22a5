"""Special functions on the complex plane.

Thin, vectorised wrappers around :mod:`scipy.special` with the branch and
domain conventions used throughout the package:

* principal branch everywhere (``arg`` in ``(-pi, pi]``, cuts of ``sqrt`` and
  ``log`` along the negative real axis);
* integer Bessel orders only;
* ``K_nu`` is restricted to the open right half-plane.

Complex scalars are plain Python ``complex`` / numpy ``complex128`` values.
"""
import numpy as np
from scipy import special

__all__ = [
    "NumericalError",
    "DomainError",
    "PoleError",
    "cgamma_ln",
    "crgamma",
    "bessel_j",
    "bessel_i",
    "bessel_k",
    "principal_power",
]


class NumericalError(ArithmeticError):
    """Base class for numerical failures raised by this package."""


class DomainError(NumericalError, ValueError):
    """Argument outside the domain where a function is defined or implemented."""


class PoleError(DomainError):
    """Argument sits on a pole."""


def _as_complex(z):
    return np.asarray(z, dtype=complex)


def _unwrap(out, like):
    return out[()] if np.ndim(like) == 0 else out


def _check_order(nu):
    if int(nu) != nu or nu < 0:
        raise DomainError(f"Bessel order must be a non-negative integer, got {nu!r}")
    return int(nu)


def cgamma_ln(z):
    """Principal branch of ``log Gamma(z)``.

    Raises
    ------
    PoleError
        If any ``z`` is a non-positive integer.
    """
    zc = _as_complex(z)
    on_pole = (zc.imag == 0) & (zc.real <= 0) & (zc.real == np.round(zc.real))
    if np.any(on_pole):
        raise PoleError(f"log-Gamma has a pole at {zc[on_pole].ravel()[0].real:g}")
    return _unwrap(special.loggamma(zc), z)


def crgamma(z):
    """Reciprocal Gamma function ``1/Gamma(z)``; entire, zero at the poles of Gamma."""
    zc = _as_complex(z)
    return _unwrap(special.rgamma(zc), z)


def bessel_j(nu, z):
    """Bessel function of the first kind ``J_nu(z)`` for integer ``nu >= 0``."""
    nu = _check_order(nu)
    zc = _as_complex(z)
    out = special.jv(nu, zc)
    if np.all(zc.imag == 0):
        out = out.real + 0j
    return _unwrap(out, z)


def bessel_i(nu, z):
    """Modified Bessel function of the first kind ``I_nu(z)`` for integer ``nu >= 0``."""
    nu = _check_order(nu)
    zc = _as_complex(z)
    return _unwrap(special.iv(nu, zc), z)


def bessel_k(nu, z):
    """Modified Bessel function of the second kind ``K_nu(z)``, ``Re z > 0``.

    Raises
    ------
    DomainError
        If any argument has a non-positive real part.
    """
    nu = _check_order(nu)
    zc = _as_complex(z)
    if np.any(zc.real <= 0):
        bad = zc[zc.real <= 0].ravel()[0]
        raise DomainError(f"bessel_k needs Re(z) > 0, got {bad}")
    return _unwrap(special.kv(nu, zc), z)


def principal_power(base, exponent):
    """``base**exponent`` computed as ``exp(exponent * Log(base))`` (principal Log)."""
    b = _as_complex(base)
    return np.exp(np.asarray(exponent, dtype=complex) * np.log(b))
