"""Independent reference values.

Nothing here calls the package's special-function wrappers; each oracle is a
different algorithm (power series, integral representation, Stirling series,
Christoffel-Darboux sums) so that agreement is meaningful.
"""
import cmath
import math

import numpy as np

from .quadrature import integrate_interval

__all__ = [
    "loggamma_stirling",
    "bessel_j_series",
    "bessel_i_series",
    "bessel_k_integral",
    "bessel_hard_edge_closed_form",
    "laguerre_cd_kernel",
    "hermite_cd_kernel",
    "sine_kernel",
    "semicircle",
]

_STIRLING = (1 / 12, -1 / 360, 1 / 1260, -1 / 1680, 1 / 1188, -691 / 360360, 1 / 156, -3617 / 122400)


def loggamma_stirling(z):
    """``log Gamma(z)`` by upward recurrence to ``Re z >= 20`` and the Stirling series.

    Every ``log(z + k)`` of the recurrence has its cut on the negative real
    axis, so the result is the principal branch for any ``z`` off the poles.
    """
    z = complex(z)
    acc = 0j
    w = z
    while w.real < 20:
        acc += cmath.log(w)
        w += 1
    series = sum(c / w ** (2 * k + 1) for k, c in enumerate(_STIRLING))
    val = (w - 0.5) * cmath.log(w) - w + 0.5 * math.log(2 * math.pi) + series
    return val - acc


def _series(nu, z, sign, tol=1e-17, max_terms=2000):
    z = complex(z)
    half = z / 2
    term = half ** nu / math.factorial(nu)
    total = term
    q = sign * half * half
    for k in range(1, max_terms):
        term = term * q / (k * (k + nu))
        total += term
        if abs(term) <= tol * max(abs(total), 1e-300) and k > abs(z):
            return total
    raise ArithmeticError("series did not converge")


def bessel_j_series(nu, z):
    """``J_nu(z) = sum_k (-1)^k (z/2)^(2k+nu) / (k! (k+nu)!)``; use for ``|z| <= 20``."""
    return _series(nu, z, -1)


def bessel_i_series(nu, z):
    """``I_nu(z) = sum_k (z/2)^(2k+nu) / (k! (k+nu)!)``."""
    return _series(nu, z, 1)


def bessel_k_integral(nu, x, tol=1e-13):
    """``K_nu(x) = int_0^oo exp(-x cosh t) cosh(nu t) dt`` for real ``x > 0``."""
    if x <= 0:
        raise ValueError("integral oracle needs x > 0")
    t_max = math.acosh(max(1.0, (40 + abs(math.log(tol))) / x)) + 5

    def f(t):
        return np.exp(-x * np.cosh(t)) * np.cosh(nu * t)

    marks = [t_max * k / 8 for k in range(1, 8)]
    return float(integrate_interval(f, 0.0, t_max, tol, breakpoints=marks).real)


def bessel_hard_edge_closed_form(y1, y2):
    """``int_0^1 J0(2 sqrt(y1 t)) J0(2 sqrt(y2 t)) dt`` in closed form.

    ``[sqrt(y1) J1(2 sqrt y1) J0(2 sqrt y2) - sqrt(y2) J0(2 sqrt y1) J1(2 sqrt y2)] / (y1 - y2)``
    with the diagonal ``J0(2 sqrt y)^2 + J1(2 sqrt y)^2``.
    """
    r1, r2 = math.sqrt(y1), math.sqrt(y2)
    j01, j11 = bessel_j_series(0, 2 * r1).real, bessel_j_series(1, 2 * r1).real
    if abs(y1 - y2) <= 1e-9 * max(1.0, y1):
        return j01 ** 2 + j11 ** 2
    j02, j12 = bessel_j_series(0, 2 * r2).real, bessel_j_series(1, 2 * r2).real
    return (r1 * j11 * j02 - r2 * j01 * j12) / (y1 - y2)


def _laguerre_table(n, nu, lam):
    """Orthonormal-up-to-weight Laguerre values ``L_k^(nu)(lam) sqrt(k!/(k+nu)!)``, ``k < n``."""
    out = np.zeros(n)
    prev, cur = 0.0, 1.0
    for k in range(n):
        out[k] = cur * math.exp(0.5 * (math.lgamma(k + 1) - math.lgamma(k + nu + 1)))
        nxt = ((2 * k + 1 + nu - lam) * cur - (k + nu) * prev) / (k + 1)
        prev, cur = cur, nxt
    return out


def laguerre_cd_kernel(n, lam1, lam2, nu=0):
    """Ginibre (Laguerre) kernel ``sum_k p_k(l1) p_k(l2) l2^nu e^-l2``, polynomial in ``l1``."""
    a = _laguerre_table(n, nu, lam1)
    b = _laguerre_table(n, nu, lam2)
    return float(np.dot(a, b) * lam2 ** nu * math.exp(-lam2))


def _hermite_table(n, s):
    h = np.zeros(n)
    h[0] = math.exp(-s * s / 4)
    if n > 1:
        h[1] = s * h[0]
    for k in range(1, n - 1):
        h[k + 1] = (s * h[k] - math.sqrt(k) * h[k - 1]) / math.sqrt(k + 1)
    return h


def hermite_cd_kernel(n, u, v):
    """GUE kernel at eigenvalues ``u, v`` (variance-``n`` entries), polynomial in ``u``.

    Symmetric Hermite-function sum times ``exp((u^2 - v^2) / (4 n))``.
    """
    s, t = u / math.sqrt(n), v / math.sqrt(n)
    sym = float(np.dot(_hermite_table(n, s), _hermite_table(n, t))) / math.sqrt(2 * math.pi * n)
    return sym * math.exp((u * u - v * v) / (4 * n))


def sine_kernel(d, density=1 / math.pi):
    """``sin(pi rho d) / (pi d)``, equal to ``rho`` at ``d = 0``."""
    if d == 0:
        return density
    return math.sin(math.pi * density * d) / (math.pi * d)


def semicircle(x):
    return math.sqrt(max(0.0, 4 - x * x)) / (2 * math.pi)
