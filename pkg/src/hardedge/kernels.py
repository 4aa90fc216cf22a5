"""Correlation kernels and densities near the hard edge.

Conventions
-----------
* GUE matrices have density proportional to ``exp(-tr H^2 / (2n))``, so the
  macroscopic spectrum is ``n * [-2, 2]`` and ``x`` is a macroscopic position.
* The finite-``n`` GUE kernel is evaluated in the microscopic variable
  ``a = lambda - n x`` and is normalised as a polynomial in its first entry.
* Product kernels are in the variables ``a`` of ``G (H - n x) G^*``, which
  are of order one at the hard edge and are never rescaled.

Double contour integrals
------------------------
Both finite-``n`` contour kernels have the shape::

    oint dz'/(2 pi i) int dz/(2 pi) f(z') g(z) (1 - (z/z')^n) / (z' - z)

with ``f`` entire.  Expanding ``(1 - (z/z')^n)/(z' - z) = sum_{k<n} z^k z'^(-k-1)``
turns it into ``sum_k A_k B_k`` where ``A_k`` is the ``k``-th Taylor
coefficient of ``f`` and ``B_k = int z^k g(z) dz / (2 pi)``.  The Taylor
coefficients are computed exactly from a three-term recurrence (or, for
comparison, by the trapezoid rule on ``|z'| = 1``).  The ``z`` line is
placed through the saddle point ``z_-`` whenever the cut of ``g`` permits.
"""
from dataclasses import dataclass, field
import math

import numpy as np
from scipy import special

from .complexmath import DomainError, NumericalError, bessel_i, bessel_j, bessel_k
from .polya import MellinSpec, PolyaTransforms
from .quadrature import circle_rule, integrate_interval, line_rule

__all__ = [
    "PrecisionLossError",
    "GueMacro",
    "KernelGrid",
    "gue_macro",
    "gue_kernel_finite",
    "polya_kernel_finite",
    "polya_kernel_hard_edge",
    "product_kernel_finite",
    "product_kernel_limit",
    "ginibre_product_density",
    "kpoint_correlation",
    "evaluate_grid",
    "PRODUCT_N_MAX",
]

PRODUCT_N_MAX = 64
_EPS = np.finfo(float).eps


class PrecisionLossError(NumericalError):
    """Cancellation in a contour sum exceeds the requested tolerance."""


@dataclass(frozen=True)
class GueMacro:
    """Macroscopic GUE data at position ``x``."""

    x: float
    green: complex
    density: float
    saddle_plus: complex
    saddle_minus: complex
    radius: float


def gue_macro(x):
    """Green function, semicircle density and saddle points at ``x``.

    Outside the support the branch with ``G(x) ~ 1/x`` is taken.
    """
    x = float(x)
    if abs(x) <= 2:
        root = math.sqrt(max(0.0, 1 - x * x / 4))
        green = complex(x / 2, -root)
        density = root / math.pi
    else:
        green = complex(x / 2 - math.copysign(math.sqrt(x * x / 4 - 1), x), 0.0)
        density = 0.0
    z_minus = -1j * green
    z_plus = -1 / z_minus
    return GueMacro(x, green, density, z_plus, z_minus, abs(z_minus))


# -- finite-n double contour integrals -------------------------------------------------

def _gaussian_taylor(n, x, count):
    """Taylor coefficients of ``exp(n z^2/2 + i n x z)``: ``(m+1) h_{m+1} = i n x h_m + n h_{m-1}``."""
    h = np.zeros(count, dtype=complex)
    h[0] = 1.0
    if count > 1:
        h[1] = 1j * n * x
    for m in range(1, count - 1):
        h[m + 1] = (1j * n * x * h[m] + n * h[m - 1]) / (m + 1)
    return h


def _circle_coefficients(n, x, series, method, m):
    """``A_k`` for ``k < n`` and a rounding scale for each."""
    if method == "taylor":
        h = _gaussian_taylor(n, x, n)
        coeffs = np.array([np.dot(series[: k + 1][::-1], h[: k + 1]) for k in range(n)])
        scale = np.array([np.dot(np.abs(series[: k + 1][::-1]), np.abs(h[: k + 1])) for k in range(n)])
        return coeffs, scale
    if method == "circle":
        rule = circle_rule(m)
        z = rule.nodes
        vals = np.exp(n * z * z / 2 + 1j * n * x * z) * _horner(series, z)
        coeffs = np.array([np.mean(z ** (-k) * vals) for k in range(n)])
        return coeffs, np.full(n, np.max(np.abs(vals)))
    raise ValueError(f"unknown method {method!r}")


def _horner(coeffs, z):
    out = np.zeros(np.shape(z), dtype=complex)
    for c in coeffs[::-1]:
        out = out * z + c
    return out


def _line_moments(n, x, line_fn, eta, graded, h_max):
    """``B_k = int z^k g(z) dz/(2 pi)`` on ``z = t + i eta`` and ``sum |z^k g w|``."""
    macro = gue_macro(x)
    half_width = max(4.0, math.sqrt(90.0 / n)) * max(1.0, abs(macro.saddle_plus)) + abs(eta)
    h_min = abs(eta) / 4 if graded else None
    rule = line_rule(half_width, eta, h_max=h_max, h_min=h_min)
    z = rule.nodes
    gw = np.exp(-n * z * z / 2 - 1j * n * x * z) * line_fn(z) * rule.weights / (2 * np.pi)
    if not np.all(np.isfinite(gw)):
        raise PrecisionLossError("line integrand overflows")
    moments = np.empty(n, dtype=complex)
    scale = np.empty(n)
    power = gw.copy()
    for k in range(n):
        moments[k] = power.sum()
        scale[k] = np.abs(power).sum()
        power *= z
    return moments, scale


def _double_contour(n, x, series, line_fn, eta, tol, method, m, graded, h_max):
    coeffs, a_scale = _circle_coefficients(n, x, series, method, m)
    moments, b_scale = _line_moments(n, x, line_fn, eta, graded, h_max)
    value = np.dot(coeffs, moments)
    bound = 4 * _EPS * float(np.dot(a_scale, b_scale))
    if not np.isfinite(value) or not bound <= tol:
        raise PrecisionLossError(
            f"cancellation bound {bound:.3g} exceeds tolerance {tol:.3g} (n={n}, x={x})")
    return value, bound


def _oscillation_step(n, x, a):
    return min(0.05, 1.0 / (n * abs(x) + abs(a) + 1.0))


def gue_kernel_finite(n, a1, a2, x=0.0, tol=1e-6, method="taylor", m=512):
    """Finite-``n`` GUE kernel at ``(n x + a1, n x + a2)``.

    Parameters
    ----------
    n : int
        Matrix size.
    a1, a2 : float
        Microscopic offsets from ``n x``.
    x : float
        Macroscopic position.
    tol : float
        Maximal admissible rounding bound of the contour sum.
    method : {"taylor", "circle"}
        How the ``z'`` coefficients are obtained; ``"circle"`` uses the
        ``m``-node trapezoid rule and loses about ``e^{n/2}`` ulps.

    Raises
    ------
    PrecisionLossError
        If the rounding bound exceeds ``tol``.
    """
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    j = np.arange(n)
    series = np.exp(-special.gammaln(j + 1)) * (1j * a1) ** j
    eta = gue_macro(x).saddle_minus.imag

    def line_fn(z):
        return np.exp(-1j * a2 * z)

    value, _ = _double_contour(n, x, series, line_fn, eta, tol, method, m, False, _oscillation_step(n, x, a2))
    return float(value.real)


def _require_finite(spec, what):
    if not isinstance(spec, MellinSpec):
        raise TypeError("expected a MellinSpec")
    if spec.n is None:
        raise DomainError(f"{what} needs finite n")
    return spec.n


def _require_limit(spec, what):
    if not isinstance(spec, MellinSpec):
        raise TypeError("expected a MellinSpec")
    if spec.n is not None:
        raise DomainError(f"{what} needs the n = oo Mellin data")


def product_kernel_finite(spec, x, a1, a2, tol=1e-6, method="taylor", m=512):
    """Finite-``n`` kernel of ``G (H - n x) G^*`` for a Polya ensemble ``G``.

    Jω is paired with the circle variable, ``Jω(a1 z')``, and ``Kω(a2 z)``
    with the line.  The line is ``Im z = Im z_-`` when that keeps ``a2 z``
    away from the cut of ``Kω`` by at least ``1/n``, otherwise
    ``Im z = -sign(a2)/n``.

    Raises
    ------
    DomainError
        For ``n > 64`` or vanishing ``a1``, ``a2``.
    PrecisionLossError
        If the rounding bound of the contour sum exceeds ``tol``.
    """
    n = _require_finite(spec, "product_kernel_finite")
    if n > PRODUCT_N_MAX:
        raise DomainError(f"product_kernel_finite supports n <= {PRODUCT_N_MAX}, got {n}")
    if a1 == 0 or a2 == 0:
        raise DomainError("product kernel needs a1 != 0 and a2 != 0")
    transforms = PolyaTransforms(spec)
    j = np.arange(n)
    series = np.exp(transforms.log_series_coefficients(n)) * (1j * a1) ** j
    sign = math.copysign(1.0, a2)
    eta = -sign / n
    saddle = gue_macro(x).saddle_minus.imag
    if -sign * saddle >= 1.0 / n:
        eta = saddle

    def line_fn(z):
        return transforms.komega(a2 * z)

    step = _oscillation_step(n, x, a2)
    value, _ = _double_contour(n, x, series, line_fn, eta, tol, method, m, True, step)
    return float(value.real)


# -- Polya kernels ---------------------------------------------------------------------

def polya_kernel_finite(spec, lam1, lam2, tol=1e-10):
    """``K_n(l1, l2) = int_0^1 p_{n-1}(l1 t) q_n(l2 t) dt``.

    Without a closed form for ``q_n`` the ray integral requires
    ``0 < lam2 < 1``.
    """
    _require_finite(spec, "polya_kernel_finite")
    transforms = PolyaTransforms(spec)
    l1 = np.asarray(lam1, dtype=float)
    l2 = np.asarray(lam2, dtype=float)
    if np.any(l1 <= 0) or np.any(l2 <= 0):
        raise DomainError("polya_kernel_finite needs positive arguments")
    if not spec.uses("qn") and np.any(l2 >= 1):
        raise DomainError("lam2 must lie in (0, 1) for the ray representation of q_n")
    l1b, l2b = np.broadcast_arrays(l1, l2)

    def integrand(t):
        tt = t[:, None]
        return transforms.pn_polynomial(l1b.ravel() * tt) * transforms.qn_weight(l2b.ravel() * tt)

    out = integrate_interval(integrand, 0.0, 1.0, tol).real
    return out.reshape(l1b.shape)[()] if l1b.ndim == 0 else out.reshape(l1b.shape)


def _hard_edge(transforms, y1, y2, tol):
    """``int_0^1 Jω(i y1 t) J~ω(y2 t) dt`` for real ``y1`` and ``y2 > 0``."""
    y1b, y2b = np.broadcast_arrays(np.asarray(y1, dtype=float), np.asarray(y2, dtype=float))

    def integrand(t):
        tt = t[:, None]
        return transforms.jomega(1j * y1b.ravel() * tt) * transforms.jtilde(y2b.ravel() * tt)

    out = integrate_interval(integrand, 0.0, 1.0, tol).real
    return out.reshape(y1b.shape)[()] if y1b.ndim == 0 else out.reshape(y1b.shape)


def polya_kernel_hard_edge(spec, y1, y2, tol=1e-11):
    """Hard-edge limit ``int_0^1 Jω(i y1 t) J~ω(y2 t) dt`` of ``K_n(y1/n, y2/n)/n``."""
    _require_limit(spec, "polya_kernel_hard_edge")
    if np.any(np.asarray(y1) <= 0) or np.any(np.asarray(y2) <= 0):
        raise DomainError("hard-edge kernel needs positive arguments")
    return _hard_edge(PolyaTransforms(spec), y1, y2, tol)


def product_kernel_limit(spec, x, a1, a2, tol=1e-10):
    """Large-``n`` hard-edge kernel of ``G (H - n x) G^*``.

    Sum of a Polya hard-edge term, present when ``-Re G(x) a2 > 0``, and a
    bulk term weighted by the semicircle density at ``x``.
    """
    _require_limit(spec, "product_kernel_limit")
    if a1 == 0 or a2 == 0:
        raise DomainError("product kernel needs a1 != 0 and a2 != 0")
    macro = gue_macro(x)
    re_g = macro.green.real
    if abs(macro.green) == 0:
        raise DomainError(f"G(x) vanishes at x = {x}")
    transforms = PolyaTransforms(spec)
    value = 0.0
    if -re_g * a2 > 0:
        value += abs(re_g) * float(_hard_edge(transforms, -re_g * a1, abs(re_g * a2), tol))
    if macro.density > 0:
        value += macro.density * _bulk_term(transforms, macro, a1, a2, tol)
    return value


def _bulk_term(transforms, macro, a1, a2, tol):
    """``int_{-1}^{1} dt/2 Jω(a1 u) Kω(a2 u)``, ``u = pi rho t - i Re G``.

    ``t = 0`` may carry a jump (the cut of Kω) or a logarithmic singularity,
    so each half is integrated in ``t = +-s^3``.
    """
    width = math.pi * macro.density
    shift = -1j * macro.green.real

    def half(sign):
        def integrand(s):
            u = width * sign * s ** 3 + shift
            return transforms.jomega(a1 * u) * transforms.komega(a2 * u) * 3 * s * s / 2
        return integrate_interval(integrand, 0.0, 1.0, tol / 2)

    total = half(1.0) + half(-1.0)
    return float(total.real)


def ginibre_product_density(x, a, tol=1e-10, imag_tol=1e-8):
    """Hard-edge level density of ``G (H - n x) G^*`` for square Ginibre ``G``.

    Computed directly from Bessel functions (independent of the Polya
    machinery).  The ``I0 K0`` integral is complex-valued pointwise; its
    imaginary part must cancel to ``imag_tol``.
    """
    if a == 0:
        raise DomainError("density needs a != 0")
    abs_re_g = abs(gue_macro(x).green.real)
    value = 0.0
    if -x * a > 0:
        y = abs_re_g * abs(a)

        def bessel_sq(t):
            return bessel_j(0, np.sqrt(4 * y * t)) ** 2

        value += abs_re_g * float(integrate_interval(bessel_sq, 0.0, 1.0, tol).real)
    if abs(x) < 2:
        c = 2 * math.sqrt(4 - x * x) * a

        def half(sign):
            def integrand(s):
                root = np.sqrt(2 * x * a + 1j * c * sign * s ** 3)
                return bessel_i(0, root) * bessel_k(0, root) * 3 * s * s
            return integrate_interval(integrand, 0.0, 1.0, tol / 2)

        total = half(1.0) + half(-1.0)
        if abs(total.imag) > imag_tol:
            raise NumericalError(f"imaginary part {total.imag:.3g} does not cancel at x={x}, a={a}")
        value += math.sqrt(1 - x * x / 4) / math.pi * total.real
    return value


# -- determinants and grids ------------------------------------------------------------

def kpoint_correlation(kernel, points, k=None):
    """``det[K(a_b, a_c)]`` for ``k <= 6`` points."""
    points = list(points)
    if k is None:
        k = len(points)
    if k != len(points):
        raise ValueError(f"k = {k} but {len(points)} points given")
    if not 1 <= k <= 6:
        raise ValueError("k must lie in 1..6")
    mat = np.array([[kernel(p, q) for q in points] for p in points], dtype=float)
    return float(np.linalg.det(mat))


@dataclass(frozen=True)
class KernelGrid:
    """Kernel values ``values[i, j] = K(a1[i], a2[j])`` with metadata."""

    a1: np.ndarray
    a2: np.ndarray
    values: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.values.shape != (len(self.a1), len(self.a2)):
            raise ValueError("kernel grid shape does not match its axes")
        if not np.all(np.isfinite(self.values)):
            raise NumericalError("kernel grid contains non-finite values")

    def diagonal(self):
        return np.diag(self.values)


def evaluate_grid(kernel, a1, a2, **meta):
    """Evaluate ``kernel(p, q)`` on the outer grid, row by row."""
    a1 = np.asarray(a1, dtype=float)
    a2 = np.asarray(a2, dtype=float)
    values = np.empty((len(a1), len(a2)))
    for i, p in enumerate(a1):
        for j, q in enumerate(a2):
            values[i, j] = kernel(p, q)
    return KernelGrid(a1, a2, values, dict(meta))
