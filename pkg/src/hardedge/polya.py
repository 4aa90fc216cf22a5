"""Transforms of multiplicative Polya weights.

A Polya weight ``omega`` on the positive half-line enters only through its
Mellin transform ``M(s) = int_0^oo omega(l) l^(s-1) dl``.  From it we build

* ``chi(z)``     -- the polynomial ``sum_{j<n} z^j / M(j+1)``;
* ``jomega(z)``  -- the entire function ``sum_j (i z)^j / (j! M(j+1))``;
* ``komega(z)``  -- ``int_0^oo omega(l) exp(-i z / l) dl / l``, cut along ``i R_+``;
* ``jtilde(y)``  -- the jump of ``komega`` across that cut, ``y > 0``;
* ``wn_weight``  -- the derivative-operator weight of the finite-``n`` ensemble;
* ``qn_weight``  -- ``d/dl (l w_n)``, the weight of the finite-``n`` kernel;
* ``pn_polynomial`` -- its polynomial partner.

Everything is evaluated from the Mellin data by series or by integrals along
the tilted rays ``s -> exp(i sign(s) theta) s``.  For the Ginibre family
(``omega(l) = l^nu exp(-l)``, ``M(s) = Gamma(s + nu)``) Bessel and Laguerre
closed forms are available and used by default; pass ``closed_forms=False`` to force the
generic route.
"""
from dataclasses import dataclass, field, replace
import math
import warnings

import numpy as np
from scipy import special

from .complexmath import DomainError, bessel_i, bessel_j, bessel_k
from .quadrature import DEFAULT_TILT, integrate_interval, integrate_tilted_rays, default_s_max, TruncationError

__all__ = [
    "MellinSpec",
    "PolyaTransforms",
    "ConditionReport",
    "ginibre",
    "custom",
    "chi",
    "jomega",
    "komega",
    "jtilde",
    "qn_weight",
    "wn_weight",
    "pn_polynomial",
    "check_conditions",
    "jomega_bound",
]

ALL_CLOSED_FORMS = frozenset({"jomega", "komega", "jtilde", "qn", "pn"})


@dataclass(frozen=True)
class MellinSpec:
    """Mellin data of a Polya weight.

    ``n`` is the matrix size, or ``None`` for the ``n -> oo`` limit.  For the
    ``custom`` family, ``log_mellin`` maps complex ``s`` (array) to
    ``log M(s)`` on any branch; only ``exp`` of it is ever used.
    """

    family: str
    nu: int = 0
    n: int | None = None
    tilt: float = DEFAULT_TILT
    log_mellin: object = field(default=None, compare=False, repr=False)
    closed_forms: frozenset = frozenset()
    label: str = ""

    def __post_init__(self):
        if self.family not in ("ginibre", "custom"):
            raise ValueError(f"unknown Polya family {self.family!r}")
        if self.family == "ginibre" and (int(self.nu) != self.nu or self.nu < 0):
            raise ValueError(f"Ginibre charge must be a non-negative integer, got {self.nu}")
        if self.family == "custom" and self.log_mellin is None:
            raise ValueError("custom Mellin data needs a log_mellin callable")
        if self.n is not None and self.n < 1:
            raise ValueError(f"n must be >= 1 or None, got {self.n}")
        if not 0 < self.tilt < math.pi / 2:
            raise ValueError(f"tilt must lie in (0, pi/2), got {self.tilt}")
        if not set(self.closed_forms) <= ALL_CLOSED_FORMS:
            raise ValueError(f"unknown closed-form markers {set(self.closed_forms) - ALL_CLOSED_FORMS}")
        if self.closed_forms and self.family != "ginibre":
            raise ValueError("closed forms are only available for the Ginibre family")

    @property
    def is_limit(self):
        return self.n is None

    def log_mellin_at(self, s):
        s = np.asarray(s, dtype=complex)
        if self.family == "ginibre":
            return special.loggamma(s + self.nu)
        return np.asarray(self.log_mellin(s), dtype=complex)

    def mellin_at(self, s):
        return np.exp(self.log_mellin_at(s))

    def uses(self, name):
        return name in self.closed_forms

    def with_n(self, n):
        return replace(self, n=n)

    def with_tilt(self, theta):
        return replace(self, tilt=theta)

    def without_closed_forms(self):
        return replace(self, closed_forms=frozenset())

    def describe(self):
        if self.label:
            return self.label
        size = "inf" if self.n is None else str(self.n)
        if self.family == "ginibre":
            return f"ginibre(nu={self.nu}, n={size})"
        return f"custom(n={size})"


def ginibre(nu=0, n=None, tilt=DEFAULT_TILT, closed_forms=True):
    """Mellin data of the complex Ginibre ensemble with charge ``nu``."""
    forms = ALL_CLOSED_FORMS if closed_forms else frozenset()
    return MellinSpec("ginibre", nu=nu, n=n, tilt=tilt, closed_forms=forms)


def custom(log_mellin=None, mellin=None, n=None, tilt=DEFAULT_TILT, label=""):
    """Mellin data from a user-supplied evaluator (give one of the two callables)."""
    if (log_mellin is None) == (mellin is None):
        raise ValueError("give exactly one of log_mellin and mellin")
    if log_mellin is None:
        def log_mellin(s, _m=mellin):
            with np.errstate(divide="ignore"):  # underflow to 0 in the tails is harmless
                return np.log(np.asarray(_m(s), dtype=complex))
    return MellinSpec("custom", n=n, tilt=tilt, log_mellin=log_mellin, label=label)


def _ray_point(s, theta):
    """Contour point ``w = i exp(i sign(s) theta) s`` and Jacobian ``exp(i sign(s) theta)``."""
    jac = np.exp(1j * np.sign(s) * theta)
    return 1j * jac * s, jac


@dataclass
class PolyaTransforms:
    """Evaluator bundle for one :class:`MellinSpec`.

    ``series_terms`` caps the series of ``jomega`` in the limit ``n = oo``;
    by default it is chosen from the argument so that the first dropped
    term is below ``quad_tol / 10``.
    """

    spec: MellinSpec
    series_terms: int | None = None
    quad_tol: float = 1e-11

    # -- polynomial / series objects -------------------------------------------------

    def log_series_coefficients(self, count):
        """``log(1 / (j! M(j+1)))`` for ``j = 0..count-1`` (real for real Mellin data)."""
        j = np.arange(count)
        return -special.gammaln(j + 1) - self.spec.log_mellin_at(j + 1.0).real

    def chi(self, z):
        if self.spec.n is None:
            raise DomainError("chi is a polynomial of degree n-1 and needs finite n")
        j = np.arange(self.spec.n)
        coeffs = np.exp(-self.spec.log_mellin_at(j + 1.0).real)
        return _horner(coeffs, np.asarray(z, dtype=complex))

    def _jomega_terms(self, zmax):
        if self.spec.n is not None:
            return self.spec.n
        if self.series_terms is not None:
            return self.series_terms
        # grow until past the peak and below tolerance
        count = 32
        while True:
            logc = self.log_series_coefficients(count)
            logt = logc + np.arange(count) * math.log(max(zmax, 1e-300))
            peak = int(np.argmax(logt))
            tail = logt[-1]
            if peak < count - 1 and tail < math.log(self.quad_tol / 10) and logt[-1] < logt[-2]:
                return count
            if count > 20000:
                raise DomainError(f"jomega series does not settle for |z| = {zmax:g}")
            count *= 2

    def jomega(self, z):
        zc = np.asarray(z, dtype=complex)
        if self.spec.n is None and self.spec.uses("jomega"):
            return _bessel_entire_i(self.spec.nu, 1j * zc)
        zmax = float(np.max(np.abs(zc))) if zc.size else 0.0
        count = self._jomega_terms(zmax)
        coeffs = np.exp(self.log_series_coefficients(count))
        return _horner(coeffs, 1j * zc)

    def pn_polynomial(self, lam):
        """``p_{n-1}(l) = sum_j C(n-1, j) (-l)^j / M(j+1)``."""
        n = self._finite_n("pn_polynomial")
        if self.spec.uses("pn"):
            nu = self.spec.nu
            scale = math.exp(special.gammaln(n) - special.gammaln(n + nu))
            return scale * special.eval_genlaguerre(n - 1, nu, np.asarray(lam, dtype=float)) + 0j
        j = np.arange(n)
        logc = (special.gammaln(n) - special.gammaln(j + 1) - special.gammaln(n - j)
                - self.spec.log_mellin_at(j + 1.0).real)
        return _horner(np.exp(logc), -np.asarray(lam, dtype=complex))

    # -- Mellin-Barnes integrals -----------------------------------------------------

    def komega(self, z):
        zc = np.asarray(z, dtype=complex)
        on_cut = (zc.real == 0) & (zc.imag >= 0)
        if np.any(on_cut):
            raise DomainError(f"komega is cut along the closed positive imaginary axis; got {zc[on_cut].ravel()[0]}")
        if self.spec.uses("komega"):
            root = np.sqrt(1j * zc)
            return 2 * root ** self.spec.nu * bessel_k(self.spec.nu, 2 * root)
        flat = zc.ravel()
        out = np.empty(flat.shape, dtype=complex)
        lower = flat.imag < 0
        if np.any(lower):
            out[lower] = self._komega_straight(flat[lower])
        if np.any(~lower):
            out[~lower] = self._komega_tilted(flat[~lower], self.spec.tilt)
        return out.reshape(zc.shape)[()] if zc.ndim == 0 else out.reshape(zc.shape)

    def komega_tilted(self, z, theta=None):
        """Tilted-ray evaluation regardless of the half-plane (for consistency checks)."""
        zc = np.atleast_1d(np.asarray(z, dtype=complex))
        out = self._komega_tilted(zc, self.spec.tilt if theta is None else theta)
        return out[0] if np.ndim(z) == 0 else out

    def _komega_straight(self, z):
        logiz = np.log(1j * z)
        spec = self.spec
        tol = self._scaled_tol(z)

        def integrand(s):
            w = 1j * s[:, None]
            logv = spec.log_mellin_at(1 + w) + special.loggamma(1 + w) + (-w - 1) * logiz[None, :]
            return np.exp(logv) / (2 * np.pi)

        s_max = default_s_max(tol)
        tail = np.max(np.abs(integrand(np.array([-s_max, s_max]))))
        if tail > tol:
            raise TruncationError(f"komega integrand tail {tail:.3g} above tolerance")
        marks = [p for q in (1, 2, 4, 8, 16, 32, 64, 128) for p in (q, -q) if q < s_max]
        return integrate_interval(integrand, -s_max, s_max, tol, breakpoints=marks)

    def _komega_tilted(self, z, theta):
        logiz = np.log(1j * z)
        spec = self.spec

        def integrand(s):
            w, jac = _ray_point(s, theta)
            w = w[:, None]
            logv = spec.log_mellin_at(1 + w) + special.loggamma(1 + w) + (-w - 1) * logiz[None, :]
            return jac[:, None] * np.exp(logv) / (2 * np.pi)

        return integrate_tilted_rays(integrand, theta, tol=self._scaled_tol(z))

    def _scaled_tol(self, args):
        """Absolute tolerance for integrands of size ``1/|arg|`` near the origin."""
        smallest = float(np.min(np.abs(args))) if np.size(args) else 1.0
        return self.quad_tol * max(1.0, 1.0 / max(smallest, 1e-300))

    def jtilde(self, y, theta=None):
        yr = np.asarray(y, dtype=float)
        if np.any(yr <= 0):
            raise DomainError("jtilde is defined for y > 0")
        if theta is None and self.spec.uses("jtilde"):
            root = np.sqrt(yr)
            return (root ** self.spec.nu * bessel_j(self.spec.nu, 2 * root)).real
        theta = self.spec.tilt if theta is None else theta
        logy = np.log(yr.ravel())
        spec = self.spec

        def integrand(s):
            w, jac = _ray_point(s, theta)
            w = w[:, None]
            logv = spec.log_mellin_at(1 + w) - special.loggamma(-w) + (-1 - w) * logy[None, :]
            return jac[:, None] * np.exp(logv) / (2 * np.pi)

        out = integrate_tilted_rays(integrand, theta, tol=self._scaled_tol(yr)).real
        return out[0] if yr.ndim == 0 else out.reshape(yr.shape)

    def wn_weight(self, lam, theta=None):
        """Operator weight ``w_n = prod_{l=1}^{n-1} (1 + l^-1 d/dl l) omega``.

        Mellin symbol ``Gamma(n-w) M(1+w) / (Gamma(n) Gamma(1-w))``; so
        ``w_1 = omega``.  Ginibre closed form ``L^(nu+1)_{n-1}(l) l^nu e^-l``.
        """
        n = self._finite_n("wn_weight")
        lr = self._positive(lam, "wn_weight")
        if theta is None and self.spec.uses("qn"):
            nu = self.spec.nu
            return special.eval_genlaguerre(n - 1, nu + 1, lr) * lr ** nu * np.exp(-lr)
        return self._weight_integral(lr, n, 1.0, theta)

    def qn_weight(self, lam, theta=None):
        """Kernel weight ``q_n = d/dl (l w_n)`` as a tilted-ray integral.

        Mellin symbol ``Gamma(n-w) M(1+w) / (Gamma(n) Gamma(-w))``; hence
        ``int l^j q_n dl = 0`` for ``j < n``.  The ray integral is well
        conditioned only while ``n * lam`` is of order one; the Ginibre
        closed form ``n L^(nu)_n(l) l^nu e^-l`` has no such limit.
        """
        n = self._finite_n("qn_weight")
        lr = self._positive(lam, "qn_weight")
        if theta is None and self.spec.uses("qn"):
            nu = self.spec.nu
            return n * special.eval_genlaguerre(n, nu, lr) * lr ** nu * np.exp(-lr)
        return self._weight_integral(lr, n, 0.0, theta)

    @staticmethod
    def _positive(lam, what):
        lr = np.asarray(lam, dtype=float)
        if np.any(lr <= 0):
            raise DomainError(f"{what} is defined for lambda > 0")
        return lr

    def _weight_integral(self, lr, n, offset, theta):
        """Ray integral of ``Gamma(n-w) M(1+w) / (Gamma(n) Gamma(offset-w)) l^(-1-w)``."""
        theta = self.spec.tilt if theta is None else theta
        logl = np.log(lr.ravel())
        spec = self.spec
        lg_n = special.gammaln(n)

        def integrand(s):
            w, jac = _ray_point(s, theta)
            w = w[:, None]
            logv = (special.loggamma(n - w) - lg_n + spec.log_mellin_at(1 + w)
                    - special.loggamma(offset - w) + (-1 - w) * logl[None, :])
            return jac[:, None] * np.exp(logv) / (2 * np.pi)

        out = integrate_tilted_rays(integrand, theta, tol=self._scaled_tol(lr)).real
        return out[0] if lr.ndim == 0 else out.reshape(lr.shape)

    def _finite_n(self, what):
        if self.spec.n is None:
            raise DomainError(f"{what} needs a finite matrix size n")
        return self.spec.n


def _horner(coeffs, z):
    out = np.zeros(np.shape(z), dtype=complex)
    for c in coeffs[::-1]:
        out = out * z + c
    return out[()] if out.ndim == 0 else out


def _bessel_entire_i(nu, u):
    """``sum_j u^j / (j! Gamma(j+nu+1)) = u^(-nu/2) I_nu(2 sqrt(u))``, entire in ``u``."""
    root = np.sqrt(u)
    if nu == 0:
        return bessel_i(0, 2 * root)
    safe = np.where(root == 0, 1.0, root)
    val = bessel_i(nu, 2 * safe) / safe ** nu
    return np.where(root == 0, 1.0 / math.factorial(nu), val)


# -- module-level conveniences ---------------------------------------------------------

def chi(spec, z):
    return PolyaTransforms(spec).chi(z)


def jomega(spec, z):
    return PolyaTransforms(spec).jomega(z)


def komega(spec, z):
    return PolyaTransforms(spec).komega(z)


def jtilde(spec, y):
    return PolyaTransforms(spec).jtilde(y)


def qn_weight(spec, lam):
    return PolyaTransforms(spec).qn_weight(lam)


def wn_weight(spec, lam):
    return PolyaTransforms(spec).wn_weight(lam)


def pn_polynomial(spec, lam):
    return PolyaTransforms(spec).pn_polynomial(lam)


def jomega_bound(c_tilde, z):
    """Exponential envelope ``C e^|z|`` that dominates ``|jomega(z)|``."""
    return c_tilde * np.exp(np.abs(np.asarray(z)))


@dataclass(frozen=True)
class ConditionReport:
    """Numerical check of the two admissibility conditions on a grid."""

    c_tilde: float
    c_theta: dict
    condition1_ok: bool
    condition2_ok: bool


def check_conditions(spec, n_values=(1, 2, 4, 8, 16, 32, 64), thetas=(math.pi / 2, 3 * math.pi / 4, 0.9 * math.pi),
                     radii=np.linspace(0.0, 40.0, 401), warn=True):
    """Estimate ``C~ = max 1/M(j)`` over ``j = 1..n`` and ``C(theta) = sup |M(1 + r e^{i theta})|``.

    The conditions are sufficient, not necessary, so a violation only warns.
    For ``n = None`` the ``s`` range is capped at the largest entry of
    ``n_values``.
    """
    sizes = [spec.n] if spec.n is not None else list(n_values)
    worst = 0.0
    for n in sizes:
        s = np.arange(1, n + 1, dtype=float)
        worst = max(worst, float(np.max(np.exp(-spec.log_mellin_at(s).real))))
    c_theta = {}
    cond2 = True
    for theta in thetas:
        z = 1 + radii * np.exp(1j * theta)
        mags = np.abs(spec.mellin_at(z))
        c_theta[float(theta)] = float(np.max(mags))
        # growth towards the end of the grid signals an unbounded supremum
        if not np.all(np.isfinite(mags)) or mags[-1] > 2 * np.max(mags[: len(mags) // 2]):
            cond2 = False
    cond1 = math.isfinite(worst)
    if warn and not (cond1 and cond2):
        warnings.warn(f"{spec.describe()}: admissibility conditions look violated "
                      f"(C~={worst:.3g}, C(theta)={c_theta})", RuntimeWarning, stacklevel=2)
    return ConditionReport(worst, c_theta, cond1, cond2)
