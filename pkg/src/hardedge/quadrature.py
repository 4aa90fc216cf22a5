"""Deterministic quadrature: Gauss-Legendre panels, circle trapezoid, tilted rays.

Integrands are vectorised: they receive a 1-d array of nodes and return an
array whose first axis runs over the nodes (extra trailing axes are
integrated component-wise).  All sums are taken in a fixed order, so results
are bit-reproducible.
"""
from dataclasses import dataclass, field
from functools import lru_cache
import math

import numpy as np

from .complexmath import NumericalError

__all__ = [
    "QuadratureError",
    "TruncationError",
    "QuadratureRule",
    "gauss_legendre",
    "panel_rule",
    "graded_edges",
    "circle_rule",
    "line_rule",
    "integrate_interval",
    "integrate_circle",
    "integrate_tilted_rays",
    "default_s_max",
    "DEFAULT_TILT",
    "DEFAULT_CIRCLE_NODES",
]

DEFAULT_TILT = math.pi / 4
DEFAULT_CIRCLE_NODES = 512


class QuadratureError(NumericalError):
    """Adaptive refinement did not reach the requested tolerance."""


class TruncationError(QuadratureError):
    """Integrand still too large where an infinite contour was cut off."""


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and weights of a fixed rule; ``sum(weights * f(nodes))`` is the integral."""

    kind: str
    nodes: np.ndarray
    weights: np.ndarray
    tolerance: float = float("nan")
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.kind not in ("gauss-legendre-panels", "circle-trapezoid",
                             "real-line-truncated", "tilted-rays"):
            raise ValueError(f"unknown rule kind {self.kind!r}")
        if np.shape(self.nodes) != np.shape(self.weights):
            raise ValueError("nodes and weights differ in shape")

    def __len__(self):
        return len(self.nodes)

    def apply(self, values):
        """Contract ``values`` (first axis over nodes) against the weights."""
        values = np.asarray(values)
        return np.tensordot(self.weights, values, axes=(0, 0))


@lru_cache(maxsize=None)
def gauss_legendre(order):
    """Gauss-Legendre nodes and weights on ``[-1, 1]`` (cached, read-only)."""
    x, w = np.polynomial.legendre.leggauss(order)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def panel_rule(edges, order=16, tolerance=float("nan")):
    """Composite Gauss-Legendre rule on consecutive panels ``edges[i]..edges[i+1]``."""
    edges = np.asarray(edges, dtype=float)
    if edges.ndim != 1 or len(edges) < 2 or np.any(np.diff(edges) <= 0):
        raise ValueError("panel edges must be strictly increasing")
    x, w = gauss_legendre(order)
    lo, hi = edges[:-1, None], edges[1:, None]
    nodes = 0.5 * (hi - lo) * x + 0.5 * (hi + lo)
    weights = 0.5 * (hi - lo) * w
    return QuadratureRule("gauss-legendre-panels", nodes.ravel(), weights.ravel(), tolerance)


def graded_edges(a, b, h_max, h_min=None):
    """Panel edges on ``[a, b]`` (``0 <= a < b``), geometric from ``h_min`` near ``a``.

    Panels double in width starting from ``h_min`` until they reach ``h_max``,
    then stay uniform.  Used where an integrand is near-singular at ``a``.
    """
    if h_min is None or h_min >= h_max:
        count = max(1, int(math.ceil((b - a) / h_max)))
        return np.linspace(a, b, count + 1)
    edges = [a]
    h = h_min
    while edges[-1] + h < b and h < h_max:
        edges.append(edges[-1] + h)
        h *= 2
    rest = b - edges[-1]
    count = max(1, int(math.ceil(rest / h_max)))
    edges.extend(np.linspace(edges[-1], b, count + 1)[1:])
    return np.asarray(edges)


def circle_rule(m=DEFAULT_CIRCLE_NODES, radius=1.0, offset=0.5):
    """Trapezoid rule for ``oint dz/(2 pi i) f(z)`` on ``|z| = radius``, counter-clockwise.

    Nodes sit at angles ``2 pi (k + offset) / m``; the default half-step offset
    keeps them off the real axis.
    """
    if m < 16:
        raise ValueError("circle rule needs at least 16 nodes")
    phi = 2 * np.pi * (np.arange(m) + offset) / m
    z = radius * np.exp(1j * phi)
    return QuadratureRule("circle-trapezoid", z, z / m, meta={"radius": radius, "offset": offset})


def line_rule(half_width, shift=0.0, h_max=0.05, h_min=None, order=16):
    """Rule for ``int dz f(z)`` along ``z = t + i*shift``, ``|t| <= half_width``.

    With ``h_min`` the panels are graded towards ``t = 0`` from both sides.
    """
    right = graded_edges(0.0, half_width, h_max, h_min)
    edges = np.concatenate([-right[::-1], right[1:]])
    base = panel_rule(edges, order)
    return QuadratureRule("real-line-truncated", base.nodes + 1j * shift, base.weights.astype(complex),
                          meta={"half_width": half_width, "shift": shift})


def _estimate(f, lo, hi, order):
    """One Gauss-Legendre estimate per interval, batched into a single call of f."""
    x, w = gauss_legendre(order)
    half = 0.5 * (hi - lo)
    nodes = (half[:, None] * x + (0.5 * (hi + lo))[:, None]).ravel()
    vals = np.asarray(f(nodes), dtype=complex)
    vals = vals.reshape((len(lo), order) + vals.shape[1:])
    wts = half[:, None] * w
    return np.einsum("ij,ij...->i...", wts, vals)


def integrate_interval(f, a, b, tol=1e-10, order=15, max_levels=20, breakpoints=(), max_intervals=4096):
    """Adaptive Gauss-Legendre integral of a vectorised ``f`` over ``[a, b]``.

    Every interval is compared against the sum of its two halves; it is
    accepted when the difference is below its share of ``tol`` (proportional
    to its length).  Intervals start from ``a``, ``b`` and any interior
    ``breakpoints``.

    Raises
    ------
    QuadratureError
        After ``max_levels`` bisections, or when more than ``max_intervals``
        intervals are pending at once, without convergence.
    """
    if not a < b:
        raise ValueError(f"need a < b, got [{a}, {b}]")
    cuts = sorted({float(a), float(b), *(float(p) for p in breakpoints if a < p < b)})
    lo = np.asarray(cuts[:-1])
    hi = np.asarray(cuts[1:])
    total_length = b - a
    est = _estimate(f, lo, hi, order)
    total = np.zeros(est.shape[1:], dtype=complex)
    for _ in range(max_levels + 1):
        mid = 0.5 * (lo + hi)
        halves = _estimate(f, np.concatenate([lo, mid]), np.concatenate([mid, hi]), order)
        k = len(lo)
        refined = halves[:k] + halves[k:]
        err = np.abs(refined - est)
        if err.ndim > 1:
            err = err.reshape(k, -1).max(axis=1)
        done = err <= tol * (hi - lo) / total_length
        # accepted intervals are added in index order
        for i in np.flatnonzero(done):
            total = total + refined[i]
        if np.all(done):
            return total[()] if total.ndim == 0 else total
        keep = ~done
        if 2 * np.count_nonzero(keep) > max_intervals:
            raise QuadratureError(
                f"more than {max_intervals} unresolved panels on [{a}, {b}] "
                f"(worst near t={lo[keep][np.argmax(err[keep])]:.6g})")
        lo = np.concatenate([lo[keep], mid[keep]])
        hi = np.concatenate([mid[keep], hi[keep]])
        est = np.concatenate([halves[:k][keep], halves[k:][keep]])
        order_idx = np.argsort(lo, kind="stable")
        lo, hi, est = lo[order_idx], hi[order_idx], est[order_idx]
    raise QuadratureError(
        f"no convergence after {max_levels} refinement levels on [{a}, {b}] "
        f"(worst panel near t={lo[0]:.6g})")


def integrate_circle(f, m=DEFAULT_CIRCLE_NODES, radius=1.0):
    """``oint_{|z|=radius} dz/(2 pi i) f(z)`` by the trapezoid rule (spectrally accurate)."""
    rule = circle_rule(m, radius)
    out = rule.apply(np.asarray(f(rule.nodes), dtype=complex))
    return out[()] if np.ndim(out) == 0 else out


def default_s_max(tol):
    """Cut-off of the tilted rays, generous for Gamma-function decay."""
    return 40.0 + 10.0 * abs(math.log(tol))


def integrate_tilted_rays(g, theta=DEFAULT_TILT, s_max=None, tol=1e-10):
    """Integral over real ``s`` of ``g(s)``, where ``g`` lives on the tilted rays.

    ``g`` receives the real ray parameter ``s`` and must already contain the
    contour point ``exp(i sign(s) theta) s`` and its Jacobian
    ``exp(i sign(s) theta)``.  The rays are cut at ``|s| = s_max``.

    Raises
    ------
    TruncationError
        When ``|g(+-s_max)|`` exceeds ``tol``.
    """
    if not 0 < theta < math.pi / 2:
        raise ValueError(f"tilt angle must lie in (0, pi/2), got {theta}")
    if s_max is None:
        s_max = default_s_max(tol)
    ends = np.abs(np.asarray(g(np.array([-s_max, s_max])), dtype=complex))
    if np.max(ends) > tol:
        raise TruncationError(f"tilted-ray tail {np.max(ends):.3g} exceeds tolerance {tol:.3g} at s_max={s_max}")
    # geometric breakpoints resolve integrands concentrated at small |s|
    marks = [p for p in (0.5, 1, 2, 4, 8, 16, 32, 64, 128) if p < s_max]
    right = integrate_interval(g, 0.0, s_max, tol / 2, breakpoints=marks)
    left = integrate_interval(g, -s_max, 0.0, tol / 2, breakpoints=[-p for p in marks])
    return left + right
