"""Monte Carlo harness: sample spectra, bin them, compare with analytic curves.

Densities are per matrix: ``counts / (samples * bin_width)``, except for the
macroscopic GUE bulk, which is per eigenvalue (divided by ``n`` as well) to
match the unit-mass semicircle.  The analytic
curve is averaged over each bin (``analytic_mode="bin-average"``) so that the
logarithmic peak of the hard-edge density at ``a = 0`` does not bias the
comparison; ``"center"`` samples it at bin centres instead.
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, replace
import math

import numpy as np

from . import kernels
from .polya import ginibre
from .quadrature import panel_rule
from .rmt import RngState, sample_spectrum

__all__ = [
    "EmptyWindowError",
    "ExperimentConfig",
    "WindowSample",
    "HistogramResult",
    "collect_window",
    "histogram",
    "run_hard_edge_experiment",
    "run_ginibre_hard_edge",
    "run_gue_bulk",
    "run_experiment",
    "convergence_sweep",
    "analytic_curve",
    "rebin",
]

ENSEMBLES = ("product", "gue-bulk", "ginibre-hard-edge")
_SAMPLED = {"product": "product", "gue-bulk": "gue", "ginibre-hard-edge": "ginibre-squared"}


class EmptyWindowError(ValueError):
    """No eigenvalue of any sample fell inside the window."""


@dataclass(frozen=True)
class ExperimentConfig:
    """One Monte Carlo run.

    ``reference`` selects the analytic curve of the product ensemble:
    ``"limit"`` (large-``n`` density) or ``"finite"`` (finite-``n`` kernel
    diagonal, ``n <= 64``).
    """

    ensemble: str
    n: int
    samples: int
    x: float = 0.0
    window: tuple = (-12.0, 12.0)
    bins: int = 24
    seed: int = 0
    parallelism: int = 1
    nu: int = 0
    reference: str = "limit"
    analytic_mode: str = "bin-average"

    def __post_init__(self):
        if self.ensemble not in ENSEMBLES:
            raise ValueError(f"unknown ensemble {self.ensemble!r}; expected one of {ENSEMBLES}")
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if self.samples < 1:
            raise ValueError(f"samples must be >= 1, got {self.samples}")
        lo, hi = self.window
        if not lo < hi:
            raise ValueError(f"window must satisfy lo < hi, got {self.window}")
        if self.bins < 10:
            raise ValueError(f"bins must be >= 10, got {self.bins}")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        if self.parallelism < 1:
            raise ValueError("parallelism must be >= 1")
        if self.reference not in ("limit", "finite"):
            raise ValueError(f"unknown reference {self.reference!r}")
        if self.analytic_mode not in ("bin-average", "center"):
            raise ValueError(f"unknown analytic mode {self.analytic_mode!r}")
        object.__setattr__(self, "window", (float(lo), float(hi)))

    @property
    def edges(self):
        return np.linspace(self.window[0], self.window[1], self.bins + 1)

    def to_dict(self):
        out = asdict(self)
        out["window"] = list(self.window)
        return out


@dataclass(frozen=True)
class WindowSample:
    """Scaled eigenvalues inside ``window`` pooled over ``samples`` matrices."""

    values: np.ndarray
    samples: int
    window: tuple
    key: tuple = field(default=(), compare=False)


@dataclass(frozen=True)
class HistogramResult:
    bin_edges: np.ndarray
    density: np.ndarray
    analytic: np.ndarray
    l1_distance: float
    sup_distance: float
    config: ExperimentConfig
    counts: np.ndarray

    @property
    def bin_width(self):
        return float(self.bin_edges[1] - self.bin_edges[0])

    @property
    def mass(self):
        """Mean number of eigenvalues per matrix inside the window (fraction for gue-bulk)."""
        return float(np.sum(self.density) * self.bin_width)


def _scale(ensemble, n, ev):
    if ensemble == "gue-bulk":
        return ev / n
    if ensemble == "ginibre-hard-edge":
        return ev * n
    return ev


def _chunk(cfg, start, stop):
    kind = _SAMPLED[cfg.ensemble]
    lo, hi = cfg.window
    kept = []
    for index in range(start, stop):
        spec = sample_spectrum(kind, cfg.n, RngState(cfg.seed, index), cfg.x, cfg.nu)
        ev = _scale(cfg.ensemble, cfg.n, spec.eigenvalues)
        kept.append(ev[(ev >= lo) & (ev <= hi)])
    return np.concatenate(kept) if kept else np.empty(0)


def collect_window(cfg, chunk_size=256):
    """Sample ``cfg.samples`` matrices and keep the scaled eigenvalues in the window.

    Sample ``i`` always uses stream ``i``; chunks are reassembled in index
    order, so the output does not depend on ``cfg.parallelism``.
    """
    starts = list(range(0, cfg.samples, chunk_size))
    bounds = [(s, min(s + chunk_size, cfg.samples)) for s in starts]
    if cfg.parallelism == 1:
        parts = [_chunk(cfg, a, b) for a, b in bounds]
    else:
        with ThreadPoolExecutor(max_workers=cfg.parallelism) as pool:
            parts = list(pool.map(lambda ab: _chunk(cfg, *ab), bounds))
    values = np.concatenate(parts) if parts else np.empty(0)
    key = (cfg.ensemble, cfg.n, cfg.x, cfg.nu, cfg.seed, cfg.samples)
    return WindowSample(values, cfg.samples, cfg.window, key)


def _bin_average(fn, edges, order=12, singular=(0.0,), levels=24):
    """Mean of ``fn`` over each bin by composite Gauss-Legendre.

    Bins touching a point of ``singular`` are split there and graded
    geometrically towards it (``levels`` halvings), which resolves an
    integrable logarithmic peak; the innermost sliver is dropped.
    """
    out = np.empty(len(edges) - 1)
    for i, (lo, hi) in enumerate(zip(edges[:-1], edges[1:])):
        cuts = {lo, hi}
        for p in singular:
            if lo <= p <= hi:
                width = hi - lo
                cuts.add(p)
                cuts.update(q for k in range(1, levels + 1) for q in (p - width * 2.0 ** -k, p + width * 2.0 ** -k)
                            if lo < q < hi)
        cuts = sorted(cuts)
        rule = panel_rule(cuts, order)
        vals = np.array([fn(a) for a in rule.nodes])
        out[i] = rule.apply(vals) / (hi - lo)
    return out


def _semicircle_cdf(a):
    a = np.clip(a, -2.0, 2.0)
    return (a * np.sqrt(4 - a * a) / 2 + 2 * np.arcsin(a / 2)) / (2 * math.pi) + 0.5


def analytic_curve(cfg, edges=None):
    """Analytic density on the bins of ``cfg`` (bin averages or centre values)."""
    edges = cfg.edges if edges is None else edges
    centers = (edges[:-1] + edges[1:]) / 2
    if cfg.ensemble == "gue-bulk":
        if cfg.analytic_mode == "center":
            return np.sqrt(np.clip(4 - centers ** 2, 0, None)) / (2 * math.pi)
        return np.diff(_semicircle_cdf(edges)) / np.diff(edges)
    if cfg.ensemble == "ginibre-hard-edge":
        spec = ginibre(nu=cfg.nu)

        def fn(y):
            return 0.0 if y <= 0 else float(kernels.polya_kernel_hard_edge(spec, y, y, tol=1e-9))
    elif cfg.reference == "finite":
        spec = ginibre(n=cfg.n)

        def fn(a):
            return 0.0 if a == 0 else kernels.product_kernel_finite(spec, cfg.x, a, a)
    else:
        if cfg.nu:
            raise ValueError("the analytic product density is implemented for nu = 0")

        def fn(a):
            return 0.0 if a == 0 else kernels.ginibre_product_density(cfg.x, a)
    if cfg.analytic_mode == "center":
        return np.array([fn(c) for c in centers])
    return _bin_average(fn, edges)


def histogram(cfg, sample=None, analytic=None):
    """Bin ``sample`` (collected if not given) and compare with the analytic curve."""
    if sample is None:
        sample = collect_window(cfg)
    if sample.samples != cfg.samples:
        raise ValueError("sample size does not match the configuration")
    if sample.window[0] > cfg.window[0] or sample.window[1] < cfg.window[1]:
        raise ValueError("sample window does not cover the configured window")
    edges = cfg.edges
    counts, _ = np.histogram(sample.values, edges)
    if counts.sum() == 0:
        raise EmptyWindowError(f"no eigenvalue in window {cfg.window} over {cfg.samples} samples")
    width = edges[1] - edges[0]
    per = cfg.samples * (cfg.n if cfg.ensemble == "gue-bulk" else 1)
    density = counts / (per * width)
    if analytic is None:
        analytic = analytic_curve(cfg, edges)
    diff = np.abs(density - analytic)
    return HistogramResult(edges, density, np.asarray(analytic, dtype=float), float(np.sum(diff) * width),
                           float(np.max(diff)), cfg, counts)


def _expect(cfg, ensemble):
    if cfg.ensemble != ensemble:
        raise ValueError(f"expected ensemble {ensemble!r}, got {cfg.ensemble!r}")


def run_hard_edge_experiment(cfg, sample=None):
    """Eigenvalues of ``G (H - n x) G^*`` near the origin, unscaled."""
    _expect(cfg, "product")
    return histogram(cfg, sample)


def run_ginibre_hard_edge(cfg, sample=None):
    """Squared singular values of ``G`` times ``n`` against the Bessel-kernel diagonal."""
    _expect(cfg, "ginibre-hard-edge")
    return histogram(cfg, sample)


def run_gue_bulk(cfg, sample=None):
    """GUE eigenvalues divided by ``n`` against the semicircle."""
    _expect(cfg, "gue-bulk")
    return histogram(cfg, sample)


def run_experiment(cfg, sample=None):
    runner = {"product": run_hard_edge_experiment, "gue-bulk": run_gue_bulk,
              "ginibre-hard-edge": run_ginibre_hard_edge}[cfg.ensemble]
    return runner(cfg, sample)


def convergence_sweep(x, ns, samples, seed=0, window=(-12.0, 12.0), bins=96, parallelism=1, samples_cache=None):
    """``(n, l1)`` for each ``n`` against the fixed large-``n`` density.

    ``samples_cache`` may map ``n`` to a precomputed :class:`WindowSample`.
    """
    ns = list(ns)
    if any(b <= a for a, b in zip(ns, ns[1:])):
        raise ValueError("ns must be strictly increasing")
    trace = []
    for n in ns:
        cfg = ExperimentConfig("product", n, samples, x, window, bins, seed, parallelism)
        sample = None if samples_cache is None else samples_cache.get(n)
        trace.append((n, run_hard_edge_experiment(cfg, sample).l1_distance))
    return trace


def rebin(cfg, bins):
    """Same run with a different bin count."""
    return replace(cfg, bins=bins)
