"""Random matrix samplers and a Hermitian eigenvalue wrapper.

Every draw is driven by an explicit :class:`RngState`.  A state is the pair
``(seed, stream)``; the stream is the sample index in Monte Carlo runs, so
results do not depend on how samples are spread over threads.
"""
from dataclasses import dataclass

import numpy as np

from .complexmath import NumericalError

__all__ = [
    "ConvergenceError",
    "RngState",
    "SpectralSample",
    "sample_gue",
    "sample_ginibre",
    "build_product",
    "hermitian_eigenvalues",
    "sample_spectrum",
]

_UINT64 = 2 ** 64


class ConvergenceError(NumericalError):
    """The eigenvalue solver did not converge."""


@dataclass(frozen=True)
class RngState:
    """Counter-based random state ``(seed, stream)``, both unsigned 64-bit."""

    seed: int
    stream: int = 0

    def __post_init__(self):
        for name in ("seed", "stream"):
            value = getattr(self, name)
            if not 0 <= int(value) < _UINT64:
                raise ValueError(f"{name} must be an unsigned 64-bit integer, got {value}")

    def generator(self):
        """A fresh Philox generator for this substream."""
        seq = np.random.SeedSequence(int(self.seed), spawn_key=(int(self.stream),))
        return np.random.Generator(np.random.Philox(seq))

    def child(self, stream):
        return RngState(self.seed, stream)


def _complex_normal(gen, shape):
    """Entries with independent standard normal real and imaginary parts."""
    return gen.standard_normal(shape) + 1j * gen.standard_normal(shape)


def sample_gue(n, rng):
    """GUE matrix with density proportional to ``exp(-tr H^2 / (2n))``.

    Diagonal entries have variance ``n``; real and imaginary parts of the
    off-diagonal entries have variance ``n/2`` each.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    a = _complex_normal(rng.generator(), (n, n))
    return (a + a.conj().T) * (np.sqrt(n) / 2)


def sample_ginibre(n, rng, nu=0):
    """``n x (n + nu)`` complex Ginibre matrix with ``E|g|^2 = 1``."""
    if n < 1 or nu < 0:
        raise ValueError(f"need n >= 1 and nu >= 0, got n={n}, nu={nu}")
    return _complex_normal(rng.generator(), (n, n + nu)) / np.sqrt(2)


def build_product(g, h, x, n=None):
    """``W = G (H - n x I) G^*``, symmetrised as ``(W + W^*)/2``."""
    g = np.asarray(g)
    h = np.asarray(h)
    if n is None:
        n = h.shape[0]
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ValueError("H must be square")
    if g.ndim != 2 or g.shape[1] != h.shape[0]:
        raise ValueError(f"dimension mismatch: G is {g.shape}, H is {h.shape}")
    shifted = h - (n * x) * np.eye(h.shape[0])
    w = g @ shifted @ g.conj().T
    return (w + w.conj().T) / 2


def hermitian_eigenvalues(m):
    """Ascending eigenvalues of a Hermitian matrix (LAPACK ``heevd``)."""
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("expected a square matrix")
    try:
        vals = np.linalg.eigvalsh(m)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"eigenvalue solver failed: {exc}") from exc
    if not np.all(np.isfinite(vals)):
        raise ConvergenceError("eigenvalue solver returned non-finite values")
    return vals


@dataclass(frozen=True)
class SpectralSample:
    """Eigenvalues of one sampled matrix."""

    eigenvalues: np.ndarray
    n: int
    x: float
    ensemble: str
    seed_info: tuple

    def __post_init__(self):
        if self.ensemble not in ("gue", "ginibre-squared", "product"):
            raise ValueError(f"unknown ensemble {self.ensemble!r}")
        ev = self.eigenvalues
        if len(ev) != self.n or np.any(np.diff(ev) < 0) or not np.all(np.isfinite(ev)):
            raise ValueError("eigenvalues must be n finite values in ascending order")


def sample_spectrum(ensemble, n, rng, x=0.0, nu=0):
    """Draw one matrix of ``ensemble`` and return its spectrum.

    ``gue`` gives the eigenvalues of ``H``, ``ginibre-squared`` the squared
    singular values of ``G`` and ``product`` the eigenvalues of
    ``G (H - n x) G^*``.  ``G`` and ``H`` of a product use substreams
    ``2*stream`` and ``2*stream + 1``.
    """
    if ensemble == "gue":
        ev = hermitian_eigenvalues(sample_gue(n, rng))
    elif ensemble == "ginibre-squared":
        g = sample_ginibre(n, rng, nu)
        ev = hermitian_eigenvalues(g @ g.conj().T)
    elif ensemble == "product":
        if nu:
            raise ValueError("the product ensemble is implemented for square G (nu = 0)")
        g = sample_ginibre(n, RngState(rng.seed, (2 * rng.stream) % _UINT64))
        h = sample_gue(n, RngState(rng.seed, (2 * rng.stream + 1) % _UINT64))
        ev = hermitian_eigenvalues(build_product(g, h, x, n))
    else:
        raise ValueError(f"unknown ensemble {ensemble!r}")
    return SpectralSample(ev, n, float(x), ensemble, (rng.seed, rng.stream))
