"""Hard-edge correlation kernels for products of Polya-type random matrices
with a shifted GUE matrix, plus Monte Carlo checks against them."""
__version__ = "0.1.0"

from .complexmath import DomainError, NumericalError, PoleError  # noqa: E402
from .kernels import PrecisionLossError  # noqa: E402
from .polya import MellinSpec, PolyaTransforms, custom, ginibre  # noqa: E402
from .rmt import ConvergenceError, RngState  # noqa: E402

__all__ = [
    "__version__",
    "NumericalError",
    "DomainError",
    "PoleError",
    "PrecisionLossError",
    "ConvergenceError",
    "MellinSpec",
    "PolyaTransforms",
    "ginibre",
    "custom",
    "RngState",
]
