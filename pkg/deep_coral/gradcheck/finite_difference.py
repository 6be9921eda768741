"""Central finite differences and gradient comparison."""

import logging
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray

logger = logging.getLogger(__name__)

DEFAULT_EPS = 1e-5


def central_difference(
    func: Callable[[NDArray[np.float64]], float],
    x0: ArrayLike,
    eps: float = DEFAULT_EPS,
) -> NDArray[np.float64]:
    """Gradient of scalar `func` at `x0`, one centered difference per entry.

    `func` receives an array shaped like `x0`; the result has the same shape.
    """

    base = np.array(x0, dtype=np.float64)
    flat = base.reshape(-1)
    grad = np.zeros_like(flat)
    logger.debug("finite difference over %d entries, eps=%g", flat.size, eps)

    for j in range(flat.size):
        x = flat.copy()
        x[j] = flat[j] + eps
        f_plus = func(x.reshape(base.shape))
        x[j] = flat[j] - eps
        f_minus = func(x.reshape(base.shape))
        grad[j] = (f_plus - f_minus) / (2 * eps)

    return grad.reshape(base.shape)


@dataclass(slots=True, frozen=True, eq=False)
class GradientError:
    """Per-entry errors between an analytic and a numeric gradient (flattened).

    `numeric` keeps `|n|`, the magnitude the relative tolerance scales with.
    """

    abs_diff: NDArray[np.float64]
    numeric: NDArray[np.float64]
    magnitude: NDArray[np.float64]

    @property
    def abs_err(self) -> float:
        return float(np.max(self.abs_diff, initial=0.0))

    @property
    def rel_err(self) -> float:
        """Largest entry error relative to that entry's own magnitude."""
        rel = np.divide(
            self.abs_diff,
            self.magnitude,
            out=np.zeros_like(self.abs_diff),
            where=self.magnitude > 0,
        )
        return float(np.max(rel, initial=0.0))

    def within(self, *, atol: float, rtol: float) -> bool:
        """Every entry satisfies `|a - n| <= max(atol, rtol * |n|)`."""
        bound = np.maximum(atol, rtol * self.numeric)
        return bool(np.all(self.abs_diff <= bound))


def compare_gradients(analytic: ArrayLike, numeric: ArrayLike) -> GradientError:
    a = np.asarray(analytic, dtype=np.float64).ravel()
    n = np.asarray(numeric, dtype=np.float64).ravel()
    if np.shape(analytic) != np.shape(numeric):
        raise ValueError(
            f"gradient shapes differ: {np.shape(analytic)} vs {np.shape(numeric)}"
        )
    return GradientError(
        abs_diff=np.abs(a - n),
        numeric=np.abs(n),
        magnitude=np.maximum(np.abs(a), np.abs(n)),
    )


__all__ = ["DEFAULT_EPS", "GradientError", "central_difference", "compare_gradients"]
