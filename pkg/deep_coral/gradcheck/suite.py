"""Gradient and estimator verification suites.

Each check draws random instances from one seeded generator and compares an
analytic quantity against an independent numerical oracle:

- covariance: one-pass estimator vs the two-pass mean-centered formula
- coral: CORAL gradients vs central differences of the CORAL loss
- class-loss: softmax cross-entropy gradient vs central differences
- network: parameter gradients of class_loss + lambda * coral_loss through a
  two-layer network vs central differences, for several lambdas
"""

import logging
from collections.abc import Callable, Iterator
from dataclasses import dataclass, field
from typing import Final

import numpy as np
from numpy.typing import NDArray

from deep_coral.core.covariance import covariance
from deep_coral.core.loss import coral_loss, coral_loss_and_grad
from deep_coral.diagnostics.errors import ConfigError
from deep_coral.gradcheck.finite_difference import (
    GradientError,
    central_difference,
    compare_gradients,
)
from deep_coral.net.layers import LayerKind
from deep_coral.net.loss import class_loss_and_grad
from deep_coral.net.network import (
    Network,
    forward,
    grads_vector,
    init_network,
    parameter_vector,
    with_parameter_vector,
)
from deep_coral.trainer.step import joint_gradients, joint_loss

logger = logging.getLogger(__name__)

MAX_N: Final = 16
MAX_D: Final = 8
NETWORK_MAX_BATCH: Final = 8
NETWORK_LAMBDAS: Final = (0.0, 0.5, 10.0)

CORAL_ATOL: Final = 1e-7
CORAL_RTOL: Final = 1e-5
COVARIANCE_ATOL: Final = 1e-10
NETWORK_RTOL: Final = 1e-4

# Pre-activations closer than this to zero make finite differences straddle
# the ReLU kink; such draws are resampled.
_KINK_MARGIN: Final = 1e-3
_MAX_RESAMPLES: Final = 100


@dataclass(slots=True, frozen=True)
class CheckResult:
    name: str
    cases: int
    max_abs_err: float
    max_rel_err: float
    passed: bool


@dataclass(slots=True, frozen=True)
class GradcheckReport:
    seed: int
    results: tuple[CheckResult, ...] = field(default=())

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def lines(self) -> list[str]:
        out = [f"gradcheck seed={self.seed}"]
        for r in self.results:
            status = "PASS" if r.passed else "FAIL"
            out.append(
                f"{r.name}: cases={r.cases} max_abs_err={r.max_abs_err:.3e} "
                f"max_rel_err={r.max_rel_err:.3e} {status}"
            )
        return out


def _summarize(
    name: str, errors: list[GradientError], ok: Callable[[GradientError], bool]
) -> CheckResult:
    result = CheckResult(
        name=name,
        cases=len(errors),
        max_abs_err=max((e.abs_err for e in errors), default=0.0),
        max_rel_err=max((e.rel_err for e in errors), default=0.0),
        passed=all(ok(e) for e in errors),
    )
    logger.info(
        "%s: %d cases, max rel err %.3e, %s",
        name,
        result.cases,
        result.max_rel_err,
        "pass" if result.passed else "FAIL",
    )
    return result


def _shifted_normal(rng: np.random.Generator, n: int, d: int) -> NDArray[np.float64]:
    scale = rng.uniform(0.5, 2.0, size=d)
    shift = rng.normal(size=d)
    return rng.standard_normal((n, d)) * scale + shift


def check_covariance(
    rng: np.random.Generator, *, cases: int, max_n: int, max_d: int
) -> CheckResult:
    errors: list[GradientError] = []
    for _ in range(cases):
        n = int(rng.integers(2, max_n + 1))
        d = int(rng.integers(1, max_d + 1))
        data = _shifted_normal(rng, n, d)
        centered = data - data.mean(axis=0)
        oracle = centered.T @ centered / (n - 1)
        errors.append(compare_gradients(covariance(data).matrix, oracle))
    return _summarize("covariance", errors, lambda e: e.abs_err <= COVARIANCE_ATOL)


def check_coral(
    rng: np.random.Generator,
    *,
    cases: int,
    max_n: int,
    max_d: int,
    corrupt: float = 1.0,
) -> CheckResult:
    errors: list[GradientError] = []
    for _ in range(cases):
        n_s = int(rng.integers(2, max_n + 1))
        n_t = int(rng.integers(2, max_n + 1))
        d = int(rng.integers(1, max_d + 1))
        d_s = _shifted_normal(rng, n_s, d)
        d_t = _shifted_normal(rng, n_t, d)

        _, grad = coral_loss_and_grad(d_s, d_t)
        numeric_s = central_difference(lambda x: coral_loss(x, d_t), d_s)
        numeric_t = central_difference(lambda x: coral_loss(d_s, x), d_t)
        analytic = np.concatenate([grad.grad_source.ravel(), grad.grad_target.ravel()])
        numeric = np.concatenate([numeric_s.ravel(), numeric_t.ravel()])
        errors.append(compare_gradients(corrupt * analytic, numeric))
    return _summarize(
        "coral", errors, lambda e: e.within(atol=CORAL_ATOL, rtol=CORAL_RTOL)
    )


def check_class_loss(
    rng: np.random.Generator, *, cases: int, max_n: int, max_d: int
) -> CheckResult:
    errors: list[GradientError] = []
    for _ in range(cases):
        n = int(rng.integers(1, max_n + 1))
        k = int(rng.integers(2, max_d + 1))
        logits = 2.0 * rng.standard_normal((n, k))
        labels = rng.integers(0, k, size=n)
        _, grad = class_loss_and_grad(logits, labels)
        numeric = central_difference(lambda z: class_loss_and_grad(z, labels)[0], logits)
        errors.append(compare_gradients(grad, numeric))
    return _summarize(
        "class-loss", errors, lambda e: e.within(atol=CORAL_ATOL, rtol=CORAL_RTOL)
    )


def _objective(
    net: Network,
    xs: NDArray[np.float64],
    ys: NDArray[np.int64],
    xt: NDArray[np.float64],
    lambdas: tuple[float, ...],
) -> float:
    source_pass = forward(net, xs)
    target_pass = forward(net, xt)
    class_loss, _ = class_loss_and_grad(source_pass.logits, ys)
    corals = [coral_loss(source_pass.taps[t], target_pass.taps[t]) for t in net.coral_taps]
    return joint_loss(class_loss, corals, lambdas)


def _min_preactivation(net: Network, *batches: NDArray[np.float64]) -> float:
    relu_inputs = [
        i for i, layer in enumerate(net.layers) if layer.kind is LayerKind.RELU
    ]
    smallest = np.inf
    for batch in batches:
        fp = forward(net, batch)
        for i in relu_inputs:
            smallest = min(smallest, float(np.min(np.abs(fp.inputs[i]))))
    return smallest


def _network_cases(
    rng: np.random.Generator, cases: int, max_d: int
) -> Iterator[tuple[Network, NDArray[np.float64], NDArray[np.int64], NDArray[np.float64]]]:
    for _ in range(cases):
        for _attempt in range(_MAX_RESAMPLES):
            d = int(rng.integers(2, max_d + 1))
            h = int(rng.integers(2, max_d + 1))
            k = int(rng.integers(2, max_d + 1))
            n = int(rng.integers(2, NETWORK_MAX_BATCH + 1))
            net = init_network(
                [d, h, k],
                head_init_std=0.5,
                seed=int(rng.integers(0, 2**31)),
                coral_taps=(1, 2),
            )
            xs = _shifted_normal(rng, n, d)
            xt = _shifted_normal(rng, n, d)
            ys = rng.integers(0, k, size=n)
            if _min_preactivation(net, xs, xt) >= _KINK_MARGIN:
                yield net, xs, ys, xt
                break
        else:
            raise RuntimeError("could not draw a network case away from ReLU kinks")


def check_network(
    rng: np.random.Generator, *, cases: int, max_d: int, corrupt: float = 1.0
) -> list[CheckResult]:
    drawn = list(_network_cases(rng, cases, max_d))
    results: list[CheckResult] = []
    for lam in NETWORK_LAMBDAS:
        errors: list[GradientError] = []
        for net, xs, ys, xt in drawn:
            lambdas = (lam,) * len(net.coral_taps)
            ev = joint_gradients(net, xs, ys, xt, lambdas)
            analytic = grads_vector(net, ev.grads)
            numeric = central_difference(
                lambda theta, net=net, xs=xs, ys=ys, xt=xt, lambdas=lambdas: _objective(
                    with_parameter_vector(net, theta), xs, ys, xt, lambdas
                ),
                parameter_vector(net),
            )
            errors.append(compare_gradients(corrupt * analytic, numeric))
        results.append(
            _summarize(
                f"network lambda={lam:g}",
                errors,
                lambda e: e.within(atol=CORAL_ATOL, rtol=NETWORK_RTOL),
            )
        )
    return results


def run_gradcheck(
    seed: int = 0,
    *,
    max_n: int = MAX_N,
    max_d: int = MAX_D,
    cases: int = 50,
    corrupt: float = 1.0,
) -> GradcheckReport:
    """Run every suite. `corrupt` scales the analytic gradients (1.0 = untouched)."""

    if not 2 <= max_n <= MAX_N:
        raise ConfigError(f"max_n must be in [2, {MAX_N}], got {max_n}")
    if not 2 <= max_d <= MAX_D:
        raise ConfigError(f"max_d must be in [2, {MAX_D}], got {max_d}")
    if cases < 1:
        raise ConfigError(f"cases must be >= 1, got {cases}")

    rng = np.random.default_rng(seed)
    results = [
        check_covariance(rng, cases=2 * cases, max_n=max_n, max_d=max_d),
        check_coral(rng, cases=cases, max_n=max_n, max_d=max_d, corrupt=corrupt),
        check_class_loss(rng, cases=cases, max_n=max_n, max_d=max_d),
        *check_network(rng, cases=max(1, cases // 5), max_d=max_d, corrupt=corrupt),
    ]
    return GradcheckReport(seed=seed, results=tuple(results))


__all__ = [
    "CheckResult",
    "GradcheckReport",
    "MAX_D",
    "MAX_N",
    "check_class_loss",
    "check_coral",
    "check_covariance",
    "check_network",
    "run_gradcheck",
]
