"""Feed-forward classification network with explicit forward/backward passes.

A network is an ordered tuple of layers: affine layers separated by ReLUs,
ending with the classification head. `coral_taps` are indices into that tuple;
the output of each tapped layer is exposed as a feature matrix for the CORAL
loss. By default the only tap is the last affine layer (the logits).

Networks are immutable. `sgd_step` returns a new network, and every forward
pass records the parameter fingerprint it was computed with so `backward` can
reject stale passes.
"""

import hashlib
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field, replace
from typing import Self

import numpy as np
from numpy.typing import ArrayLike, NDArray

from deep_coral.core.matrix import Matrix, Vector, as_matrix, frozen
from deep_coral.diagnostics.errors import (
    BadArchitectureError,
    DimensionMismatchError,
    StaleForwardError,
)
from deep_coral.net.layers import Layer, LayerKind

DEFAULT_HEAD_INIT_STD = 0.005
DEFAULT_HEAD_LR_MULTIPLIER = 10.0


@dataclass(slots=True, frozen=True, eq=False)
class Network:
    layers: tuple[Layer, ...]
    coral_taps: tuple[int, ...]

    def __post_init__(self) -> None:
        layers = self.layers
        if not layers or layers[-1].kind is not LayerKind.HEAD:
            raise BadArchitectureError("the final layer must be the classification head")
        if any(layer.kind is LayerKind.HEAD for layer in layers[:-1]):
            raise BadArchitectureError("the classification head must be the final layer")

        affine = [layer for layer in layers if layer.kind is LayerKind.AFFINE]
        if not affine:
            raise BadArchitectureError("a network needs at least one affine layer")
        for prev, nxt in zip(affine, affine[1:], strict=False):
            if prev.out_dim != nxt.in_dim:
                raise BadArchitectureError(
                    f"affine dims do not chain: {prev.out_dim} -> {nxt.in_dim}"
                )

        if list(self.coral_taps) != sorted(set(self.coral_taps)):
            raise BadArchitectureError(
                f"coral_taps must be sorted and unique, got {self.coral_taps}"
            )
        head = len(layers) - 1
        for tap in self.coral_taps:
            if not 0 <= tap < head:
                raise BadArchitectureError(
                    f"coral tap {tap} is not a layer index in [0, {head})"
                )

    @property
    def input_dim(self) -> int:
        return self._affine_layers()[0].in_dim

    @property
    def num_classes(self) -> int:
        return self._affine_layers()[-1].out_dim

    @property
    def param_indices(self) -> tuple[int, ...]:
        return tuple(i for i, layer in enumerate(self.layers) if layer.has_params)

    def tap_dim(self, tap: int) -> int:
        """Feature dimension of the output of layer `tap`."""

        dim = self.input_dim
        for layer in self.layers[: tap + 1]:
            if layer.kind is LayerKind.AFFINE:
                dim = layer.out_dim
        return dim

    def layer_dims(self) -> tuple[int, ...]:
        affine = self._affine_layers()
        return (affine[0].in_dim, *(layer.out_dim for layer in affine))

    def with_taps(self, taps: Iterable[int]) -> Self:
        return replace(self, coral_taps=tuple(sorted(set(taps))))

    def with_layers(self, layers: Sequence[Layer]) -> Self:
        return replace(self, layers=tuple(layers))

    def fingerprint(self) -> str:
        """SHA-256 over layer kinds, lr multipliers, parameter bytes and taps."""

        h = hashlib.sha256()
        for layer in self.layers:
            h.update(layer.kind.value.encode())
            h.update(repr(layer.lr_multiplier).encode())
            if layer.weights is not None and layer.bias is not None:
                h.update(np.ascontiguousarray(layer.weights).tobytes())
                h.update(np.ascontiguousarray(layer.bias).tobytes())
        h.update(repr(self.coral_taps).encode())
        return h.hexdigest()

    def _affine_layers(self) -> list[Layer]:
        return [layer for layer in self.layers if layer.kind is LayerKind.AFFINE]


def default_taps(layers: Sequence[Layer]) -> tuple[int, ...]:
    """The last affine layer, i.e. the logits feeding the head."""

    last = max(i for i, layer in enumerate(layers) if layer.kind is LayerKind.AFFINE)
    return (last,)


def init_network(
    layer_dims: Sequence[int],
    head_init_std: float = DEFAULT_HEAD_INIT_STD,
    seed: int = 0,
    *,
    coral_taps: Iterable[int] | None = None,
    head_lr_multiplier: float = DEFAULT_HEAD_LR_MULTIPLIER,
) -> Network:
    """Build a network `dims[0] -> ... -> dims[-1]` with ReLUs between affines.

    Hidden layers use fan-in scaled uniform weights U(-sqrt(6/fan_in),
    sqrt(6/fan_in)); the last affine layer draws N(0, head_init_std^2) and gets
    `head_lr_multiplier`. Biases start at zero. Deterministic for a fixed seed.
    """

    dims = list(layer_dims)
    if len(dims) < 2:
        raise BadArchitectureError(f"need at least 2 layer dims, got {dims}")
    if any(int(d) != d or d < 1 for d in dims):
        raise BadArchitectureError(f"layer dims must be positive integers, got {dims}")
    if not head_init_std > 0:
        raise BadArchitectureError(f"head_init_std must be positive, got {head_init_std}")

    rng = np.random.default_rng(seed)
    layers: list[Layer] = []
    last = len(dims) - 2
    for i, (fan_in, fan_out) in enumerate(zip(dims, dims[1:], strict=False)):
        if i == last:
            weights = rng.normal(0.0, head_init_std, size=(fan_in, fan_out))
            layers.append(
                Layer.affine(weights, np.zeros(fan_out), lr_multiplier=head_lr_multiplier)
            )
        else:
            bound = float(np.sqrt(6.0 / fan_in))
            weights = rng.uniform(-bound, bound, size=(fan_in, fan_out))
            layers.append(Layer.affine(weights, np.zeros(fan_out)))
            layers.append(Layer(kind=LayerKind.RELU))
    layers.append(Layer(kind=LayerKind.HEAD))

    taps = default_taps(layers) if coral_taps is None else tuple(sorted(set(coral_taps)))
    return Network(layers=tuple(layers), coral_taps=taps)


@dataclass(slots=True, frozen=True, eq=False)
class ForwardPass:
    """Result of `forward`: logits, tapped activations and the backward cache."""

    logits: Matrix
    taps: Mapping[int, Matrix]
    fingerprint: str
    inputs: tuple[Matrix, ...] = field(repr=False)


def forward(net: Network, x: ArrayLike) -> ForwardPass:
    """Run `x` through every layer before the head."""

    h = as_matrix(x, name="X")
    if h.shape[1] != net.input_dim:
        raise DimensionMismatchError(
            f"X has {h.shape[1]} columns, network expects {net.input_dim}"
        )

    inputs: list[Matrix] = []
    taps: dict[int, Matrix] = {}
    for idx, layer in enumerate(net.layers):
        if layer.kind is LayerKind.HEAD:
            break
        inputs.append(h)
        h = layer.apply(h)
        if idx in net.coral_taps:
            taps[idx] = frozen(h)

    return ForwardPass(
        logits=frozen(h),
        taps=taps,
        fingerprint=net.fingerprint(),
        inputs=tuple(inputs),
    )


@dataclass(slots=True, frozen=True, eq=False)
class ParamGrads:
    """Gradients keyed by layer index, for affine layers only."""

    weights: Mapping[int, Matrix]
    biases: Mapping[int, Vector]

    def __add__(self, other: "ParamGrads") -> "ParamGrads":
        return ParamGrads(
            weights={i: g + other.weights[i] for i, g in self.weights.items()},
            biases={i: g + other.biases[i] for i, g in self.biases.items()},
        )

    def scaled(self, factor: float) -> "ParamGrads":
        return ParamGrads(
            weights={i: g * factor for i, g in self.weights.items()},
            biases={i: g * factor for i, g in self.biases.items()},
        )


def backward(
    net: Network,
    pass_: ForwardPass | None,
    grad_logits: ArrayLike | None,
    tap_grads: Mapping[int, ArrayLike] | None = None,
) -> ParamGrads:
    """Backpropagate head and tap gradients through the cached forward pass.

    `grad_logits=None` means no classification gradient (target stream).
    Gradients arriving from the head and from the taps sum at shared layers.
    """

    if pass_ is None or pass_.fingerprint != net.fingerprint():
        raise StaleForwardError("no forward pass cached for the current parameters")

    if grad_logits is None:
        g = np.zeros_like(pass_.logits)
    else:
        g = np.asarray(grad_logits, dtype=np.float64)
        if g.shape != pass_.logits.shape:
            raise DimensionMismatchError(
                f"grad_logits shape {g.shape} != logits shape {pass_.logits.shape}"
            )

    injected: dict[int, NDArray[np.float64]] = {}
    for tap, grad in (tap_grads or {}).items():
        if tap not in pass_.taps:
            raise DimensionMismatchError(f"layer {tap} is not a tap of this forward pass")
        arr = np.asarray(grad, dtype=np.float64)
        if arr.shape != pass_.taps[tap].shape:
            raise DimensionMismatchError(
                f"tap {tap} gradient shape {arr.shape} != activation shape "
                f"{pass_.taps[tap].shape}"
            )
        injected[tap] = arr

    weights: dict[int, Matrix] = {}
    biases: dict[int, Vector] = {}
    for idx in reversed(range(len(pass_.inputs))):
        if idx in injected:
            g = g + injected[idx]
        g, gw, gb = net.layers[idx].backprop(pass_.inputs[idx], g)
        if gw is not None and gb is not None:
            weights[idx] = gw
            biases[idx] = gb

    return ParamGrads(weights=weights, biases=biases)


def parameter_vector(net: Network) -> NDArray[np.float64]:
    """All parameters flattened in layer order (weights row-major, then bias)."""

    parts: list[NDArray[np.float64]] = []
    for i in net.param_indices:
        layer = net.layers[i]
        assert layer.weights is not None and layer.bias is not None
        parts.extend((layer.weights.ravel(), layer.bias))
    return np.concatenate(parts)


def with_parameter_vector(net: Network, theta: ArrayLike) -> Network:
    """Inverse of `parameter_vector`."""

    flat = np.asarray(theta, dtype=np.float64).ravel()
    total = parameter_vector(net).size
    if flat.size != total:
        raise DimensionMismatchError(
            f"parameter vector has {flat.size} entries, network has {total}"
        )
    layers = list(net.layers)
    pos = 0
    for i in net.param_indices:
        layer = layers[i]
        assert layer.weights is not None and layer.bias is not None
        w_size, b_size = layer.weights.size, layer.bias.size
        w = flat[pos : pos + w_size].reshape(layer.weights.shape).copy()
        pos += w_size
        b = flat[pos : pos + b_size].copy()
        pos += b_size
        layers[i] = layer.with_params(w, b)
    return net.with_layers(layers)


def grads_vector(net: Network, grads: ParamGrads) -> NDArray[np.float64]:
    """`grads` flattened in the same order as `parameter_vector`."""

    parts: list[NDArray[np.float64]] = []
    for i in net.param_indices:
        parts.extend((np.asarray(grads.weights[i]).ravel(), np.asarray(grads.biases[i])))
    return np.concatenate(parts)


__all__ = [
    "DEFAULT_HEAD_INIT_STD",
    "DEFAULT_HEAD_LR_MULTIPLIER",
    "ForwardPass",
    "Network",
    "ParamGrads",
    "backward",
    "default_taps",
    "forward",
    "grads_vector",
    "init_network",
    "parameter_vector",
    "with_parameter_vector",
]
