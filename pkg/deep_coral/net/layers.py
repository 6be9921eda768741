"""Network layers.

Affine layers map `x -> x @ W + b` with W of shape (in, out). ReLU layers are
parameter-free. The classification head marks the end of the network; the
softmax cross-entropy itself lives in `deep_coral.net.loss`.
"""

from dataclasses import dataclass, replace
from enum import StrEnum
from typing import Self

import numpy as np

from deep_coral.core.matrix import Matrix, Vector, frozen
from deep_coral.diagnostics.errors import BadArchitectureError


class LayerKind(StrEnum):
    AFFINE = "affine"
    RELU = "relu"
    HEAD = "softmax-cross-entropy-head"


@dataclass(slots=True, frozen=True, eq=False)
class Layer:
    """One network layer. Parameter arrays are read-only."""

    kind: LayerKind
    weights: Matrix | None = None
    bias: Vector | None = None
    lr_multiplier: float = 1.0

    def __post_init__(self) -> None:
        if not self.lr_multiplier > 0:
            raise BadArchitectureError(
                f"lr_multiplier must be positive, got {self.lr_multiplier}"
            )
        if self.kind is LayerKind.AFFINE:
            if self.weights is None or self.bias is None:
                raise BadArchitectureError("affine layer needs weights and bias")
            if self.weights.ndim != 2 or self.bias.ndim != 1:
                raise BadArchitectureError("affine weights must be 2-D, bias 1-D")
            if self.bias.shape[0] != self.weights.shape[1]:
                raise BadArchitectureError(
                    f"bias length {self.bias.shape[0]} does not match "
                    f"weights output dim {self.weights.shape[1]}"
                )
        elif self.weights is not None or self.bias is not None:
            raise BadArchitectureError(f"{self.kind} layer takes no parameters")

    @classmethod
    def affine(cls, weights: Matrix, bias: Vector, *, lr_multiplier: float = 1.0) -> Self:
        return cls(
            kind=LayerKind.AFFINE,
            weights=frozen(np.array(weights, dtype=np.float64)),
            bias=frozen(np.array(bias, dtype=np.float64)),
            lr_multiplier=lr_multiplier,
        )

    @property
    def has_params(self) -> bool:
        return self.kind is LayerKind.AFFINE

    @property
    def in_dim(self) -> int:
        assert self.weights is not None
        return int(self.weights.shape[0])

    @property
    def out_dim(self) -> int:
        assert self.weights is not None
        return int(self.weights.shape[1])

    def with_params(self, weights: Matrix, bias: Vector) -> Self:
        return replace(self, weights=frozen(weights), bias=frozen(bias))

    def apply(self, x: Matrix) -> Matrix:
        match self.kind:
            case LayerKind.AFFINE:
                assert self.weights is not None and self.bias is not None
                return x @ self.weights + self.bias
            case LayerKind.RELU:
                return np.maximum(x, 0.0)
            case LayerKind.HEAD:
                return x

    def backprop(
        self, x: Matrix, grad_out: Matrix
    ) -> tuple[Matrix, Matrix | None, Vector | None]:
        """Return (grad wrt input, grad wrt weights, grad wrt bias)."""

        match self.kind:
            case LayerKind.AFFINE:
                assert self.weights is not None
                return grad_out @ self.weights.T, x.T @ grad_out, grad_out.sum(axis=0)
            case LayerKind.RELU:
                return grad_out * (x > 0), None, None
            case LayerKind.HEAD:
                return grad_out, None, None


__all__ = ["Layer", "LayerKind"]
