"""Synthetic domain-shift benchmark.

Source rows are drawn from class-conditional Gaussians, isotropic unless
per-class covariance factors are given. Target rows come from the same class
structure pushed through an affine map

    t = S R x + offset

where R rotates the `rotation_dims` plane and S scales each dimension.
Gaussian draws use numpy's `Generator.standard_normal` (ziggurat on PCG64),
so a seed fixes the sequence on every platform.
"""

import math
from dataclasses import dataclass
from enum import StrEnum

import numpy as np

from deep_coral.core.matrix import Matrix, Vector
from deep_coral.data.dataset import Dataset, Domain
from deep_coral.diagnostics.errors import BadSpecError

STANDARD_SEEDS = tuple(range(10))

type ClassFactor = tuple[float, ...] | tuple[tuple[float, ...], ...]


class MeanLayout(StrEnum):
    """Placement of default class means.

    CIRCLE spreads them evenly on a circle in the rotation plane. LINE spaces
    them evenly on `[-mean_radius, mean_radius]` along the first rotation dim
    (a single class sits at the origin).
    """

    CIRCLE = "circle"
    LINE = "line"


@dataclass(slots=True, frozen=True)
class ShiftSpec:
    """Parameters of a source/target pair.

    Empty tuples take defaults: class means laid out by `mean_layout` at
    radius `mean_radius`, unit class stds, unit scale, zero offset.

    `class_factors` replaces the scalar stds with one factor `L_k` per class,
    giving class covariance `L_k L_k^T`. A factor is either a `dim`-vector
    (per-dimension stds) or a `dim x dim` matrix.
    """

    num_classes: int = 3
    dim: int = 10
    samples_per_class: int = 300
    seed: int = 0
    class_means: tuple[tuple[float, ...], ...] = ()
    class_stds: tuple[float, ...] = ()
    class_factors: tuple[ClassFactor, ...] = ()
    mean_layout: MeanLayout = MeanLayout.CIRCLE
    mean_radius: float = 3.0
    rotation_deg: float = 0.0
    rotation_dims: tuple[int, int] = (0, 1)
    scale: tuple[float, ...] = ()
    offset: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        if self.num_classes < 1:
            raise BadSpecError(f"num_classes must be >= 1, got {self.num_classes}")
        if self.dim < 1:
            raise BadSpecError(f"dim must be >= 1, got {self.dim}")
        if self.samples_per_class < 2:
            raise BadSpecError(
                f"samples_per_class must be >= 2, got {self.samples_per_class}"
            )
        if self.class_means:
            if len(self.class_means) != self.num_classes or any(
                len(m) != self.dim for m in self.class_means
            ):
                raise BadSpecError("class_means must be num_classes vectors of length dim")
        if self.class_stds:
            if len(self.class_stds) != self.num_classes:
                raise BadSpecError("class_stds must have one entry per class")
            if any(not s > 0 for s in self.class_stds):
                raise BadSpecError("class_stds must be positive")
        if self.class_factors:
            self._check_factors()
        if not (math.isfinite(self.mean_radius) and self.mean_radius >= 0):
            raise BadSpecError(f"mean_radius must be finite and >= 0, got {self.mean_radius}")
        try:
            MeanLayout(self.mean_layout)
        except ValueError:
            raise BadSpecError(f"unknown mean_layout {self.mean_layout!r}") from None
        if self.scale:
            if len(self.scale) != self.dim:
                raise BadSpecError(f"scale must have {self.dim} entries")
            if any(not s > 0 for s in self.scale):
                raise BadSpecError("scale factors must be positive")
        if self.offset and len(self.offset) != self.dim:
            raise BadSpecError(f"offset must have {self.dim} entries")

        i, j = self.rotation_dims
        needs_plane = self.rotation_deg != 0.0 or not self.class_means
        if needs_plane and self.dim < 2:
            raise BadSpecError("dim must be >= 2 for a rotation plane")
        if needs_plane and (i == j or not (0 <= i < self.dim and 0 <= j < self.dim)):
            raise BadSpecError(f"invalid rotation_dims {self.rotation_dims}")
        if not all(math.isfinite(v) for v in (*self.scale, *self.offset, self.rotation_deg)):
            raise BadSpecError("transform parameters must be finite")

    def means(self) -> Matrix:
        if self.class_means:
            return np.array(self.class_means, dtype=np.float64)
        i, j = self.rotation_dims
        out = np.zeros((self.num_classes, self.dim))
        if self.mean_layout == MeanLayout.LINE:
            if self.num_classes > 1:
                out[:, i] = np.linspace(-self.mean_radius, self.mean_radius, self.num_classes)
            return out
        angles = 2 * np.pi * np.arange(self.num_classes) / self.num_classes
        out[:, i] = self.mean_radius * np.cos(angles)
        out[:, j] = self.mean_radius * np.sin(angles)
        return out

    def _check_factors(self) -> None:
        if self.class_stds:
            raise BadSpecError("give class_stds or class_factors, not both")
        if len(self.class_factors) != self.num_classes:
            raise BadSpecError("class_factors must have one entry per class")
        for k, raw in enumerate(self.class_factors):
            try:
                factor = np.array(raw, dtype=np.float64)
            except ValueError:
                raise BadSpecError(f"class_factors[{k}] is ragged") from None
            if factor.shape not in {(self.dim,), (self.dim, self.dim)}:
                raise BadSpecError(
                    f"class_factors[{k}] must be a {self.dim}-vector or "
                    f"{self.dim}x{self.dim} matrix, got shape {factor.shape}"
                )
            if not np.all(np.isfinite(factor)):
                raise BadSpecError(f"class_factors[{k}] must be finite")
            if factor.ndim == 1 and np.any(factor <= 0):
                raise BadSpecError(f"class_factors[{k}] stds must be positive")

    def factors(self) -> list[Matrix]:
        """Per-class `dim x dim` factors; scalar stds become multiples of I."""

        if not self.class_factors:
            return [s * np.eye(self.dim) for s in self.stds()]
        out: list[Matrix] = []
        for raw in self.class_factors:
            factor = np.array(raw, dtype=np.float64)
            out.append(np.diag(factor) if factor.ndim == 1 else factor)
        return out

    def class_covariances(self) -> list[Matrix]:
        return [f @ f.T for f in self.factors()]

    def stds(self) -> Vector:
        if self.class_stds:
            return np.array(self.class_stds, dtype=np.float64)
        return np.ones(self.num_classes)

    def scale_vector(self) -> Vector:
        return np.array(self.scale, dtype=np.float64) if self.scale else np.ones(self.dim)

    def offset_vector(self) -> Vector:
        return np.array(self.offset, dtype=np.float64) if self.offset else np.zeros(self.dim)

    def rotation(self) -> Matrix:
        r = np.eye(self.dim)
        if self.rotation_deg == 0.0:
            return r
        i, j = self.rotation_dims
        theta = math.radians(self.rotation_deg)
        c, s = math.cos(theta), math.sin(theta)
        r[i, i], r[i, j] = c, -s
        r[j, i], r[j, j] = s, c
        return r

    def transform(self) -> Matrix:
        """The linear part `S R` of the target map (column-vector convention)."""

        return np.diag(self.scale_vector()) @ self.rotation()


def standard_shift_spec(seed: int = 0) -> ShiftSpec:
    """The fixed desk-scale benchmark.

    3 classes, d=10, unit-variance blobs with means at -7, 0 and 7 along dim 0,
    30 degree rotation in dims (0, 1), scale 2.0 in dim 2, offset 1.0 in dim 3,
    300 samples per class per domain.
    """

    dim = 10
    scale = [1.0] * dim
    scale[2] = 2.0
    offset = [0.0] * dim
    offset[3] = 1.0
    return ShiftSpec(
        num_classes=3,
        dim=dim,
        samples_per_class=300,
        seed=seed,
        mean_layout=MeanLayout.LINE,
        mean_radius=7.0,
        rotation_deg=30.0,
        rotation_dims=(0, 1),
        scale=tuple(scale),
        offset=tuple(offset),
    )


def _draw(spec: ShiftSpec, rng: np.random.Generator) -> tuple[Matrix, np.ndarray]:
    means = spec.means()
    m = spec.samples_per_class
    if spec.class_factors:
        blocks = [
            means[k] + rng.standard_normal((m, spec.dim)) @ factor.T
            for k, factor in enumerate(spec.factors())
        ]
    else:
        stds = spec.stds()
        blocks = [
            means[k] + stds[k] * rng.standard_normal((m, spec.dim))
            for k in range(spec.num_classes)
        ]
    labels = np.repeat(np.arange(spec.num_classes, dtype=np.int64), m)
    return np.vstack(blocks), labels


def generate_shifted_pair(spec: ShiftSpec) -> tuple[Dataset, Dataset]:
    """Draw a labeled source set and a shifted target set (labels for scoring)."""

    rng = np.random.default_rng(spec.seed)
    source_x, source_y = _draw(spec, rng)
    raw_target, target_y = _draw(spec, rng)
    target_x = raw_target @ spec.transform().T + spec.offset_vector()

    source = Dataset(
        features=source_x, labels=source_y, domain=Domain.SOURCE, num_classes=spec.num_classes
    )
    target = Dataset(
        features=target_x, labels=target_y, domain=Domain.TARGET, num_classes=spec.num_classes
    )
    return source, target


__all__ = [
    "STANDARD_SEEDS",
    "ClassFactor",
    "MeanLayout",
    "ShiftSpec",
    "generate_shifted_pair",
    "standard_shift_spec",
]
