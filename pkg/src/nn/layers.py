"""Layer parameter containers and their Glorot-uniform initialisation."""

import math
from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np
from numpy.typing import DTypeLike

from src.core.models import Mode
from src.exception import ConfigurationError, ShapeError
from src.tensor import Tensor, Uniform, Zeros, create

KERNEL_SIZE = 3

SeedLike = Union[int, np.random.SeedSequence]


def glorot_bound(fan_in: int, fan_out: int) -> float:
    return math.sqrt(6.0 / (fan_in + fan_out))


@dataclass(frozen=True)
class ConvLayer:
    """3x3 same-padded convolution; kernel laid out [kh, kw, cin, cout]."""
    kernel: Tensor
    bias: Tensor

    def __post_init__(self):
        if self.kernel.rank != 4 or self.kernel.shape[:2] != (KERNEL_SIZE, KERNEL_SIZE):
            raise ShapeError(
                f"conv kernel must be {KERNEL_SIZE}x{KERNEL_SIZE}xCinxCout, got {self.kernel.shape}",
                op="conv2d",
            )
        if self.bias.shape != (self.cout,):
            raise ShapeError(f"conv bias must be ({self.cout},), got {self.bias.shape}", op="conv2d")

    @property
    def cin(self) -> int:
        return self.kernel.shape[2]

    @property
    def cout(self) -> int:
        return self.kernel.shape[3]

    @staticmethod
    def kernel_shape(cin: int, cout: int) -> Tuple[int, int, int, int]:
        return KERNEL_SIZE, KERNEL_SIZE, cin, cout

    @classmethod
    def glorot(cls, cin: int, cout: int, seed: SeedLike, dtype: DTypeLike = np.float64) -> "ConvLayer":
        receptive = KERNEL_SIZE * KERNEL_SIZE
        bound = glorot_bound(receptive * cin, receptive * cout)
        return cls(
            kernel=create(cls.kernel_shape(cin, cout), Uniform(bound), seed=seed, dtype=dtype),
            bias=create((cout,), Zeros(), dtype=dtype),
        )


@dataclass(frozen=True)
class PoolSpec:
    """Non-overlapping max pooling window; stride equals the window."""
    ph: int
    pw: int

    def __post_init__(self):
        if self.ph < 1 or self.pw < 1:
            raise ConfigurationError(f"pool extents must be >= 1, got ({self.ph}, {self.pw})")

    def output_extents(self, h: int, w: int) -> Tuple[int, int]:
        return h // self.ph, w // self.pw


@dataclass(frozen=True)
class DenseLayer:
    """Affine map y = W^T x + b with W laid out [in, out]."""
    weights: Tensor
    bias: Tensor

    def __post_init__(self):
        if self.weights.rank != 2:
            raise ShapeError(f"dense weights must be rank-2, got {self.weights.shape}", op="dense")
        if self.bias.shape != (self.fan_out,):
            raise ShapeError(f"dense bias must be ({self.fan_out},), got {self.bias.shape}", op="dense")

    @property
    def fan_in(self) -> int:
        return self.weights.shape[0]

    @property
    def fan_out(self) -> int:
        return self.weights.shape[1]

    @classmethod
    def glorot(cls, fan_in: int, fan_out: int, seed: SeedLike, dtype: DTypeLike = np.float64) -> "DenseLayer":
        return cls(
            weights=create((fan_in, fan_out), Uniform(glorot_bound(fan_in, fan_out)), seed=seed, dtype=dtype),
            bias=create((fan_out,), Zeros(), dtype=dtype),
        )


@dataclass(frozen=True)
class DropoutSpec:
    rate: float = 0.2
    mode: Mode = Mode.EVAL

    def __post_init__(self):
        if not 0.0 <= self.rate < 1.0:
            raise ConfigurationError(f"dropout rate must be in [0, 1), got {self.rate}", config_key="dropout")
