"""Dense, immutable, row-major N-dimensional tensors.

A Tensor owns a read-only numpy array. Every operation returns a new Tensor;
inputs are never mutated. Elementwise operations require identical shapes
(no broadcasting).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Tuple, Union

import numpy as np
from numpy.typing import ArrayLike, DTypeLike

from src.exception import ShapeError, raise_shape_mismatch

DEFAULT_DTYPE = np.float64

Scalar = Union[int, float]


def _frozen(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


class Tensor:
    """Real-valued tensor with explicit shape; all extents are >= 1."""

    __slots__ = ("_array",)

    def __init__(self, data: ArrayLike, shape: Optional[Sequence[int]] = None, dtype: DTypeLike = None):
        array = np.array(data, dtype=dtype if dtype is not None else DEFAULT_DTYPE, copy=True, order="C")
        if shape is not None:
            _check_extents(shape)
            if array.size != int(np.prod(shape)):
                raise ShapeError(
                    f"data length {array.size} does not match shape {tuple(shape)}",
                    op="create",
                )
            array = array.reshape(tuple(shape))
        _check_extents(array.shape)
        self._array = _frozen(array)

    @classmethod
    def from_array(cls, array: np.ndarray) -> "Tensor":
        """Wrap a freshly computed array without copying; the caller gives up ownership."""
        array = np.ascontiguousarray(array)
        _check_extents(array.shape)
        tensor = cls.__new__(cls)
        tensor._array = _frozen(array)
        return tensor

    # ------------------------------------------------------------------
    # Metadata
    # ------------------------------------------------------------------

    @property
    def shape(self) -> Tuple[int, ...]:
        return self._array.shape

    @property
    def rank(self) -> int:
        return self._array.ndim

    @property
    def size(self) -> int:
        return self._array.size

    @property
    def dtype(self) -> np.dtype:
        return self._array.dtype

    @property
    def array(self) -> np.ndarray:
        """Read-only view of the underlying array."""
        return self._array

    @property
    def data(self) -> np.ndarray:
        """Read-only flat view in row-major order."""
        return self._array.reshape(-1)

    def numpy(self) -> np.ndarray:
        """Writable copy of the values."""
        return self._array.copy()

    # ------------------------------------------------------------------
    # Shape manipulation
    # ------------------------------------------------------------------

    def reshape(self, shape: Sequence[int]) -> "Tensor":
        _check_extents(shape)
        if int(np.prod(shape)) != self.size:
            raise ShapeError(
                f"cannot reshape {self.shape} ({self.size} values) to {tuple(shape)}",
                op="reshape",
            )
        return Tensor.from_array(self._array.reshape(tuple(shape)))

    def flatten(self) -> "Tensor":
        return flatten(self)

    def astype(self, dtype: DTypeLike) -> "Tensor":
        if self.dtype == np.dtype(dtype):
            return self
        return Tensor.from_array(self._array.astype(dtype))

    # ------------------------------------------------------------------
    # Elementwise arithmetic
    # ------------------------------------------------------------------

    def _binary(self, other: Union["Tensor", Scalar], op: str) -> "Tensor":
        if isinstance(other, Tensor):
            if other.shape != self.shape:
                raise_shape_mismatch(op, self.shape, other.shape)
            rhs = other._array
        else:
            rhs = other
        return Tensor.from_array(getattr(np, op)(self._array, rhs))

    def __add__(self, other: Union["Tensor", Scalar]) -> "Tensor":
        return self._binary(other, "add")

    def __sub__(self, other: Union["Tensor", Scalar]) -> "Tensor":
        return self._binary(other, "subtract")

    def __mul__(self, other: Union["Tensor", Scalar]) -> "Tensor":
        return self._binary(other, "multiply")

    def __truediv__(self, other: Union["Tensor", Scalar]) -> "Tensor":
        return self._binary(other, "divide")

    __radd__ = __add__
    __rmul__ = __mul__

    def __neg__(self) -> "Tensor":
        return Tensor.from_array(np.negative(self._array))

    # ------------------------------------------------------------------
    # Reductions
    # ------------------------------------------------------------------

    def sum(self) -> float:
        return float(self._array.sum())

    def max(self) -> float:
        return float(self._array.max())

    def min(self) -> float:
        return float(self._array.min())

    def argmax(self) -> int:
        """Flat row-major index of the first maximum."""
        return int(self._array.argmax())

    def is_finite(self) -> bool:
        return bool(np.isfinite(self._array).all())

    # ------------------------------------------------------------------
    # Comparison helpers
    # ------------------------------------------------------------------

    def equals(self, other: "Tensor") -> bool:
        """Bit-exact equality of shape and values."""
        return self.shape == other.shape and np.array_equal(self._array, other._array)

    def allclose(self, other: "Tensor", rtol: float = 1e-9, atol: float = 0.0) -> bool:
        return self.shape == other.shape and np.allclose(self._array, other._array, rtol=rtol, atol=atol)

    def __repr__(self) -> str:
        return f"Tensor(shape={self.shape}, dtype={self.dtype})"

    def __len__(self) -> int:
        return self.shape[0]


def _check_extents(shape: Iterable[int]) -> None:
    shape = tuple(shape)
    if not shape or any(int(e) < 1 for e in shape):
        raise ShapeError(f"all extents must be >= 1, got {shape}", op="create")


# ----------------------------------------------------------------------
# Creation
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class Zeros:
    pass


@dataclass(frozen=True)
class Constant:
    value: float


@dataclass(frozen=True)
class Uniform:
    """Uniform on (-bound, bound)."""
    bound: float


@dataclass(frozen=True)
class Gaussian:
    """Zero-mean normal with standard deviation sigma."""
    sigma: float


Init = Union[Zeros, Constant, Uniform, Gaussian]


def create(
    shape: Sequence[int],
    init: Init = Zeros(),
    *,
    seed: Union[int, np.random.SeedSequence, None] = None,
    dtype: DTypeLike = DEFAULT_DTYPE,
) -> Tensor:
    """Create a tensor; random inits are reproducible given (seed, shape, init)."""
    _check_extents(shape)
    shape = tuple(int(e) for e in shape)

    if isinstance(init, Zeros):
        return Tensor.from_array(np.zeros(shape, dtype=dtype))
    if isinstance(init, Constant):
        return Tensor.from_array(np.full(shape, init.value, dtype=dtype))

    if seed is None:
        raise ShapeError(f"{type(init).__name__} init requires an explicit seed", op="create")
    rng = np.random.default_rng(seed)
    if isinstance(init, Uniform):
        values = rng.uniform(-init.bound, init.bound, size=shape)
    elif isinstance(init, Gaussian):
        values = rng.normal(0.0, init.sigma, size=shape)
    else:
        raise TypeError(f"unknown init {init!r}")
    return Tensor.from_array(values.astype(dtype, copy=False))


# ----------------------------------------------------------------------
# Algebra
# ----------------------------------------------------------------------


def matmul(a: Tensor, b: Tensor) -> Tensor:
    """C[i, j] = sum_t A[i, t] * B[t, j]."""
    if a.rank != 2 or b.rank != 2:
        raise ShapeError(f"matmul needs rank-2 operands, got {a.shape} and {b.shape}", op="matmul")
    if a.shape[1] != b.shape[0]:
        raise ShapeError(f"matmul inner extents differ: {a.shape} x {b.shape}", op="matmul")
    return Tensor.from_array(a.array @ b.array)


def concat(a: Tensor, b: Tensor) -> Tensor:
    """Entries of a followed by entries of b; both must be rank-1."""
    if a.rank != 1 or b.rank != 1:
        raise ShapeError(f"concat needs rank-1 operands, got {a.shape} and {b.shape}", op="concat")
    return Tensor.from_array(np.concatenate([a.array, b.array]))


def flatten(a: Tensor) -> Tensor:
    return Tensor.from_array(a.array.reshape(-1))


def stack_concat(parts: Sequence[Tensor]) -> Tensor:
    """Left fold of concat over one or more rank-1 tensors."""
    if not parts:
        raise ShapeError("nothing to concatenate", op="concat")
    result = parts[0]
    if result.rank != 1:
        raise ShapeError(f"concat needs rank-1 operands, got {result.shape}", op="concat")
    for part in parts[1:]:
        result = concat(result, part)
    return result
