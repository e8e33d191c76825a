"""Forward and backward passes for every MoodNet layer type.

Feature maps are laid out [height, width, channels]. Convolution is
cross-correlation with zero same-padding; pooling is non-overlapping with
floor semantics (trailing rows/columns are dropped).
"""

from typing import NamedTuple, Optional, Tuple, Union

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from src.core.models import Mode
from src.exception import ShapeError, StateError, raise_shape_mismatch
from src.tensor import Tensor
from .layers import ConvLayer, DenseLayer, DropoutSpec, PoolSpec, SeedLike


class ConvGrads(NamedTuple):
    dx: Optional[Tensor]
    dkernel: Tensor
    dbias: Tensor


class DenseGrads(NamedTuple):
    dx: Tensor
    dweights: Tensor
    dbias: Tensor


# ----------------------------------------------------------------------
# Convolution
# ----------------------------------------------------------------------


def _im2col(x: np.ndarray, k: int) -> np.ndarray:
    """Rows are output positions, columns follow the kernel's (kh, kw, cin) order."""
    h, w, c = x.shape
    pad = k // 2
    padded = np.pad(x, ((pad, pad), (pad, pad), (0, 0)))
    windows = sliding_window_view(padded, (k, k), axis=(0, 1))  # (h, w, c, k, k)
    return windows.transpose(0, 1, 3, 4, 2).reshape(h * w, k * k * c)


def _correlate_same(x: np.ndarray, kernel: np.ndarray) -> np.ndarray:
    h, w, _ = x.shape
    k, _, cin, cout = kernel.shape
    return (_im2col(x, k) @ kernel.reshape(k * k * cin, cout)).reshape(h, w, cout)


def _check_feature_map(x: Tensor, op: str) -> None:
    if x.rank != 3:
        raise ShapeError(f"{op} expects an [h, w, c] feature map, got {x.shape}", op=op)


def conv2d_forward(x: Tensor, layer: ConvLayer) -> Tensor:
    _check_feature_map(x, "conv2d")
    if x.shape[2] != layer.cin:
        raise ShapeError(
            f"conv2d: input has {x.shape[2]} channels, kernel expects {layer.cin}",
            op="conv2d",
        )
    out = _correlate_same(x.array, layer.kernel.array) + layer.bias.array
    return Tensor.from_array(out)


def conv2d_backward(x: Tensor, layer: ConvLayer, d_out: Tensor, input_grad: bool = True) -> ConvGrads:
    """Exact gradients of conv2d_forward; skip dx with input_grad=False for a network's first layer."""
    _check_feature_map(x, "conv2d")
    h, w, cin = x.shape
    expected = (h, w, layer.cout)
    if d_out.shape != expected:
        raise_shape_mismatch("conv2d_backward", expected, d_out.shape)

    k = layer.kernel.shape[0]
    g = d_out.array.reshape(h * w, layer.cout)
    dkernel = (_im2col(x.array, k).T @ g).reshape(layer.kernel.shape)
    dbias = g.sum(axis=0)

    dx = None
    if input_grad:
        # Correlating dOut with the spatially flipped, channel-transposed kernel
        flipped = layer.kernel.array[::-1, ::-1].transpose(0, 1, 3, 2)
        dx = Tensor.from_array(_correlate_same(d_out.array, np.ascontiguousarray(flipped)))

    return ConvGrads(dx=dx, dkernel=Tensor.from_array(dkernel), dbias=Tensor.from_array(dbias))


# ----------------------------------------------------------------------
# Max pooling
# ----------------------------------------------------------------------


def _pool_windows(x: np.ndarray, spec: PoolSpec) -> Tuple[np.ndarray, int, int]:
    h, w, c = x.shape
    oh, ow = spec.output_extents(h, w)
    if oh < 1 or ow < 1:
        raise ShapeError(
            f"maxpool ({spec.ph}, {spec.pw}) on {h}x{w} gives an empty output",
            op="maxpool2d",
        )
    cropped = x[: oh * spec.ph, : ow * spec.pw]
    windows = cropped.reshape(oh, spec.ph, ow, spec.pw, c).transpose(0, 2, 4, 1, 3)
    return windows.reshape(oh, ow, c, spec.ph * spec.pw), oh, ow


def maxpool2d_forward(x: Tensor, spec: PoolSpec) -> Tensor:
    _check_feature_map(x, "maxpool2d")
    windows, _, _ = _pool_windows(x.array, spec)
    return Tensor.from_array(windows.max(axis=-1))


def maxpool2d_backward(x: Tensor, spec: PoolSpec, d_out: Tensor) -> Tensor:
    """Route each gradient to its window's first (row-major) maximum."""
    _check_feature_map(x, "maxpool2d")
    windows, oh, ow = _pool_windows(x.array, spec)
    c = x.shape[2]
    if d_out.shape != (oh, ow, c):
        raise_shape_mismatch("maxpool2d_backward", (oh, ow, c), d_out.shape)

    winner = windows.argmax(axis=-1)
    routed = (np.arange(spec.ph * spec.pw) == winner[..., None]) * d_out.array[..., None]
    routed = routed.reshape(oh, ow, c, spec.ph, spec.pw).transpose(0, 3, 1, 4, 2)

    dx = np.zeros(x.shape, dtype=np.result_type(x.dtype, d_out.dtype))
    dx[: oh * spec.ph, : ow * spec.pw] = routed.reshape(oh * spec.ph, ow * spec.pw, c)
    return Tensor.from_array(dx)


def pad_to_pool(x: Tensor, spec: PoolSpec) -> Tensor:
    """Zero-pad the bottom/right edge so neither spatial extent is below the pool window."""
    _check_feature_map(x, "maxpool2d")
    h, w, _ = x.shape
    extra_h, extra_w = max(spec.ph - h, 0), max(spec.pw - w, 0)
    if not extra_h and not extra_w:
        return x
    return Tensor.from_array(np.pad(x.array, ((0, extra_h), (0, extra_w), (0, 0))))


def unpad(d_padded: Tensor, shape: Tuple[int, ...]) -> Tensor:
    """Gradient of pad_to_pool: crop back to the unpadded extents."""
    if d_padded.shape == tuple(shape):
        return d_padded
    h, w, _ = shape
    return Tensor.from_array(d_padded.array[:h, :w].copy())


def global_maxpool_forward(x: Tensor) -> Tensor:
    """Max over every spatial cell, one value per channel."""
    _check_feature_map(x, "global_maxpool")
    h, w, _ = x.shape
    return maxpool2d_forward(x, PoolSpec(h, w)).flatten()


def global_maxpool_backward(x: Tensor, d_out: Tensor) -> Tensor:
    h, w, c = x.shape
    return maxpool2d_backward(x, PoolSpec(h, w), d_out.reshape((1, 1, c)))


# ----------------------------------------------------------------------
# ReLU
# ----------------------------------------------------------------------


def relu(x: Tensor) -> Tensor:
    return Tensor.from_array(np.maximum(x.array, 0))


def relu_backward(x: Tensor, d_out: Tensor) -> Tensor:
    # subgradient at 0 is 0
    if d_out.shape != x.shape:
        raise_shape_mismatch("relu_backward", x.shape, d_out.shape)
    return Tensor.from_array(np.where(x.array > 0, d_out.array, 0).astype(d_out.dtype, copy=False))


# ----------------------------------------------------------------------
# Dense
# ----------------------------------------------------------------------


def dense_forward(x: Tensor, layer: DenseLayer) -> Tensor:
    if x.shape != (layer.fan_in,):
        raise_shape_mismatch("dense", (layer.fan_in,), x.shape)
    return Tensor.from_array(x.array @ layer.weights.array + layer.bias.array)


def dense_backward(x: Tensor, layer: DenseLayer, d_out: Tensor) -> DenseGrads:
    if x.shape != (layer.fan_in,):
        raise_shape_mismatch("dense_backward", (layer.fan_in,), x.shape)
    if d_out.shape != (layer.fan_out,):
        raise_shape_mismatch("dense_backward", (layer.fan_out,), d_out.shape)
    g = d_out.array
    return DenseGrads(
        dx=Tensor.from_array(layer.weights.array @ g),
        dweights=Tensor.from_array(np.outer(x.array, g)),
        dbias=Tensor.from_array(g.copy()),
    )


# ----------------------------------------------------------------------
# Dropout
# ----------------------------------------------------------------------


def dropout(x: Tensor, spec: DropoutSpec, seed: Union[SeedLike, None] = None) -> Tuple[Tensor, Tensor]:
    """Inverted dropout. Returns (y, mask) where the mask already carries the 1/(1-rate) scale."""
    if spec.mode is Mode.EVAL:
        return x, Tensor.from_array(np.ones(x.shape, dtype=x.dtype))
    if seed is None:
        raise StateError("train-mode dropout requires a seed")
    keep = np.random.default_rng(seed).random(x.shape) >= spec.rate
    mask = keep.astype(x.dtype) / np.asarray(1.0 - spec.rate, dtype=x.dtype)
    return Tensor.from_array(x.array * mask), Tensor.from_array(mask)


def dropout_backward(mask: Tensor, d_out: Tensor) -> Tensor:
    return d_out * mask


# ----------------------------------------------------------------------
# Softmax
# ----------------------------------------------------------------------


def softmax(z: Tensor) -> Tensor:
    if z.rank != 1:
        raise ShapeError(f"softmax expects a rank-1 logit vector, got {z.shape}", op="softmax")
    shifted = np.exp(z.array - z.array.max())
    return Tensor.from_array(shifted / shifted.sum())
