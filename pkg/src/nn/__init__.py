from .layers import ConvLayer, DenseLayer, DropoutSpec, PoolSpec, KERNEL_SIZE, glorot_bound
from .ops import (
    ConvGrads,
    DenseGrads,
    conv2d_forward,
    conv2d_backward,
    maxpool2d_forward,
    maxpool2d_backward,
    pad_to_pool,
    unpad,
    global_maxpool_forward,
    global_maxpool_backward,
    relu,
    relu_backward,
    dense_forward,
    dense_backward,
    dropout,
    dropout_backward,
    softmax,
)

__all__ = [
    "ConvLayer",
    "DenseLayer",
    "DropoutSpec",
    "PoolSpec",
    "KERNEL_SIZE",
    "glorot_bound",
    "ConvGrads",
    "DenseGrads",
    "conv2d_forward",
    "conv2d_backward",
    "maxpool2d_forward",
    "maxpool2d_backward",
    "pad_to_pool",
    "unpad",
    "global_maxpool_forward",
    "global_maxpool_backward",
    "relu",
    "relu_backward",
    "dense_forward",
    "dense_backward",
    "dropout",
    "dropout_backward",
    "softmax",
]
