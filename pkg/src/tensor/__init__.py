from .core import (
    Tensor,
    Zeros,
    Constant,
    Uniform,
    Gaussian,
    create,
    matmul,
    concat,
    flatten,
    stack_concat,
)
from .io import (
    MAGIC,
    encode_tensor,
    decode_tensor,
    write_tensor,
    read_tensor,
    atomic_write_bytes,
)

__all__ = [
    "Tensor",
    "Zeros",
    "Constant",
    "Uniform",
    "Gaussian",
    "create",
    "matmul",
    "concat",
    "flatten",
    "stack_concat",
    "MAGIC",
    "encode_tensor",
    "decode_tensor",
    "write_tensor",
    "read_tensor",
    "atomic_write_bytes",
]
