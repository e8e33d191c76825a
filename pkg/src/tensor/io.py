"""MNT1 tensor file codec.

Layout: magic b"MNT1", u32 rank, rank x u32 extents, then the float32
payload in row-major order. All integers and floats are little-endian.
"""

import os
import tempfile
from pathlib import Path
from typing import Union

import numpy as np
from numpy.typing import DTypeLike

from src.exception import FormatError
from .core import Tensor

MAGIC = b"MNT1"
_HEADER_DTYPE = np.dtype("<u4")
_PAYLOAD_DTYPE = np.dtype("<f4")

PathLike = Union[str, Path]


def encode_tensor(tensor: Tensor) -> bytes:
    header = np.array([tensor.rank, *tensor.shape], dtype=_HEADER_DTYPE)
    payload = np.ascontiguousarray(tensor.array, dtype=_PAYLOAD_DTYPE)
    return MAGIC + header.tobytes() + payload.tobytes()


def decode_tensor(blob: bytes, dtype: DTypeLike = np.float32, source: str = "<bytes>") -> Tensor:
    if blob[:4] != MAGIC:
        raise FormatError("missing MNT1 magic", file_name=source)
    if len(blob) < 8:
        raise FormatError("truncated header", file_name=source)
    rank = int(np.frombuffer(blob, dtype=_HEADER_DTYPE, count=1, offset=4)[0])
    header_end = 8 + 4 * rank
    if rank < 1 or len(blob) < header_end:
        raise FormatError(f"invalid rank {rank}", file_name=source)
    shape = tuple(int(e) for e in np.frombuffer(blob, dtype=_HEADER_DTYPE, count=rank, offset=8))
    if 0 in shape:
        raise FormatError(f"zero extent in shape {shape}", file_name=source)
    expected = header_end + 4 * int(np.prod(shape))
    if len(blob) != expected:
        raise FormatError(
            f"payload size {len(blob) - header_end} does not match shape {shape}",
            file_name=source,
        )
    values = np.frombuffer(blob, dtype=_PAYLOAD_DTYPE, offset=header_end).reshape(shape)
    return Tensor.from_array(values.astype(dtype))


def atomic_write_bytes(path: PathLike, blob: bytes) -> None:
    """Write to a temporary file in the target directory, then rename over the target."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=path.parent)
    try:
        with os.fdopen(fd, "wb") as handle:
            handle.write(blob)
            handle.flush()
            os.fsync(handle.fileno())
        os.replace(tmp_name, path)
    except BaseException:
        Path(tmp_name).unlink(missing_ok=True)
        raise


def write_tensor(path: PathLike, tensor: Tensor) -> None:
    atomic_write_bytes(path, encode_tensor(tensor))


def read_tensor(path: PathLike, dtype: DTypeLike = np.float32) -> Tensor:
    path = Path(path)
    return decode_tensor(path.read_bytes(), dtype=dtype, source=str(path))
