"""Per-modality convolutional towers.

Each block is conv 3x3 (same padding) -> ReLU -> zero-pad up to the pool
window when an extent is smaller -> non-overlapping max pool. The tower ends
with a global max over the remaining spatial cells and, when the last block's
channel count differs from the tower width, a learned linear projection.
With the default audio schedule at depth 5 the map is already 1x1x2048 and
the tower reduces to a flatten.
"""

from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from src.core.models import Modality
from src.exception import ConfigurationError, raise_invalid_depth
from src.model.config import DEFAULT_CHANNELS, DEPTHS, MIN_TEXT_EXTENT, TOWER_WIDTH
from src.nn import (
    ConvLayer,
    DenseLayer,
    PoolSpec,
    conv2d_backward,
    conv2d_forward,
    dense_backward,
    dense_forward,
    global_maxpool_backward,
    global_maxpool_forward,
    maxpool2d_backward,
    maxpool2d_forward,
    pad_to_pool,
    relu,
    relu_backward,
    unpad,
)
from src.tensor import Tensor

AUDIO_POOLS: Tuple[PoolSpec, ...] = (
    PoolSpec(2, 4),
    PoolSpec(2, 4),
    PoolSpec(2, 4),
    PoolSpec(3, 5),
    PoolSpec(4, 4),
)
TEXT_POOLS: Tuple[PoolSpec, ...] = (PoolSpec(2, 2),) * 5

Shape3 = Tuple[int, int, int]


@dataclass(frozen=True)
class ConvBlock:
    name: str
    cin: int
    cout: int
    pool: PoolSpec


@dataclass(frozen=True)
class Tower:
    modality: Modality
    input_shape: Shape3
    blocks: Tuple[ConvBlock, ...]
    width: int

    @property
    def prefix(self) -> str:
        return self.modality.value

    @property
    def depth(self) -> int:
        return len(self.blocks)

    @property
    def projected(self) -> bool:
        return self.blocks[-1].cout != self.width

    def shape_ledger(self) -> List[Shape3]:
        """Feature-map shape after each block's pooling, computed without running the tower."""
        h, w, _ = self.input_shape
        ledger = []
        for block in self.blocks:
            h, w = block.pool.output_extents(max(h, block.pool.ph), max(w, block.pool.pw))
            ledger.append((h, w, block.cout))
        return ledger

    def parameter_shapes(self) -> Dict[str, Tuple[int, ...]]:
        shapes: Dict[str, Tuple[int, ...]] = {}
        for block in self.blocks:
            shapes[f"{self.prefix}.{block.name}.kernel"] = ConvLayer.kernel_shape(block.cin, block.cout)
            shapes[f"{self.prefix}.{block.name}.bias"] = (block.cout,)
        if self.projected:
            shapes[f"{self.prefix}.proj.weights"] = (self.blocks[-1].cout, self.width)
            shapes[f"{self.prefix}.proj.bias"] = (self.width,)
        return shapes

    def conv_layer(self, params: Mapping[str, Tensor], block: ConvBlock) -> ConvLayer:
        return ConvLayer(
            kernel=params[f"{self.prefix}.{block.name}.kernel"],
            bias=params[f"{self.prefix}.{block.name}.bias"],
        )

    def projection(self, params: Mapping[str, Tensor]) -> DenseLayer:
        return DenseLayer(weights=params[f"{self.prefix}.proj.weights"], bias=params[f"{self.prefix}.proj.bias"])


def _build_tower(
    modality: Modality,
    depth: int,
    input_shape: Shape3,
    pools: Sequence[PoolSpec],
    channels: Sequence[int],
    width: int,
) -> Tower:
    if depth not in DEPTHS:
        raise_invalid_depth(depth)
    if len(channels) < depth:
        raise ConfigurationError(f"{len(channels)} channel widths for a depth-{depth} tower", config_key="model.channels")
    blocks = []
    cin = input_shape[2]
    for index in range(depth):
        blocks.append(ConvBlock(name=f"conv{index + 1}", cin=cin, cout=channels[index], pool=pools[index]))
        cin = channels[index]
    return Tower(modality=modality, input_shape=input_shape, blocks=tuple(blocks), width=width)


def build_audio_tower(
    depth: int,
    input_shape: Tuple[int, int] = (96, 1366),
    channels: Sequence[int] = DEFAULT_CHANNELS,
    width: int = TOWER_WIDTH,
) -> Tower:
    return _build_tower(Modality.AUDIO, depth, (*input_shape, 1), AUDIO_POOLS, channels, width)


def build_text_tower(
    depth: int,
    lines_max: int,
    words_max: int,
    embedding_dim: int = 100,
    channels: Sequence[int] = DEFAULT_CHANNELS,
    width: int = TOWER_WIDTH,
) -> Tower:
    if min(lines_max, words_max) < MIN_TEXT_EXTENT:
        raise ConfigurationError(
            f"text grid {lines_max}x{words_max} is below {MIN_TEXT_EXTENT}x{MIN_TEXT_EXTENT}",
            config_key="model.lines_max",
        )
    return _build_tower(Modality.LYRICS, depth, (lines_max, words_max, embedding_dim), TEXT_POOLS, channels, width)


# ----------------------------------------------------------------------
# Forward / backward
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class BlockCache:
    x: Tensor         # conv input
    z: Tensor         # conv output before ReLU
    padded: Tensor    # ReLU output after pad_to_pool


@dataclass(frozen=True)
class TowerCache:
    blocks: Tuple[BlockCache, ...]
    final_map: Tensor
    pooled: Tensor


def tower_forward(tower: Tower, params: Mapping[str, Tensor], x: Tensor) -> Tuple[Tensor, TowerCache]:
    h = x
    caches = []
    for block in tower.blocks:
        z = conv2d_forward(h, tower.conv_layer(params, block))
        padded = pad_to_pool(relu(z), block.pool)
        caches.append(BlockCache(x=h, z=z, padded=padded))
        h = maxpool2d_forward(padded, block.pool)

    pooled = global_maxpool_forward(h)
    out = dense_forward(pooled, tower.projection(params)) if tower.projected else pooled
    return out, TowerCache(blocks=tuple(caches), final_map=h, pooled=pooled)


def tower_backward(
    tower: Tower,
    params: Mapping[str, Tensor],
    cache: TowerCache,
    d_out: Tensor,
) -> Dict[str, Tensor]:
    grads: Dict[str, Tensor] = {}
    d_pooled: Optional[Tensor] = d_out
    if tower.projected:
        g = dense_backward(cache.pooled, tower.projection(params), d_out)
        grads[f"{tower.prefix}.proj.weights"] = g.dweights
        grads[f"{tower.prefix}.proj.bias"] = g.dbias
        d_pooled = g.dx

    d_h = global_maxpool_backward(cache.final_map, d_pooled)
    for index in reversed(range(tower.depth)):
        block, bc = tower.blocks[index], cache.blocks[index]
        d_padded = maxpool2d_backward(bc.padded, block.pool, d_h)
        d_z = relu_backward(bc.z, unpad(d_padded, bc.z.shape))
        g = conv2d_backward(bc.x, tower.conv_layer(params, block), d_z, input_grad=index > 0)
        grads[f"{tower.prefix}.{block.name}.kernel"] = g.dkernel
        grads[f"{tower.prefix}.{block.name}.bias"] = g.dbias
        d_h = g.dx
    return grads
