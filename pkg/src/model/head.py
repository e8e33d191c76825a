"""Fused dense classification head."""

from dataclasses import dataclass
from typing import Dict, Mapping, Optional, Sequence, Tuple

import numpy as np

from src.core.models import MODALITY_ORDER, Mode, Modality, N_CLUSTERS
from src.exception import ConfigurationError
from src.model.config import DEFAULT_HEAD_WIDTHS, TOWER_WIDTH
from src.nn import (
    DenseLayer,
    DropoutSpec,
    dense_backward,
    dense_forward,
    dropout,
    dropout_backward,
    relu,
    relu_backward,
)
from src.tensor import Tensor


@dataclass(frozen=True)
class DenseBlock:
    name: str
    fan_in: int
    fan_out: int
    hidden: bool  # ReLU + dropout follow the affine map


@dataclass(frozen=True)
class FusionHead:
    modalities: Tuple[Modality, ...]
    tower_width: int
    blocks: Tuple[DenseBlock, ...]
    dropout: float

    @property
    def input_width(self) -> int:
        return self.tower_width * len(self.modalities)

    @property
    def n_classes(self) -> int:
        return self.blocks[-1].fan_out

    @property
    def hidden_blocks(self) -> Tuple[DenseBlock, ...]:
        return tuple(b for b in self.blocks if b.hidden)

    def parameter_shapes(self) -> Dict[str, Tuple[int, ...]]:
        shapes: Dict[str, Tuple[int, ...]] = {}
        for block in self.blocks:
            shapes[f"head.{block.name}.weights"] = (block.fan_in, block.fan_out)
            shapes[f"head.{block.name}.bias"] = (block.fan_out,)
        return shapes

    def layer(self, params: Mapping[str, Tensor], block: DenseBlock) -> DenseLayer:
        return DenseLayer(weights=params[f"head.{block.name}.weights"], bias=params[f"head.{block.name}.bias"])


def build_fusion_head(
    modalities: Sequence[Modality],
    tower_width: int = TOWER_WIDTH,
    widths: Sequence[int] = DEFAULT_HEAD_WIDTHS,
    n_classes: int = N_CLUSTERS,
    dropout_rate: float = 0.2,
) -> FusionHead:
    """Input is the concatenation of tower outputs in canonical modality order."""
    ordered = tuple(m for m in MODALITY_ORDER if m in set(modalities))
    if not ordered:
        raise ConfigurationError("the fusion head needs at least one modality", config_key="model.modalities")

    blocks = []
    fan_in = tower_width * len(ordered)
    for index, width in enumerate(widths):
        blocks.append(DenseBlock(name=f"dense{index + 1}", fan_in=fan_in, fan_out=width, hidden=True))
        fan_in = width
    blocks.append(DenseBlock(name="logits", fan_in=fan_in, fan_out=n_classes, hidden=False))
    return FusionHead(modalities=ordered, tower_width=tower_width, blocks=tuple(blocks), dropout=dropout_rate)


@dataclass(frozen=True)
class DenseCache:
    x: Tensor
    z: Tensor
    mask: Optional[Tensor]


def head_forward(
    head: FusionHead,
    params: Mapping[str, Tensor],
    features: Tensor,
    mode: Mode = Mode.EVAL,
    seeds: Optional[Sequence[np.random.SeedSequence]] = None,
) -> Tuple[Tensor, Tuple[DenseCache, ...]]:
    """Returns the logits and the per-block cache; `seeds` holds one entry per hidden block in train mode."""
    spec = DropoutSpec(rate=head.dropout, mode=mode)
    h = features
    caches = []
    hidden_index = 0
    for block in head.blocks:
        z = dense_forward(h, head.layer(params, block))
        if not block.hidden:
            caches.append(DenseCache(x=h, z=z, mask=None))
            h = z
            continue
        seed = seeds[hidden_index] if seeds is not None else None
        y, mask = dropout(relu(z), spec, seed=seed)
        caches.append(DenseCache(x=h, z=z, mask=mask))
        hidden_index += 1
        h = y
    return h, tuple(caches)


def head_backward(
    head: FusionHead,
    params: Mapping[str, Tensor],
    caches: Sequence[DenseCache],
    d_logits: Tensor,
) -> Tuple[Dict[str, Tensor], Tensor]:
    """Parameter gradients plus the gradient w.r.t. the fused feature vector."""
    grads: Dict[str, Tensor] = {}
    d = d_logits
    for block, cache in zip(reversed(head.blocks), reversed(caches)):
        if block.hidden:
            d = relu_backward(cache.z, dropout_backward(cache.mask, d))
        g = dense_backward(cache.x, head.layer(params, block), d)
        grads[f"head.{block.name}.weights"] = g.dweights
        grads[f"head.{block.name}.bias"] = g.dbias
        d = g.dx
    return grads, d
