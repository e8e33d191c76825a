"""MoodNet: per-modality towers fused by a dense softmax head.

The network object is a pure description derived from a ModelConfig. Parameters
live outside it in a ModelParams mapping so that training can swap whole
parameter sets without touching the network.
"""

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, Iterator, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
from numpy.typing import DTypeLike

from src.core.models import Mode, Modality
from src.exception import InputError, ShapeError, StateError, raise_shape_mismatch
from src.model.config import ModelConfig
from src.model.head import DenseCache, FusionHead, build_fusion_head, head_backward, head_forward
from src.model.towers import (
    Tower,
    TowerCache,
    build_audio_tower,
    build_text_tower,
    tower_backward,
    tower_forward,
)
from src.nn import ConvLayer, DenseLayer, softmax
from src.optim import softmax_ce_grad
from src.tensor import Tensor, stack_concat

DropoutSeed = Union[int, Sequence[int]]


class ModelParams(Mapping[str, Tensor]):
    """Immutable, ordered name -> tensor mapping."""

    __slots__ = ("_tensors",)

    def __init__(self, tensors: Mapping[str, Tensor]):
        self._tensors: Dict[str, Tensor] = dict(tensors)

    def __getitem__(self, name: str) -> Tensor:
        return self._tensors[name]

    def __iter__(self) -> Iterator[str]:
        return iter(self._tensors)

    def __len__(self) -> int:
        return len(self._tensors)

    def __repr__(self) -> str:
        return f"ModelParams({len(self)} tensors, {self.count()} scalars)"

    def shapes(self) -> Dict[str, Tuple[int, ...]]:
        return {name: t.shape for name, t in self._tensors.items()}

    def count(self) -> int:
        return sum(t.size for t in self._tensors.values())

    @property
    def dtype(self) -> np.dtype:
        return next(iter(self._tensors.values())).dtype

    def astype(self, dtype: DTypeLike) -> "ModelParams":
        return ModelParams({name: t.astype(dtype) for name, t in self._tensors.items()})

    def replace(self, updates: Mapping[str, Tensor]) -> "ModelParams":
        unknown = set(updates) - set(self._tensors)
        if unknown:
            raise ShapeError(f"unknown parameters: {sorted(unknown)}", op="replace")
        merged = dict(self._tensors)
        merged.update(updates)
        return ModelParams(merged)


@dataclass
class ForwardCache:
    """Activations recorded by a train-mode forward pass; usable by exactly one backward pass."""
    params: ModelParams
    towers: Dict[Modality, TowerCache]
    head: Tuple[DenseCache, ...]
    logits: Tensor
    consumed: bool = field(default=False)


@dataclass(frozen=True)
class ForwardResult:
    probs: Tensor
    logits: Tensor
    cache: Optional[ForwardCache] = None

    @property
    def prediction(self) -> int:
        return self.probs.argmax()


class MoodNet:
    def __init__(self, config: ModelConfig):
        self.config = config
        self.towers: Dict[Modality, Tower] = {}
        if config.uses(Modality.AUDIO):
            self.towers[Modality.AUDIO] = build_audio_tower(
                config.depth,
                input_shape=config.audio_shape,
                channels=config.channels,
                width=config.tower_width,
            )
        if config.uses(Modality.LYRICS):
            self.towers[Modality.LYRICS] = build_text_tower(
                config.depth,
                config.lines_max,
                config.words_max,
                embedding_dim=config.embedding_dim,
                channels=config.channels,
                width=config.tower_width,
            )
        self.head: FusionHead = build_fusion_head(
            config.modalities,
            tower_width=config.tower_width,
            widths=config.head_widths,
            n_classes=config.n_classes,
            dropout_rate=config.dropout,
        )

    # ------------------------------------------------------------------
    # Parameters
    # ------------------------------------------------------------------

    def parameter_shapes(self) -> Dict[str, Tuple[int, ...]]:
        """Every parameter name and shape: towers in modality order, then the head."""
        shapes: Dict[str, Tuple[int, ...]] = {}
        for tower in self.towers.values():
            shapes.update(tower.parameter_shapes())
        shapes.update(self.head.parameter_shapes())
        return shapes

    def parameter_count(self) -> int:
        return sum(int(np.prod(s)) for s in self.parameter_shapes().values())

    def init_params(self, dtype: DTypeLike = np.float64) -> ModelParams:
        """Glorot-uniform weights and zero biases; layer j draws from child j of the config seed."""
        shapes = self.parameter_shapes()
        layer_names = [name.rsplit(".", 1)[0] for name in shapes if not name.endswith(".bias")]
        children = np.random.SeedSequence(self.config.seed).spawn(len(layer_names))

        tensors: Dict[str, Tensor] = {}
        for layer_name, seed in zip(layer_names, children):
            if f"{layer_name}.kernel" in shapes:
                _, _, cin, cout = shapes[f"{layer_name}.kernel"]
                conv = ConvLayer.glorot(cin, cout, seed=seed, dtype=dtype)
                tensors[f"{layer_name}.kernel"], tensors[f"{layer_name}.bias"] = conv.kernel, conv.bias
            else:
                fan_in, fan_out = shapes[f"{layer_name}.weights"]
                dense = DenseLayer.glorot(fan_in, fan_out, seed=seed, dtype=dtype)
                tensors[f"{layer_name}.weights"], tensors[f"{layer_name}.bias"] = dense.weights, dense.bias
        return ModelParams({name: tensors[name] for name in shapes})

    def check_params(self, params: Mapping[str, Tensor]) -> None:
        expected = self.parameter_shapes()
        if set(params) != set(expected):
            diff = sorted(set(params) ^ set(expected))
            raise ShapeError(f"parameter names do not match the architecture: {diff[:5]}", op="check_params")
        for name, shape in expected.items():
            if params[name].shape != shape:
                raise_shape_mismatch(f"param {name}", shape, params[name].shape)

    # ------------------------------------------------------------------
    # Forward / backward
    # ------------------------------------------------------------------

    def _inputs(self, audio: Optional[Tensor], lyrics: Optional[Tensor], dtype: np.dtype) -> Dict[Modality, Tensor]:
        given = {Modality.AUDIO: audio, Modality.LYRICS: lyrics}
        inputs: Dict[Modality, Tensor] = {}
        for modality, x in given.items():
            if modality not in self.towers:
                if x is not None:
                    raise InputError(f"{modality.value} input given to a model without a {modality.value} tower")
                continue
            if x is None:
                raise InputError(f"missing {modality.value} input", source=modality.value)
            expected = self.towers[modality].input_shape
            if x.shape != expected:
                raise_shape_mismatch(f"{modality.value} input", expected, x.shape)
            inputs[modality] = x if x.dtype == dtype else x.astype(dtype)
        return inputs

    def _dropout_seeds(self, seed: Optional[DropoutSeed]) -> Sequence[np.random.SeedSequence]:
        if seed is None:
            raise StateError("train-mode forward requires a dropout seed")
        return np.random.SeedSequence(seed).spawn(len(self.head.hidden_blocks))

    def forward(
        self,
        params: ModelParams,
        audio: Optional[Tensor] = None,
        lyrics: Optional[Tensor] = None,
        mode: Mode = Mode.EVAL,
        seed: Optional[DropoutSeed] = None,
    ) -> ForwardResult:
        """Class probabilities; train mode also returns the cache for one backward pass."""
        self.check_params(params)
        inputs = self._inputs(audio, lyrics, params.dtype)
        seeds = self._dropout_seeds(seed) if mode is Mode.TRAIN else None

        features = []
        tower_caches: Dict[Modality, TowerCache] = {}
        for modality, tower in self.towers.items():
            out, tower_caches[modality] = tower_forward(tower, params, inputs[modality])
            features.append(out)

        logits, head_cache = head_forward(self.head, params, stack_concat(features), mode=mode, seeds=seeds)
        probs = softmax(logits)
        if mode is not Mode.TRAIN:
            return ForwardResult(probs=probs, logits=logits)
        cache = ForwardCache(params=params, towers=tower_caches, head=head_cache, logits=logits)
        return ForwardResult(probs=probs, logits=logits, cache=cache)

    def backward(self, params: ModelParams, cache: Optional[ForwardCache], label: int) -> ModelParams:
        """Gradient of the cross-entropy loss w.r.t. every parameter, same names and shapes."""
        if cache is None:
            raise StateError("backward needs the cache of a train-mode forward pass")
        if cache.consumed:
            raise StateError("forward cache was already used by a backward pass")
        if cache.params is not params:
            raise StateError("forward cache was recorded with a different parameter set")
        cache.consumed = True

        d_logits = softmax_ce_grad(cache.logits, label)
        grads, d_features = head_backward(self.head, params, cache.head, d_logits)

        offset = 0
        d = d_features.array
        for modality, tower in self.towers.items():
            d_tower = Tensor.from_array(d[offset:offset + tower.width].copy())
            offset += tower.width
            grads.update(tower_backward(tower, params, cache.towers[modality], d_tower))

        return ModelParams({name: grads[name] for name in params})


@lru_cache(maxsize=32)
def build_network(config: ModelConfig) -> MoodNet:
    return MoodNet(config)


def forward(
    config: ModelConfig,
    params: ModelParams,
    audio: Optional[Tensor] = None,
    lyrics: Optional[Tensor] = None,
    mode: Mode = Mode.EVAL,
    seed: Optional[DropoutSeed] = None,
) -> ForwardResult:
    return build_network(config).forward(params, audio=audio, lyrics=lyrics, mode=mode, seed=seed)


def backward(config: ModelConfig, params: ModelParams, cache: Optional[ForwardCache], label: int) -> ModelParams:
    return build_network(config).backward(params, cache, label)
