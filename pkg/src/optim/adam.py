"""ADAM with bias-corrected moment estimates."""

from dataclasses import dataclass
from typing import Dict, Mapping, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from src.exception import ShapeError, TrainingError
from src.tensor import Tensor, Zeros, create


class AdamHyperParams(BaseModel):
    """Optimizer section of the run configuration."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    learning_rate: float = Field(default=1e-3, ge=0.0)
    beta1: float = Field(default=0.9, ge=0.0, lt=1.0)
    beta2: float = Field(default=0.999, ge=0.0, lt=1.0)
    epsilon: float = Field(default=1e-8, gt=0.0)


@dataclass(frozen=True)
class AdamState:
    hyper: AdamHyperParams
    m: Dict[str, Tensor]
    v: Dict[str, Tensor]
    t: int = 0

    @classmethod
    def fresh(cls, params: Mapping[str, Tensor], hyper: AdamHyperParams = AdamHyperParams()) -> "AdamState":
        zeros = {name: create(p.shape, Zeros(), dtype=p.dtype) for name, p in params.items()}
        return cls(hyper=hyper, m=dict(zeros), v=dict(zeros), t=0)


def adam_step(
    params: Mapping[str, Tensor],
    grads: Mapping[str, Tensor],
    state: AdamState,
) -> Tuple[Dict[str, Tensor], AdamState]:
    """One update of every parameter; returns new params and state, inputs untouched."""
    if set(grads) != set(params):
        missing = sorted(set(params) ^ set(grads))
        raise ShapeError(f"gradients do not match parameters: {missing[:5]}", op="adam_step")

    for name, g in grads.items():
        if g.shape != params[name].shape:
            raise ShapeError(
                f"gradient for {name} has shape {g.shape}, parameter has {params[name].shape}",
                op="adam_step",
            )
        if not g.is_finite():
            raise TrainingError(f"non-finite gradient for {name}; parameters not updated", parameter=name)

    h = state.hyper
    t = state.t + 1
    correction1 = 1.0 - h.beta1 ** t
    correction2 = 1.0 - h.beta2 ** t

    new_params: Dict[str, Tensor] = {}
    new_m: Dict[str, Tensor] = {}
    new_v: Dict[str, Tensor] = {}
    for name, theta in params.items():
        g = grads[name].array
        m = h.beta1 * state.m[name].array + (1.0 - h.beta1) * g
        v = h.beta2 * state.v[name].array + (1.0 - h.beta2) * (g * g)
        m_hat = m / correction1
        v_hat = v / correction2
        update = h.learning_rate * m_hat / (np.sqrt(v_hat) + h.epsilon)
        new_params[name] = Tensor.from_array((theta.array - update).astype(theta.dtype, copy=False))
        new_m[name] = Tensor.from_array(m.astype(theta.dtype, copy=False))
        new_v[name] = Tensor.from_array(v.astype(theta.dtype, copy=False))

    return new_params, AdamState(hyper=h, m=new_m, v=new_v, t=t)
